"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` to see the summary lines.
"""
import contextlib
import dataclasses
import json

import numpy as np
import pytest

from coringkit import cli, fixtures
from coringkit.algebra import (
    dual_basis_projectivity,
    free_module,
    matrix_algebra,
    regular_bimodule,
    truncated_polynomial_algebra,
)
from coringkit.coalgebra import validate_coalgebra
from coringkit.coring import (
    comodule_from_grouplike,
    extension_tensor,
    regular_comodule,
    same_coring_structure,
    validate_coring,
)
from coringkit.cring import (
    check_dual_forgetful_separable,
    check_dual_induction_separable,
    cring_from_algebra,
    cring_from_entwining,
    find_characters,
    invariants_coideal,
    validate_character,
    validate_cring,
)
from coringkit.entwining import coring_from_weak, coring_from_weak_via_precoring, validate_entwining
from coringkit.fixtures import oracle
from coringkit.frobenius import (
    FrobeniusSystem,
    check_frobenius,
    induced_coring_witness,
    phi_inverse_formula,
    theta_check,
    transport_R,
)
from coringkit.galois import (
    bimodule_comodule_A,
    can_coherence,
    equivalence_check,
    galois_check,
    hom_tensor_check,
    weak_image_check,
)
from coringkit.linalg import GF, QQ, rank_array
from coringkit.separability import (
    E_from_gamma,
    check_forgetful_separable,
    check_induction_separable,
    colinearity_residual,
    cosep_idempotent,
    maschke_split,
)
from test_mutations import CASES, VALIDATORS, _field_of, _obj


@pytest.fixture
def criterion(capsys):
    @contextlib.contextmanager
    def run(n, title):
        ok = False
        try:
            yield
            ok = True
        finally:
            with capsys.disabled():
                print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {title}")
    return run


def unit_grouplike(c):
    A = c.algebra
    return extension_tensor(c.extension).element(A.unit, A.unit)


def test_criterion_1_validators(criterion, load):
    with criterion(1, "fixtures validate exactly, single perturbations name their axiom"):
        for name in fixtures.NAMES:
            report, code = cli.run(["validate", name])
            assert code == 0 and report["body"]["result"]["valid"], name
        assert len(CASES) >= 20
        for kind, field, index, expected in CASES:
            obj = _obj(load, kind)
            F = _field_of(obj)
            arr = getattr(obj, field).copy()
            arr[index] = F.reduce(arr[index] + 1) if F.is_finite else arr[index] + 1
            bad = VALIDATORS[kind](dataclasses.replace(obj, **{field: arr}))
            assert set(bad.axioms_violated) == expected, (kind, field, index)


def test_criterion_2_induction_separability(criterion, load):
    with criterion(2, "invariant e on M2, rank witness on x2, e = 1 on k, oracle agreement"):
        c = load("fx_mat2").get("corings", "C1")
        F = c.field
        v = check_induction_separable(c)
        assert v.feasible
        e = v.certificate.e
        assert np.array_equal(F.dot(c.counit, e), c.algebra.unit)
        for a in range(c.algebra.dim):
            assert np.array_equal(F.dot(c.bimodule.left[a], e), F.dot(c.bimodule.right[a], e))
        x2 = check_induction_separable(load("fx_x2").get("corings", "C"))
        assert not x2.feasible
        assert x2.witness["counit_image_dim"] == 1 and x2.witness["image_contains_one"] is False
        triv = check_induction_separable(load("fx_triv").get("corings", "C"))
        assert [int(x) for x in triv.certificate.e] == [1]
        corings = oracle.enumerate_corings(max_dim=2)
        assert 0 < len(corings) <= 1000
        for rc in corings:
            assert check_induction_separable(oracle.to_coring(rc)).feasible == bool(oracle.brute_invariant_e(rc))


def test_criterion_3_coseparability(criterion, load):
    with criterion(3, "cointegral on x2, E(1) = 1, pi identities, taft infeasible, Maschke split"):
        inst = load("fx_x2")
        c = inst.get("corings", "C")
        F = c.field
        ext = inst.get("algebra_morphisms", "k_to_A")
        v = check_forgetful_separable(c)
        assert v.feasible and v.certificate.verify().ok
        E = E_from_gamma(c, ext, v.certificate.gamma)
        assert np.array_equal(F.dot(E, c.algebra.unit), ext.source.unit)
        pi = cosep_idempotent(v.certificate)
        rep = pi.verify()
        assert rep.ok and {"left_colinear", "right_colinear", "left_linear", "right_linear"} <= set(rep.checked)
        assert not check_forgetful_separable(load("fx_taft").get("corings", "C")).feasible
        M, N = inst.get("comodules", "Creg"), inst.get("comodules", "A")
        f, s = inst.get("maps", "f"), inst.get("maps", "s")
        t = maschke_split(f, s, v.certificate, M, N)
        assert np.array_equal(F.dot(f, t), F.eye(N.dim))
        assert not np.any(colinearity_residual(t, N, M))


def _projective_comodules(inst):
    for c in inst.objects["corings"].values():
        if dual_basis_projectivity(c.bimodule.only_left()) is None:
            continue
        yield regular_comodule(c)
        for m in inst.objects["comodules"].values():
            if m.coring is c:
                yield m


def test_criterion_4_frobenius(criterion, load):
    with criterion(4, "x2 Frobenius with formula phi^-1, t2dual exhaustive negative, theta, R-module roundtrips"):
        inst = load("fx_x2")
        c = inst.get("corings", "C")
        F = c.field
        ext = inst.get("algebra_morphisms", "k_to_A")
        v = check_frobenius(c)
        assert v.status == "Frobenius"
        assert [int(x) for x in v.e] == [0, 1, 1, 0]
        E = F.array([[0, 1]])
        assert np.array_equal(phi_inverse_formula(c, v.ring, ext, E), v.phi_inv)
        one, x = ext.target.basis(0), ext.target.basis(1)
        w = induced_coring_witness(ext, FrobeniusSystem(E, [(one, x), (x, one)]))
        assert np.array_equal(w.formula, w.phi_inv)
        t = check_frobenius(load("fx_t2dual").get("corings", "C"))
        assert t.status == "NoBijectiveE" and t.exhaustive and t.candidates_scanned == t.candidates_total == 8
        checked = 0
        for name in fixtures.NAMES:
            fx = load(name)
            for cor in fx.objects["corings"].values():
                fv = check_frobenius(cor)
                if fv.is_frobenius:
                    assert theta_check(cor, fv.ring, fv.e, fv.phi).ok, name
            for m in _projective_comodules(fx):
                r = transport_R(m, "to_R")
                back = transport_R(r, "to_comodule")
                assert np.array_equal(back.rho, m.rho), name
                assert np.array_equal(transport_R(back, "to_R").act, r.act), name
                checked += 1
        assert checked >= 8


def test_criterion_5_galois(criterion, load):
    with criterion(5, "c2 Galois over F3.1, equivalence on the default family, chi = can, kC2 fails, Hom-Tensor"):
        inst = load("fx_c2")
        c, g = inst.get("corings", "C"), inst.get("elements", "g")
        F = c.field
        d = galois_check(c, g)
        assert d.is_galois and d.B.dim == 1
        assert np.array_equal(F.dot(d.inclusion.matrix, F.array([1])), c.algebra.unit)
        assert np.array_equal(F.dot(d.chi, d.chi_inv), F.eye(c.dim))
        assert np.array_equal(F.dot(d.chi_inv, d.chi), F.eye(c.dim))
        rep = equivalence_check(c, g, n=3, seed=0)
        assert rep.galois and rep.family_equivalence
        assert all(can_coherence(inst.get("entwinings", "psi"), g).values())
        bad = galois_check(inst.get("corings", "kC2"), inst.get("elements", "h0"))
        assert not bad.is_galois and bad.failures[0].startswith("dimension")
        cases = [(c, g), (load("fx_x2").get("corings", "C"), None), (load("fx_mat2").get("corings", "C1"), None)]
        for cor, gl in cases:
            gl = unit_grouplike(cor) if gl is None else gl
            gd = galois_check(cor, gl)
            V = bimodule_comodule_A(cor, gl, gd.inclusion)
            N = free_module(regular_bimodule(gd.B).only_right(), 2)
            r = hom_tensor_check(V, N, comodule_from_grouplike(cor, gl))
            assert r.dim_left == r.dim_right and r.mutually_inverse


def test_criterion_6_weak(criterion, load):
    with criterion(6, "weak2 projection idempotent of rank < 4, image coring, pre-coring route, Im can = Im p"):
        inst = load("fx_weak2")
        e = inst.get("entwinings", "psi")
        F = e.field
        w = coring_from_weak(e)
        p = w.projection
        assert np.array_equal(F.dot(p, p), p)
        assert rank_array(F, p) < 4
        assert validate_coring(w.coring).ok
        pre = coring_from_weak_via_precoring(e)
        assert same_coring_structure(w.coring, pre.coring)
        assert np.array_equal(w.coring.delta, pre.coring.delta)
        assert np.array_equal(w.coring.counit, pre.coring.counit)
        assert same_coring_structure(inst.get("corings", "W"), inst.get("corings", "Wpre"))
        r = weak_image_check(inst.get("comodule_algebras", "Arho"), inst.splittings["Arho"])
        assert r["equal"]


def _character_pairs(load):
    for name in fixtures.NAMES:
        inst = load(name)
        crings = list(inst.objects["crings"].values())
        crings += [cring_from_entwining(e).cring for e in inst.objects["entwinings"].values() if validate_entwining(e).ok]
        for R in crings:
            found, exhaustive = find_characters(R)
            assert exhaustive
            yield from ((R, k) for k in found)
        for k in inst.objects["characters"].values():
            yield k.cring, k


def test_criterion_7_crings(criterion, load):
    with criterion(7, "C = k dual separability, entwining C-ring iso, coideal quotient for every character"):
        m2 = cring_from_algebra(matrix_algebra(GF(3), 2))
        x2 = cring_from_algebra(truncated_polynomial_algebra(QQ, 2))
        assert check_dual_forgetful_separable(m2).feasible
        assert not check_dual_forgetful_separable(x2).feasible
        assert check_dual_induction_separable(m2).feasible and check_dual_induction_separable(x2).feasible
        er = cring_from_entwining(load("fx_c2").get("entwinings", "psi"))
        assert validate_cring(er.cring).ok
        F = er.cring.field
        assert er.iso.shape[0] == er.iso.shape[1] == rank_array(F, er.iso)
        pairs = 0
        for R, k in _character_pairs(load):
            assert validate_character(k).ok
            res = invariants_coideal(R, k)
            assert validate_coalgebra(res.quotient).ok
            assert res.ideal.shape[1] + res.quotient.dim == R.coalgebra.dim
            pairs += 1
        assert pairs >= 3


DETERMINISM_RUNS = [
    ["validate", "fx_weak2"],
    ["build", "canonical", "fx_x2", "--ext", "k_to_A"],
    ["build", "from-weak", "fx_weak2", "--entwining", "psi"],
    ["check", "separable-induction", "fx_mat2", "--coring", "C1"],
    ["check", "coseparable", "fx_x2", "--coring", "C"],
    ["check", "frobenius", "fx_mat2", "--coring", "C1", "--seed", "0"],
    ["check", "frobenius", "fx_t2dual", "--coring", "C", "--field-override", "Q", "--seed", "0"],
    ["check", "galois", "fx_c2", "--coring", "C", "--grouplike", "g"],
    ["check", "equivalence", "fx_c2", "--coring", "C", "--grouplike", "g", "--seed", "0"],
    ["check", "dual-separable-forgetful", "fx_c2", "--cring", "R"],
    ["find", "grouplikes", "fx_c2", "--coring", "C"],
    ["find", "characters", "fx_c2", "--cring", "R"],
    ["find", "dual-ring", "fx_x2", "--coring", "C"],
    ["split-epi", "fx_x2", "--coring", "C", "--source", "Creg", "--target", "A", "--map", "f", "--section", "s"],
    ["report", "fx_c2", "--coring", "C", "--seed", "0"],
]


def test_criterion_8_determinism(criterion):
    with criterion(8, "byte-identical report bodies, stable Q-randomized Frobenius verdicts"):
        for argv in DETERMINISM_RUNS:
            a, _ = cli.run(argv)
            b, _ = cli.run(argv)
            assert json.dumps(a["body"], sort_keys=True) == json.dumps(b["body"], sort_keys=True), argv
        for name in fixtures.NAMES:
            inst = fixtures.load(name, QQ)
            for cor in inst.objects["corings"].values():
                x = check_frobenius(cor, seed=0, retries=20)
                y = check_frobenius(cor, seed=0, retries=20)
                assert x.status == y.status, name
                if x.is_frobenius:
                    assert np.array_equal(x.e, y.e)
