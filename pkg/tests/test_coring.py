import functools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coringkit import fixtures
from coringkit.algebra import AlgebraMorphism, bimodule_invariants, matrix_algebra, regular_bimodule, truncated_polynomial_algebra
from coringkit.coring import (
    Coring,
    CoringComodule,
    canonical_coring,
    coinvariants,
    comodule_from_grouplike,
    coring_from_precoring,
    dual_product,
    dual_ring,
    find_grouplikes,
    is_grouplike,
    regular_comodule,
    same_coring_structure,
    trivial_coring,
    validate_comodule,
    validate_coring,
)
from coringkit.errors import PreconditionError
from coringkit.linalg import GF, QQ


def coring(load, fx, name="C"):
    return load(fx).get("corings", name)


def test_fixture_corings_validate(load):
    for fx in fixtures.NAMES:
        inst = load(fx)
        for c in inst.objects["corings"].values():
            assert validate_coring(c).ok, (fx, c.name)


def test_canonical_coring_x2(load):
    c = coring(load, "fx_x2")
    assert c.dim == 4
    x1 = c.bimodule.left[1] @ np.array([1, 0, 0, 0], dtype=object)  # x (x) 1
    assert list(c.counit_of(x1)) == [0, 1]


def test_canonical_coring_mat2(load):
    assert coring(load, "fx_mat2", "C1").dim == 16


def test_degenerate_extension_gives_trivial_coring():
    A = truncated_polynomial_algebra(QQ, 2)
    c = canonical_coring(AlgebraMorphism(A, A, QQ.eye(2)))
    assert c.dim == 2
    assert same_coring_structure(c, trivial_coring(A)) or validate_coring(c).ok


def test_broken_counit_is_reported(load):
    c = coring(load, "fx_x2")
    counit = c.counit.copy()
    counit[:, 0] = QQ.zeros(2)
    rep = validate_coring(Coring(c.bimodule, c.coproduct_lift, counit))
    assert {"left_counit", "right_counit"} & set(rep.axioms_violated)


def test_comodules(load):
    c = coring(load, "fx_x2")
    assert validate_comodule(regular_comodule(c)).ok
    g = c.known_grouplikes[0]
    A = comodule_from_grouplike(c, g)
    assert validate_comodule(A).ok
    assert validate_comodule(load("fx_x2").get("comodules", "A")).ok
    doubled = CoringComodule(A.module, A.coaction_lift * 2, c)
    assert "counit" in validate_comodule(doubled).axioms_violated or not validate_comodule(doubled).ok


def test_grouplike_from_fx_triv(load):
    res = find_grouplikes(coring(load, "fx_triv"))
    assert res.exhaustive and len(res.grouplikes) == 1 and list(res.grouplikes[0]) == [1]


def test_canonical_grouplike_always_returned(load):
    for fx, name in (("fx_x2", "C"), ("fx_mat2", "C1"), ("fx_mat2", "C2")):
        c = coring(load, fx, name)
        g = c.known_grouplikes[0]
        res = find_grouplikes(c, budget=16)
        assert any(np.array_equal(g, h) for h in res.grouplikes)


def test_fx_c2_grouplikes_exhaustive(load):
    c = coring(load, "fx_c2")
    res = find_grouplikes(c)
    # the scan runs over the 9-point slice eps(g) = 1 of the 81 vectors
    assert res.exhaustive and res.candidates_total == 9
    assert any(list(h) == [1, 0, 0, 0] for h in res.grouplikes)
    brute = [v for v in c.field.vectors(4) if is_grouplike(c, v)]
    assert sorted(map(tuple, brute)) == sorted(map(tuple, res.grouplikes))


def test_grouplikes_over_q_are_not_guessed(load):
    res = find_grouplikes(coring(load, "fx_taft"))
    assert not res.exhaustive and res.status == "non-exhaustive"
    res = find_grouplikes(coring(load, "fx_taft"), candidates=[[1, 0]])
    assert len(res.grouplikes) == 1


def test_coinvariants(load):
    triv = coring(load, "fx_triv")
    assert coinvariants(comodule_from_grouplike(triv, QQ.array([1])), QQ.array([1])).shape[1] == 1
    c2 = load("fx_c2")
    g = c2.get("elements", "g")
    assert coinvariants(c2.get("comodules", "A"), g).shape[1] == 1
    m = coring(load, "fx_mat2", "C1")
    g1 = load("fx_mat2").get("elements", "g1")
    basis = coinvariants(comodule_from_grouplike(m, g1), g1)
    assert basis.shape[1] == 1 and list(basis[:, 0]) in ([1, 0, 0, 1], [2, 0, 0, 2])


def test_coinvariants_stable_under_coinvariant_ring(load):
    c = coring(load, "fx_mat2", "C2")
    g = c.known_grouplikes[0]
    A = comodule_from_grouplike(c, g)
    B = coinvariants(A, g)
    F = c.field
    for i in range(B.shape[1]):
        for j in range(B.shape[1]):
            prod = F.dot(A.module.right_mat(B[:, j]), B[:, i])
            assert np.array_equal(F.dot(A.rho, prod), F.dot(A.tensor.project, F.kron(prod, g)))


def test_dual_ring(load):
    triv = dual_ring(coring(load, "fx_triv"))
    assert triv.dim == 1
    R = dual_ring(coring(load, "fx_x2"))
    assert R.dim == 4
    # End_Q(A) = M2(Q): center of dimension 1
    assert bimodule_invariants(regular_bimodule(R.algebra)).shape[1] == 1
    assert not R.algebra.is_commutative
    c = coring(load, "fx_x2")
    assert np.array_equal(R.element(R.algebra.unit), c.counit)


@pytest.mark.parametrize("fx", fixtures.NAMES)
def test_dual_ring_associative(load, fx):
    for c in load(fx).objects["corings"].values():
        R = dual_ring(c)
        F = c.field
        n = R.dim
        basis = [R.element(F.unit_vector(n, i)) for i in range(n)]
        for a in basis:
            for b in basis:
                ab = dual_product(c, a, b)
                for d in basis:
                    assert np.array_equal(dual_product(c, ab, d), dual_product(c, a, dual_product(c, b, d)))


def test_precoring_unital_case(load):
    c = coring(load, "fx_x2")
    res = coring_from_precoring(c)
    assert np.array_equal(res.projection, QQ.eye(4))
    assert same_coring_structure(res.coring, c) or res.coring.dim == c.dim


def test_precoring_weak_is_smaller(load):
    inst = load("fx_weak2")
    W, Wpre = inst.get("corings", "W"), inst.get("corings", "Wpre")
    assert W.dim < 4 and W.dim == Wpre.dim
    assert same_coring_structure(W, Wpre)


def test_not_grouplike_rejected(load):
    c = coring(load, "fx_x2")
    with pytest.raises(PreconditionError):
        comodule_from_grouplike(c, QQ.array([1, 1, 0, 0]))


@functools.lru_cache(maxsize=None)
def _mat2_c2():
    return fixtures.load("fx_mat2").get("corings", "C2")


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6))
def test_grouplike_invariance_random_candidates(seed):
    c = _mat2_c2()
    rng = np.random.default_rng(seed)
    cands = [c.field.random((c.dim,), rng) for _ in range(5)] + [c.known_grouplikes[0]]
    for g in find_grouplikes(c, candidates=cands, budget=1).grouplikes:
        F = c.field
        gg = F.dot(c.tensor_square.project, F.kron(g, g))
        assert np.array_equal(F.dot(c.delta, g), gg)
        assert np.array_equal(c.counit_of(g), c.algebra.unit)
