import functools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coringkit import fixtures
from coringkit.algebra import AlgebraMorphism, direct_sum, hom_space, regular_bimodule
from coringkit.coring import comodule_map_failures, trivial_coring
from coringkit.errors import PreconditionError
from coringkit.fixtures import oracle
from coringkit.separability import (
    E_from_gamma,
    analyze_extension,
    build_nu_from_e,
    check_forgetful_separable,
    check_induction_separable,
    colinearity_residual,
    cosep_idempotent,
    gamma_from_pi,
    maschke_split,
    nu_naturality_failures,
)


@functools.lru_cache(maxsize=None)
def small_corings():
    return tuple(oracle.enumerate_corings(max_dim=2))


def test_trivial_coring_e_is_one(load):
    c = load("fx_triv").get("corings", "C")
    v = check_induction_separable(c)
    assert v.feasible and v.solution_dim == 0
    assert list(v.certificate.e) == [1]


def test_mat2_canonical_has_e(load):
    c = load("fx_mat2").get("corings", "C1")
    v = check_induction_separable(c)
    assert v.feasible and v.certificate.verify().ok
    assert v.solution_dim == 3


def test_x2_canonical_has_no_e(load):
    c = load("fx_x2").get("corings", "C")
    v = check_induction_separable(c)
    assert not v.feasible and v.certificate is None
    assert v.witness["counit_image_dim"] == 1
    assert v.witness["image_contains_one"] is False


def test_library_matches_brute_force_on_all_small_corings():
    n_e = n_gamma = 0
    for rc in small_corings():
        c = oracle.to_coring(rc)
        brute_e = oracle.brute_invariant_e(rc)
        brute_g = oracle.brute_cointegrals(rc, limit=1)
        ind = check_induction_separable(c)
        forg = check_forgetful_separable(c)
        assert ind.feasible == bool(brute_e)
        assert forg.feasible == bool(brute_g)
        n_e += ind.feasible
        n_gamma += forg.feasible
    assert (len(small_corings()), n_e, n_gamma) == (57, 31, 39)


def test_nu_is_identity_on_trivial_coring(load):
    c = load("fx_triv").get("corings", "C")
    cert = check_induction_separable(c).certificate
    s = build_nu_from_e(cert, regular_bimodule(c.algebra))
    assert np.array_equal(s.nu, c.field.eye(1))


def test_nu_splits_psi_on_mat2(load):
    c = load("fx_mat2").get("corings", "C1")
    F = c.field
    cert = check_induction_separable(c).certificate
    M = regular_bimodule(c.algebra)
    s = build_nu_from_e(cert, M)
    assert np.array_equal(F.dot(s.psi, s.nu), F.eye(M.dim))


def test_nu_is_natural_on_random_maps(load):
    c = load("fx_mat2").get("corings", "C1")
    F = c.field
    cert = check_induction_separable(c).certificate
    M = regular_bimodule(c.algebra)
    N = direct_sum(M, M)
    hom = hom_space(M, N, "RightLinear")
    rng = np.random.default_rng(7)
    for _ in range(3):
        coeffs = F.random((len(hom.basis),), rng)
        f = F.zeros((N.dim, M.dim))
        for a, b in zip(coeffs, hom.basis):
            f = F.add(f, F.reduce(a * b))
        assert not nu_naturality_failures(cert, f, M, N)


def test_trivial_coring_forgetful(load):
    A = load("fx_x2").get("algebras", "A")
    v = check_forgetful_separable(trivial_coring(A))
    assert v.feasible and v.certificate.verify().ok


def test_x2_forgetful_gives_retraction(load):
    inst = load("fx_x2")
    c = inst.get("corings", "C")
    ext = inst.get("algebra_morphisms", "k_to_A")
    v = check_forgetful_separable(c)
    assert v.feasible
    E = E_from_gamma(c, ext, v.certificate.gamma)
    assert E is not None and E[0, 0] == 1


def test_taft_not_coseparable(load):
    c = load("fx_taft").get("corings", "C")
    v = check_forgetful_separable(c)
    assert not v.feasible and v.witness


@pytest.mark.parametrize("fx,name", [("fx_x2", "C"), ("fx_mat2", "C2"), ("fx_c2", "C")])
def test_cosep_idempotent_identities(load, fx, name):
    c = load(fx).get("corings", name)
    v = check_forgetful_separable(c)
    if not v.feasible:
        pytest.skip("no cointegral")
    pi = cosep_idempotent(v.certificate)
    assert pi.verify().ok
    back = gamma_from_pi(pi)
    assert back.verify().ok


def test_extension_b_equals_a(load):
    inst = load("fx_x2")
    A = inst.get("algebras", "A")
    ident = AlgebraMorphism(A, A, A.field.eye(A.dim))
    r = analyze_extension(ident)
    assert r.separable.feasible and r.split.feasible and r.forgetful.feasible and r.induction.feasible


def test_extension_matrix_algebra(load):
    inst = load("fx_mat2")
    r = analyze_extension(inst.get("algebra_morphisms", "k_to_A"))
    assert r.separable.feasible and r.induction.feasible
    assert r.split.feasible and r.forgetful.feasible
    assert r.split.solution_dim == r.forgetful.solution_dim


def test_extension_dual_numbers_split_not_separable(load):
    inst = load("fx_x2")
    r = analyze_extension(inst.get("algebra_morphisms", "k_to_A"))
    assert not r.separable.feasible and not r.induction.feasible
    assert r.split.feasible and r.forgetful.feasible
    # E(1) = 1 is forced, E(x) is free
    assert r.split.certificate[0, 0] == 1
    assert r.split.solution_dim == r.forgetful.solution_dim == 1


def test_extension_agrees_with_coring_checks(load):
    for fx, name in (("fx_x2", "k_to_A"), ("fx_mat2", "k_to_A"), ("fx_mat2", "D_to_A")):
        ext = load(fx).get("algebra_morphisms", name)
        r = analyze_extension(ext)
        assert r.separable.feasible == r.induction.feasible
        assert r.b_summand
        assert r.split.feasible == r.forgetful.feasible


@functools.lru_cache(maxsize=None)
def _x2_maschke():
    inst = fixtures.load("fx_x2")
    c = inst.get("corings", "C")
    M, N = inst.get("comodules", "Creg"), inst.get("comodules", "A")
    f, s = inst.get("maps", "f"), inst.get("maps", "s")
    g = check_forgetful_separable(c).certificate
    return c, M, N, f, s, g


def test_maschke_split_x2(load):
    c, M, N, f, s, g = _x2_maschke()
    F = c.field
    assert not comodule_map_failures(f, M, N)
    t = maschke_split(f, s, g, M, N)
    assert np.array_equal(F.dot(f, t), F.eye(N.dim))
    assert not np.any(colinearity_residual(t, N, M))


def test_maschke_rejects_bad_section(load):
    c, M, N, f, s, g = _x2_maschke()
    with pytest.raises(PreconditionError):
        maschke_split(f, c.field.zeros(s.shape), g, M, N)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_maschke_any_right_linear_section(vals):
    c, M, N, f, s, g = _x2_maschke()
    F = c.field
    # right-A-linear maps A -> ker f shifted onto s
    ker = hom_space(N.module.only_right(), M.module.only_right(), "RightLinear").basis
    s2 = s
    for v, b in zip(vals, ker):
        cand = F.add(s2, F.reduce(v * b) if F.is_finite else v * b)
        if np.array_equal(F.dot(f, cand), F.eye(N.dim)):
            s2 = cand
    t = maschke_split(f, s2, g, M, N)
    assert np.array_equal(F.dot(f, t), F.eye(N.dim))
    assert not np.any(colinearity_residual(t, N, M))
