import numpy as np
from hypothesis import given, settings, strategies as st

from coringkit.coalgebra import (
    Coalgebra,
    CoalgebraComodule,
    CoalgebraMorphism,
    comodule_via_morphism,
    cotensor,
    dual_algebra,
    dual_coalgebra,
    grouplike_coalgebra,
    regular_comodule,
    trivial_coalgebra,
    validate_coalgebra,
    validate_comodule,
)
from coringkit.algebra import matrix_algebra, upper_triangular_algebra, validate_algebra
from coringkit.linalg import GF, QQ

F3 = GF(3)
KC2 = grouplike_coalgebra(F3, 2)


def taft(load):
    return load("fx_taft").get("coalgebras", "T")


def test_validation_examples(load):
    assert validate_coalgebra(KC2).ok
    assert validate_coalgebra(taft(load)).ok
    bad = Coalgebra(F3, KC2.comult.copy(), F3.array([1, 0]))
    rep = validate_coalgebra(bad)
    assert "right_counit" in rep.axioms_violated or "left_counit" in rep.axioms_violated
    assert any(v.where[0] == 1 for v in rep.violations)


def test_cotensor_dimensions(load):
    S = cotensor(regular_comodule(KC2), regular_comodule(KC2))
    assert S.dim == 2
    # each basis vector is h (x) h for a grouplike h
    for col in range(2):
        v = S.inclusion[:, col]
        assert v[1] == 0 and v[2] == 0
    T = taft(load)
    assert cotensor(regular_comodule(T), regular_comodule(T)).dim == 2


def test_cotensor_over_ground_via_counit():
    k = trivial_coalgebra(F3)
    eps = CoalgebraMorphism(KC2, k, F3.array([[1, 1]]))
    M = comodule_via_morphism(regular_comodule(KC2), eps)
    assert cotensor(M, M).dim == 4
    assert np.array_equal(M.right, F3.kron(F3.eye(2), F3.array([[1]])))


def test_comodule_via_identity_is_unchanged():
    ident = CoalgebraMorphism(KC2, KC2, F3.eye(2))
    M = comodule_via_morphism(regular_comodule(KC2), ident)
    assert np.array_equal(M.right, KC2.delta) and np.array_equal(M.left, KC2.delta)


def test_taft_pushed_to_grouplike_part(load):
    T = taft(load)
    kg = trivial_coalgebra(QQ)
    pi = CoalgebraMorphism(T, kg, QQ.array([[1, 0]]))
    assert pi.validate().ok
    assert validate_comodule(comodule_via_morphism(regular_comodule(T), pi)).ok


def test_cotensor_equalizes():
    M = regular_comodule(KC2)
    S = cotensor(M, M)
    eq = F3.sub(F3.kron(M.right, F3.eye(2)), F3.kron(F3.eye(2), M.left))
    assert not np.any(F3.dot(eq, S.inclusion))
    assert S.dim == 4 - np.linalg.matrix_rank(eq.astype(float))


def test_duality_smoke(load):
    for C in (KC2, taft(load), dual_coalgebra(upper_triangular_algebra(GF(2)))):
        assert validate_algebra(dual_algebra(C)).ok
    assert validate_coalgebra(dual_coalgebra(matrix_algebra(F3, 2))).ok


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["id", "eps", "swap"]), st.integers(1, 3))
def test_transport_preserves_validity(which, n):
    C = grouplike_coalgebra(F3, 2)
    k = trivial_coalgebra(F3)
    pi = {
        "id": CoalgebraMorphism(C, C, F3.eye(2)),
        "eps": CoalgebraMorphism(C, k, F3.array([[1, 1]])),
        "swap": CoalgebraMorphism(C, C, F3.array([[0, 1], [1, 0]])),
    }[which]
    # direct sum of n copies of the regular comodule
    R = regular_comodule(C)
    big = np.zeros((2 * n * 2, 2 * n), dtype=np.int64)
    left = np.zeros((2 * 2 * n, 2 * n), dtype=np.int64)
    for b in range(n):
        for i in range(2):
            big[(2 * b + i) * 2 + i, 2 * b + i] = 1
            left[i * 2 * n + 2 * b + i, 2 * b + i] = 1
    M = CoalgebraComodule(C, 2 * n, big, left)
    assert validate_comodule(M).ok
    assert validate_comodule(comodule_via_morphism(M, pi)).ok
