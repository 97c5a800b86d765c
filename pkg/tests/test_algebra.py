import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coringkit.algebra import (
    AlgebraMorphism,
    Algebra,
    balanced_tensor,
    bimodule_invariants,
    centralizer,
    dual_basis_projectivity,
    ground_algebra,
    hom_space,
    matrix_algebra,
    product_algebra,
    quotient_module,
    regular_bimodule,
    truncated_polynomial_algebra,
    upper_triangular_algebra,
    validate_algebra,
    validate_bimodule,
)
from coringkit.coring import extension_tensor
from coringkit.linalg import GF, QQ, rank_array

F3 = GF(3)
X2 = truncated_polynomial_algebra(QQ, 2)
M2 = matrix_algebra(F3, 2)


def unit_map(A):
    k = ground_algebra(A.field)
    return AlgebraMorphism(k, A, A.unit.reshape(-1, 1).copy())


def test_builtin_algebras_validate():
    for A in (X2, M2, product_algebra(GF(2), 2), upper_triangular_algebra(GF(2)), ground_algebra(QQ)):
        assert validate_algebra(A).ok


def test_x_squared_one_alone_is_still_an_algebra():
    # Q[x]/(x^2 - 1) is associative, so this perturbation is not a mutation
    mult = X2.mult.copy()
    mult[1, 1] = QQ.array([1, 0])
    assert validate_algebra(Algebra(QQ, mult, X2.unit.copy())).ok


def test_x_squared_one_with_broken_unit_reports_xxx():
    # x*x = 1 plus x*1 = 0 breaks both unit and associativity; (x,x,x) is listed
    mult = X2.mult.copy()
    mult[1, 1] = QQ.array([1, 0])
    mult[1, 0] = QQ.array([0, 0])
    rep = validate_algebra(Algebra(QQ, mult, X2.unit.copy()))
    assert "associativity" in rep.axioms_violated
    assert (1, 1, 1) in [v.where for v in rep.violations if v.axiom == "associativity"]


def test_balanced_tensor_dimensions():
    R = regular_bimodule(X2)
    assert balanced_tensor(R, R).quotient_dim == 2
    T = extension_tensor(unit_map(X2))
    assert T.quotient_dim == 4
    assert np.array_equal(T.project, QQ.eye(4))
    RM = regular_bimodule(M2)
    assert balanced_tensor(RM, RM).quotient_dim == 4


def test_balanced_tensor_kills_relations():
    RM = regular_bimodule(M2)
    T = balanced_tensor(RM, RM)
    for b in range(4):
        for i in range(4):
            for j in range(4):
                v = F3.sub(
                    F3.kron(F3.dot(RM.right[b], F3.unit_vector(4, i)), F3.unit_vector(4, j)),
                    F3.kron(F3.unit_vector(4, i), F3.dot(RM.left[b], F3.unit_vector(4, j))),
                )
                assert not np.any(F3.dot(T.project, v))


def test_hom_space_dimensions():
    R = regular_bimodule(X2)
    assert hom_space(R.only_left(), R.only_left(), "LeftLinear").dim == 2
    T = extension_tensor(unit_map(X2)).module
    assert hom_space(T.only_left(), R.only_left(), "LeftLinear").dim == 4
    RM = regular_bimodule(M2)
    assert hom_space(RM, RM, "Bilinear").dim == 1


def test_hom_space_completeness():
    R = regular_bimodule(X2)
    H = hom_space(R.only_left(), R.only_left(), "LeftLinear")
    # adjoin a map that is linear but not left linear: x -> 0, 1 -> 1
    extra = QQ.array([[1, 0], [0, 0]]).reshape(-1, 1)
    assert rank_array(QQ, np.concatenate([H.matrix, extra], axis=1)) == H.dim + 1
    assert np.any(QQ.dot(R.left[1], extra.reshape(2, 2)) != QQ.dot(extra.reshape(2, 2), R.left[1]))


def test_invariants():
    T = extension_tensor(unit_map(X2)).module
    inv = bimodule_invariants(T)
    assert inv.shape[1] == 2
    span = np.concatenate([inv, QQ.array([[0, 1, 1, 0], [0, 0, 0, 1]]).T], axis=1)
    assert rank_array(QQ, span) == 2
    assert bimodule_invariants(regular_bimodule(X2)).shape[1] == 2
    TM = extension_tensor(unit_map(M2)).module
    e = F3.zeros(16)
    for i in range(2):
        e[(i * 2 + 0) * 4 + (0 * 2 + i)] = 1  # e_{i1} (x) e_{1i}
    for a in range(4):
        assert np.array_equal(F3.dot(TM.left[a], e), F3.dot(TM.right[a], e))


def test_centralizers():
    TM = extension_tensor(unit_map(M2)).module
    one = F3.kron(M2.unit, M2.unit)
    assert centralizer(M2, TM, one).shape[1] == 1
    # b.1 = 1.b for every b, so the centralizer of 1 is all of A; the
    # center appears as the invariants of the regular bimodule instead
    assert centralizer(M2, regular_bimodule(M2), M2.unit).shape[1] == 4
    assert bimodule_invariants(regular_bimodule(M2)).shape[1] == 1
    assert centralizer(X2, regular_bimodule(X2), X2.unit).shape[1] == 2


def test_dual_basis_projectivity():
    R = regular_bimodule(X2).only_left()
    db = dual_basis_projectivity(R)
    assert db is not None and db.verify()
    T = extension_tensor(unit_map(X2)).module.only_left()
    assert dual_basis_projectivity(T).verify()
    Q, _ = quotient_module(R, QQ.array([[0, 1]]).T)
    assert Q.dim == 1
    assert dual_basis_projectivity(Q) is None


def test_zero_dimensional_module_is_legal():
    Q, _ = quotient_module(regular_bimodule(X2).only_left(), QQ.eye(2))
    assert Q.dim == 0
    assert dual_basis_projectivity(Q).r == []


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_random_subalgebra_centralizer_is_closed(seed):
    rng = np.random.default_rng(seed)
    v = F3.random((4,), rng)
    basis = centralizer(M2, regular_bimodule(M2), v)
    # unital and closed under products
    assert rank_array(F3, np.concatenate([basis, M2.unit.reshape(-1, 1)], axis=1)) == basis.shape[1]
    for i in range(basis.shape[1]):
        for j in range(basis.shape[1]):
            prod = M2.mul(basis[:, i], basis[:, j])
            assert rank_array(F3, np.concatenate([basis, prod.reshape(-1, 1)], axis=1)) == basis.shape[1]


def test_bimodule_validation_catches_noncommuting_actions():
    R = regular_bimodule(M2)
    assert validate_bimodule(R).ok
    from coringkit.algebra import Bimodule

    bad = Bimodule(F3, 4, M2, M2, R.left, R.left)  # left action used on the right
    assert "actions_commute" in validate_bimodule(bad).axioms_violated or not validate_bimodule(bad).ok
