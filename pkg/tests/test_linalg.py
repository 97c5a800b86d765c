from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coringkit.linalg import GF, QQ, inverse_array, kernel_array, rank_array, rank_witness, rref_array, solve_array
from coringkit.linalg import _kernels as K
from coringkit.errors import MalformedInputError

F3 = GF(3)


def _matrices(p, max_rows=6, max_cols=7):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: st.lists(st.integers(0, p - 1), min_size=rc[0] * rc[1], max_size=rc[0] * rc[1]).map(
            lambda xs: np.array(xs, dtype=np.int64).reshape(rc)
        )
    )


def _rationals(max_rows=4, max_cols=5):
    frac = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: st.lists(frac, min_size=rc[0] * rc[1], max_size=rc[0] * rc[1]).map(
            lambda xs: QQ.array(np.array(xs, dtype=object).reshape(rc))
        )
    )


def test_parse_and_format():
    assert QQ.parse("3/6") == Fraction(1, 2)
    assert QQ.format(Fraction(-2, 4)) == "-1/2"
    assert F3.parse("5") == 2
    with pytest.raises(MalformedInputError):
        QQ.parse("2/0")
    with pytest.raises(MalformedInputError):
        GF(4)


def test_inverse_over_q():
    m = QQ.array([[1, 2], [3, 4]])
    inv = inverse_array(QQ, m)
    assert np.array_equal(QQ.dot(m, inv), QQ.eye(2))
    assert inv[0, 0] == Fraction(-2)
    assert inverse_array(QQ, QQ.array([[1, 2], [2, 4]])) is None


def test_rank_witness_reports_inconsistency():
    a = QQ.array([[1, 0], [0, 0]])
    w = rank_witness(QQ, a, QQ.array([0, 1]))
    assert w["rank"] == 1 and w["augmented_rank"] == 2
    assert solve_array(QQ, a, QQ.array([0, 1])) is None


@settings(max_examples=60, deadline=None)
@given(_matrices(3))
def test_rank_nullity_fp(m):
    r = rank_array(F3, m)
    ker = kernel_array(F3, m)
    assert r + len(ker) == m.shape[1]
    for v in ker:
        assert not np.any(F3.dot(m, v))


@settings(max_examples=40, deadline=None)
@given(_rationals())
def test_rank_nullity_q(m):
    ker = kernel_array(QQ, m)
    assert rank_array(QQ, m) + len(ker) == m.shape[1]
    for v in ker:
        assert all(x == 0 for x in QQ.dot(m, v))


@settings(max_examples=40, deadline=None)
@given(_rationals())
def test_rref_is_idempotent(m):
    r, piv = rref_array(QQ, m)
    r2, piv2 = rref_array(QQ, r)
    assert np.array_equal(r, r2) and list(piv) == list(piv2)


@settings(max_examples=60, deadline=None)
@given(_matrices(5, 8, 8))
def test_numba_and_numpy_kernels_agree(m):
    r_np, piv_np = K.rref_mod_p_numpy(m, 5)
    if K.HAVE_NUMBA:
        r_nb, piv_nb = K.rref_mod_p_numba(m, 5)
        assert np.array_equal(r_np, r_nb)
        assert list(piv_np) == list(piv_nb)
    assert K.rank_mod_p_numpy(m, 5) == len(piv_np)


@pytest.mark.skipif(not K.HAVE_NUMBA, reason="numba path unavailable")
def test_first_nonsingular_agrees():
    rng = np.random.default_rng(1)
    mats = rng.integers(0, 3, size=(4, 3, 3))
    total = 3**4
    assert K.first_nonsingular_numpy(mats, 3, 0, total) == K.first_nonsingular_numba(mats, 3, 0, total)
    mats[:, 0] = 0
    assert K.first_nonsingular_numba(mats, 3, 0, total) == -1
