"""The brute-force oracle itself: frozen counts and the facts behind the fixtures."""
import functools

import numpy as np

from coringkit.fixtures import oracle


@functools.lru_cache(maxsize=None)
def census():
    return oracle.weak_entwining_census()


def test_weak_census_counts():
    weak, strong = census()
    assert (len(weak), len(strong)) == (19, 7)


def test_fixture_psi_is_weak_only_with_rank_two(load):
    e = load("fx_weak2").get("entwinings", "psi")
    bits = np.array([int(v) for v in e.psi.reshape(-1)]).reshape(4, 4)
    weak, strong = census()
    assert any(np.array_equal(bits, w) for w in weak)
    assert not any(np.array_equal(bits, s) for s in strong)
    r, p = oracle.projection_rank(bits)
    assert r == 2
    assert np.array_equal((p @ p) % 2, p)


def test_t2_has_no_frobenius_form():
    forms = oracle.t2_frobenius_forms()
    assert len(forms) == 8
    assert not any(ok for _, ok in forms)


def test_coring_census_size():
    assert len(oracle.enumerate_corings(max_dim=2)) == 57


def test_main_prints_summary(capsys):
    assert oracle.main([]) == 0
    out = capsys.readouterr().out
    assert "19 weak-only, 7 ordinary" in out
    assert "8 functionals scanned, 0 nondegenerate" in out
    assert "57; 31 with invariant e, 39 with a cointegral" in out
