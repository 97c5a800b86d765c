"""Hot loops over F_p: row reduction, batched rank tests, quadratic scans.

Each kernel has a numba ``@njit`` version and a pure-numpy version with the
same signature.  Set ``CORINGKIT_NO_NUMBA=1`` to force the numpy path (the
numba path is also skipped when numba is not importable).
"""
from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("CORINGKIT_NO_NUMBA", "").strip() not in ("", "0", "false")

try:  # pragma: no cover - import guard
    if _DISABLED:
        raise ImportError("disabled by CORINGKIT_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


# -- numpy implementations ---------------------------------------------------


def _inv_mod(a: int, p: int) -> int:
    return pow(int(a), -1, int(p))


def rref_mod_p_numpy(m: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of ``m`` over F_p. Returns (R, pivot columns)."""
    a = np.mod(m, p).astype(np.int64)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * _inv_mod(a[r, c], p)) % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != r]
        if others.size:
            a[others] = (a[others] - np.outer(a[others, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, np.array(pivots, dtype=np.int64)


def rank_mod_p_numpy(m: np.ndarray, p: int) -> int:
    return len(rref_mod_p_numpy(m, p)[1])


def first_nonsingular_numpy(mats: np.ndarray, p: int, start: int, stop: int) -> int:
    """Scan coefficient vectors t in lexicographic order (index ``start`` to
    ``stop``) and return the first index where sum_j t_j mats[j] is
    invertible mod p, or -1."""
    d = mats.shape[0]
    n = mats.shape[1]
    for idx in range(start, stop):
        t = _digits(idx, d, p)
        m = np.mod(np.tensordot(t, mats, axes=(0, 0)), p)
        if rank_mod_p_numpy(m, p) == n:
            return idx
    return -1


def _digits(idx: int, d: int, p: int) -> np.ndarray:
    t = np.zeros(d, dtype=np.int64)
    for j in range(d - 1, -1, -1):
        t[j] = idx % p
        idx //= p
    return t


def quadratic_scan_numpy(
    base: np.ndarray,
    dirs: np.ndarray,
    proj: np.ndarray,
    p: int,
) -> np.ndarray:
    """Indices t (lexicographic over F_p^k) for which g = base + t.dirs has
    proj @ (g (x) g) == proj @ g_lift, where the last row block handles the
    linear right-hand side.

    ``proj`` has shape (q, n*n + n): the first n*n columns act on g (x) g and
    the last n columns on g (the constraint is proj @ [g(x)g ; g] == 0).
    """
    k, n = dirs.shape
    hits = []
    total = p**k
    chunk = 4096
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        ts = np.stack([_digits(i, k, p) for i in range(start, stop)]) if k else np.zeros((1, 0), np.int64)
        g = np.mod(base[None, :] + ts @ dirs, p)
        gg = np.einsum("bi,bj->bij", g, g).reshape(len(g), n * n)
        full = np.concatenate([gg, g], axis=1) % p
        res = np.mod(full @ proj.T, p)
        ok = ~np.any(res != 0, axis=1)
        hits.extend((start + np.nonzero(ok)[0]).tolist())
    return np.array(hits, dtype=np.int64)


# -- numba implementations ---------------------------------------------------

if HAVE_NUMBA:

    @njit(cache=True)
    def _inv_mod_nb(a, p):
        t, new_t = 0, 1
        r, new_r = p, a % p
        while new_r != 0:
            q = r // new_r
            t, new_t = new_t, t - q * new_t
            r, new_r = new_r, r - q * new_r
        if t < 0:
            t += p
        return t

    @njit(cache=True)
    def _rref_inplace_nb(a, p):
        rows, cols = a.shape
        pivots = np.empty(min(rows, cols), dtype=np.int64)
        nzc = np.empty(cols, dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            k = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    k = i
                    break
            if k < 0:
                continue
            if k != r:
                for j in range(cols):
                    tmp = a[r, j]
                    a[r, j] = a[k, j]
                    a[k, j] = tmp
            inv = _inv_mod_nb(a[r, c], p)
            nnz = 0
            for j in range(c, cols):
                if a[r, j] != 0:
                    a[r, j] = (a[r, j] * inv) % p
                    nzc[nnz] = j
                    nnz += 1
            for i in range(rows):
                if i != r:
                    f = a[i, c]
                    if f != 0:
                        for t in range(nnz):
                            j = nzc[t]
                            a[i, j] = (a[i, j] - f * a[r, j]) % p
            pivots[r] = c
            r += 1
        return pivots[:r]

    def rref_mod_p_numba(m, p):
        a = np.ascontiguousarray(np.mod(m, p).astype(np.int64))
        piv = _rref_inplace_nb(a, np.int64(p))
        return a, piv

    @njit(cache=True)
    def _rank_nb(a, p):
        return _rref_inplace_nb(a, p).shape[0]

    @njit(cache=True)
    def _first_nonsingular_nb(mats, p, start, stop):
        d = mats.shape[0]
        n = mats.shape[1]
        t = np.zeros(d, dtype=np.int64)
        m = np.zeros((n, n), dtype=np.int64)
        for idx in range(start, stop):
            x = idx
            for j in range(d - 1, -1, -1):
                t[j] = x % p
                x //= p
            for i in range(n):
                for j in range(n):
                    s = 0
                    for l in range(d):
                        s += t[l] * mats[l, i, j]
                    m[i, j] = s % p
            if _rank_nb(m, p) == n:
                return idx
        return -1

    def first_nonsingular_numba(mats, p, start, stop):
        mats = np.ascontiguousarray(np.mod(mats, p).astype(np.int64))
        return int(_first_nonsingular_nb(mats, np.int64(p), np.int64(start), np.int64(stop)))

    @njit(cache=True)
    def _quadratic_scan_nb(base, dirs, proj, p):
        k, n = dirs.shape
        q = proj.shape[0]
        total = 1
        for _ in range(k):
            total *= p
        hits = np.empty(total, dtype=np.int64)
        nh = 0
        t = np.zeros(k, dtype=np.int64)
        g = np.zeros(n, dtype=np.int64)
        for idx in range(total):
            x = idx
            for j in range(k - 1, -1, -1):
                t[j] = x % p
                x //= p
            for i in range(n):
                s = base[i]
                for j in range(k):
                    s += t[j] * dirs[j, i]
                g[i] = s % p
            ok = True
            for r in range(q):
                s = 0
                for i in range(n):
                    gi = g[i]
                    if gi == 0:
                        continue
                    for j in range(n):
                        s += proj[r, i * n + j] * ((gi * g[j]) % p)
                    s %= p
                for i in range(n):
                    s += proj[r, n * n + i] * g[i]
                if s % p != 0:
                    ok = False
                    break
            if ok:
                hits[nh] = idx
                nh += 1
        return hits[:nh]

    def quadratic_scan_numba(base, dirs, proj, p):
        return _quadratic_scan_nb(
            np.ascontiguousarray(np.mod(base, p).astype(np.int64)),
            np.ascontiguousarray(np.mod(dirs, p).astype(np.int64).reshape(-1, len(base))),
            np.ascontiguousarray(np.mod(proj, p).astype(np.int64)),
            np.int64(p),
        )


if HAVE_NUMBA:
    rref_mod_p = rref_mod_p_numba
    first_nonsingular = first_nonsingular_numba
    quadratic_scan = quadratic_scan_numba
else:  # pragma: no cover
    rref_mod_p = rref_mod_p_numpy
    first_nonsingular = first_nonsingular_numpy
    quadratic_scan = quadratic_scan_numpy

BACKEND = "numba" if HAVE_NUMBA else "numpy"
