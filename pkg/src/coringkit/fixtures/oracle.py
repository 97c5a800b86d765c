"""Brute-force enumeration over F_2 used to produce and cross-check fixtures.

Run ``python -m coringkit.fixtures.oracle`` to print the facts behind
fx_weak2 and fx_t2dual, and the coring census at dim A, dim C <= 2.

Everything here is deliberately naive: plain integer arrays mod 2, explicit
index loops, no use of the library's tensor or solver code.  The library's
answers are compared against these in the test suite.
"""
from __future__ import annotations

import itertools
import sys
from dataclasses import dataclass

import numpy as np

P = 2


def _all_matrices(rows, cols):
    for bits in itertools.product(range(P), repeat=rows * cols):
        yield np.array(bits, dtype=np.int64).reshape(rows, cols)


def _rref2(rows: np.ndarray) -> np.ndarray:
    """Row-reduced basis of the span of ``rows`` over F_2."""
    a = rows.copy() % 2
    out = []
    for c in range(a.shape[1] if a.size else 0):
        piv = next((i for i in range(len(a)) if a[i, c]), None)
        if piv is None:
            continue
        row = a[piv].copy()
        a = np.delete(a, piv, axis=0)
        a = (a + np.outer(a[:, c], row)) % 2
        out = [(r + r[c] * row) % 2 for r in out]
        out.append(row)
    return np.array(out, dtype=np.int64).reshape(-1, rows.shape[1])


def _reduce(v: np.ndarray, basis: np.ndarray) -> np.ndarray:
    v = v % 2
    for row in basis:
        c = int(np.argmax(row))
        if v[c]:
            v = (v + row) % 2
    return v


# -- algebras of dimension <= 2 over F_2 ----------------------------------------

# basis {1, x} with x^2 = beta + alpha x; one algebra per isomorphism class
ALGEBRA_RELATIONS = {"F2": None, "F2[x]/x^2": (0, 0), "F2xF2": (0, 1), "F4": (1, 1)}


def algebra_constants(name):
    rel = ALGEBRA_RELATIONS[name]
    if rel is None:
        return np.array([[[1]]], dtype=np.int64), np.array([1], dtype=np.int64)
    beta, alpha = rel
    m = np.zeros((2, 2, 2), dtype=np.int64)
    m[0, 0] = [1, 0]
    m[0, 1] = m[1, 0] = [0, 1]
    m[1, 1] = [beta, alpha]
    return m, np.array([1, 0], dtype=np.int64)


@dataclass
class RawCoring:
    algebra: str
    mult: np.ndarray
    unit: np.ndarray
    left: np.ndarray  # (a, c, c)
    right: np.ndarray
    lift: np.ndarray  # (c*c, c), lexicographic
    counit: np.ndarray  # (a, c)

    @property
    def a(self):
        return len(self.unit)

    @property
    def c(self):
        return self.left.shape[1]


def _actions(name, c):
    """All (x-action) matrices L with L^2 = beta + alpha L."""
    rel = ALGEBRA_RELATIONS[name]
    eye = np.eye(c, dtype=np.int64)
    if rel is None:
        return [None]
    beta, alpha = rel
    return [m for m in _all_matrices(c, c) if np.array_equal((m @ m) % 2, (beta * eye + alpha * m) % 2)]


def _stack(L, c):
    eye = np.eye(c, dtype=np.int64)
    return eye[None] if L is None else np.stack([eye, L])


def _balancing(left, right):
    """Spanning rows of the relations (m.a) (x) n - m (x) (a.n) in k^(c*c)."""
    c = left.shape[1]
    rows = []
    for a in range(left.shape[0]):
        for i in range(c):
            for j in range(c):
                v = np.zeros(c * c, dtype=np.int64)
                for k in range(c):
                    v[k * c + j] += right[a][k, i]
                    v[i * c + k] -= left[a][k, j]
                rows.append(v % 2)
    return _rref2(np.array(rows)) if rows else np.zeros((0, c * c), dtype=np.int64)


def _in_span(v, basis):
    return not np.any(_reduce(v, basis))


def _mult_elt(mult, x, y):
    return np.einsum("i,j,ijk->k", x, y, mult) % 2


def _act(stack, a, v):
    """a (an algebra vector) acting through the matrix stack on v."""
    return np.einsum("i,ijk,k->j", a, stack, v) % 2


def _coring_ok(mult, unit, left, right, lift, counit, N2, N3) -> bool:
    a, c = len(unit), left.shape[1]
    e = np.eye(c, dtype=np.int64)
    ea = np.eye(a, dtype=np.int64)
    # coproduct bilinear modulo the balancing relations
    for x in range(a):
        for i in range(c):
            d1 = lift @ (left[x] @ e[i]) % 2
            d2 = np.kron(left[x], np.eye(c, dtype=np.int64)) @ (lift @ e[i]) % 2
            if not _in_span((d1 - d2) % 2, N2):
                return False
            d1 = lift @ (right[x] @ e[i]) % 2
            d2 = np.kron(np.eye(c, dtype=np.int64), right[x]) @ (lift @ e[i]) % 2
            if not _in_span((d1 - d2) % 2, N2):
                return False
    # counit laws: eps(c_1) c_2 = c = c_1 eps(c_2)
    for i in range(c):
        t = lift[:, i].reshape(c, c)
        lsum = np.zeros(c, dtype=np.int64)
        rsum = np.zeros(c, dtype=np.int64)
        for p, q in zip(*np.nonzero(t)):
            lsum += t[p, q] * _act(left, counit[:, p], e[q])
            rsum += t[p, q] * _act(right, counit[:, q], e[p])
        if np.any(lsum % 2 != e[i]) or np.any(rsum % 2 != e[i]):
            return False
    # coassociativity modulo N (x) C + C (x) N
    for i in range(c):
        t = lift[:, i]
        left_side = np.kron(lift, np.eye(c, dtype=np.int64)) @ t % 2
        right_side = np.kron(np.eye(c, dtype=np.int64), lift) @ t % 2
        if not _in_span((left_side - right_side) % 2, N3):
            return False
    return True


def _counit_ok(mult, left, right, counit) -> bool:
    a, c = counit.shape
    for x in range(a):
        ex = np.eye(a, dtype=np.int64)[x]
        for i in range(c):
            img = counit[:, i]
            if np.any(counit @ left[x][:, i] % 2 != _mult_elt(mult, ex, img)):
                return False
            if np.any(counit @ right[x][:, i] % 2 != _mult_elt(mult, img, ex)):
                return False
    return True


def enumerate_corings(max_dim=2):
    """Every F_2 coring with dim A, dim C <= max_dim, counted once per
    (algebra class, bimodule matrices, counit, coproduct modulo balancing)."""
    out = []
    for name in ALGEBRA_RELATIONS:
        mult, unit = algebra_constants(name)
        if len(unit) > max_dim:
            continue
        for c in range(1, max_dim + 1):
            acts = _actions(name, c)
            for L, R in itertools.product(acts, acts):
                left, right = _stack(L, c), _stack(R, c)
                if L is not None and np.any((L @ R - R @ L) % 2):
                    continue
                N2 = _balancing(left, right)
                N3rows = [np.kron(r, np.eye(c, dtype=np.int64)[k]) for r in N2 for k in range(c)]
                N3rows += [np.kron(np.eye(c, dtype=np.int64)[k], r) for r in N2 for k in range(c)]
                N3 = _rref2(np.array(N3rows)) if N3rows else np.zeros((0, c**3), dtype=np.int64)
                counits = [E for E in _all_matrices(len(unit), c) if _counit_ok(mult, left, right, E)]
                seen = set()
                lifts = []
                for D in _all_matrices(c * c, c):
                    key = tuple(np.concatenate([_reduce(D[:, i], N2) for i in range(c)]))
                    if key not in seen:
                        seen.add(key)
                        lifts.append(D)
                for E in counits:
                    for D in lifts:
                        if _coring_ok(mult, unit, left, right, D, E, N2, N3):
                            out.append(RawCoring(name, mult, unit, left, right, D, E))
    return out


# -- brute-force separability witnesses ---------------------------------------


def brute_invariant_e(rc: RawCoring) -> list:
    """All e in C with a.e = e.a for every a and eps(e) = 1."""
    hits = []
    for bits in itertools.product(range(P), repeat=rc.c):
        e = np.array(bits, dtype=np.int64)
        if any(np.any((rc.left[x] @ e - rc.right[x] @ e) % 2) for x in range(rc.a)):
            continue
        if np.array_equal(rc.counit @ e % 2, rc.unit):
            hits.append(e)
    return hits


def brute_cointegrals(rc: RawCoring, limit=None) -> list:
    """All balanced, bilinear G: C (x)_k C -> A with G Delta = eps and the
    cointegral identity c_1 . G(c_2 (x) c') = G(c (x) c'_1) . c'_2."""
    a, c = rc.a, rc.c
    eye_c = np.eye(c, dtype=np.int64)
    N2 = _balancing(rc.left, rc.right)
    hits = []
    for G in _all_matrices(a, c * c):
        if any(np.any(G @ r % 2) for r in N2):
            continue
        if np.any(G @ rc.lift % 2 != rc.counit):
            continue
        ok = True
        for x in range(a):
            ex = np.eye(a, dtype=np.int64)[x]
            for t in range(c * c):
                i, j = divmod(t, c)
                val = G[:, t]
                lt = np.kron(rc.left[x][:, i], eye_c[j])
                rt = np.kron(eye_c[i], rc.right[x][:, j])
                if np.any(G @ lt % 2 != _mult_elt(rc.mult, ex, val)) or np.any(G @ rt % 2 != _mult_elt(rc.mult, val, ex)):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        for i in range(c):
            ti = rc.lift[:, i].reshape(c, c)
            for k in range(c):
                tk = rc.lift[:, k].reshape(c, c)
                lhs = np.zeros(c, dtype=np.int64)
                rhs = np.zeros(c, dtype=np.int64)
                for p, q in zip(*np.nonzero(ti)):
                    lhs += _act(rc.right, G @ np.kron(eye_c[q], eye_c[k]) % 2, eye_c[p])
                for p, q in zip(*np.nonzero(tk)):
                    rhs += _act(rc.left, G @ np.kron(eye_c[i], eye_c[p]) % 2, eye_c[q])
                if np.any((lhs - rhs) % 2):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            hits.append(G)
            if limit and len(hits) >= limit:
                break
    return hits


def to_coring(rc: RawCoring):
    """The same data as a library Coring over GF(2)."""
    from ..algebra import Algebra, Bimodule
    from ..coring import Coring
    from ..linalg.field import GF

    F = GF(2)
    A = Algebra(F, F.array(rc.mult), F.array(rc.unit), rc.algebra)
    B = Bimodule(F, rc.c, A, A, F.array(rc.left), F.array(rc.right), "C")
    return Coring(B, F.array(rc.lift), F.array(rc.counit), "C")


# -- weak entwinings at dim A = dim C = 2 -------------------------------------


def _entwining_tensors(psi_bits):
    """P[x, d, c, a]: coefficient of e_x (x) f_d in psi(f_c (x) e_a)."""
    psi = np.asarray(psi_bits, dtype=np.int64).reshape(4, 4)
    return psi.reshape(2, 2, 2, 2)


def weak_entwining_census(mult=None, unit=None, comult=None, counit=None):
    """All psi: C (x) A -> A (x) C over F_2 (A = F2 x F2, C = two grouplikes
    by default) satisfying the product, coproduct and weak unit/counit laws,
    split by whether the ordinary unit law also holds."""
    if mult is None:
        mult = np.zeros((2, 2, 2), dtype=np.int64)
        mult[0, 0, 0] = mult[1, 1, 1] = 1
        unit = np.array([1, 1], dtype=np.int64)
    if comult is None:
        comult = np.zeros((2, 2, 2), dtype=np.int64)
        comult[0, 0, 0] = comult[1, 1, 1] = 1
        counit = np.array([1, 1], dtype=np.int64)
    weak_only, strong = [], []
    for bits in itertools.product(range(2), repeat=16):
        Pt = _entwining_tensors(bits)
        # psi(c (x) a a') = a_psi a'_Psi (x) c^{psi Psi}
        lhs = np.einsum("aek,xdck->xdcae", mult, Pt) % 2
        rhs = np.einsum("yeca,zdew,yzx->xdcaw", Pt, Pt, mult) % 2
        if np.any(lhs != rhs):
            continue
        # a_psi (x) Delta(c^psi) = a_psi Psi (x) c_1^Psi (x) c_2^psi
        lhs = np.einsum("xdca,dpq->xpqca", Pt, comult) % 2
        rhs = np.einsum("cuv,yqva,xpuy->xpqca", comult, Pt, Pt) % 2
        if np.any(lhs != rhs):
            continue
        # weak counit: a_psi eps(c^psi) = 1_psi a eps(c^psi)
        U = np.einsum("ydck,k,d->yc", Pt, unit, counit) % 2
        lhs = np.einsum("xdca,d->xca", Pt, counit) % 2
        rhs = np.einsum("yc,yax->xca", U, mult) % 2
        if np.any(lhs != rhs):
            continue
        # weak unit: 1_psi eps(c_1^psi) (x) c_2 = 1_psi (x) c^psi
        one_psi = np.einsum("ydck,k->ydc", Pt, unit) % 2
        lhs = np.einsum("cuv,ydu,d->yvc", comult, one_psi, counit) % 2
        if np.any(lhs != one_psi):
            continue
        unit_law = np.array_equal(one_psi, np.einsum("y,dc->ydc", unit, np.eye(2, dtype=np.int64)))
        (strong if unit_law else weak_only).append(np.array(bits, dtype=np.int64).reshape(4, 4))
    return weak_only, strong


def projection_rank(psi):
    """rank of p(a (x) c) = a 1_psi (x) c^psi for the default A = F2 x F2."""
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0, 0] = mult[1, 1, 1] = 1
    unit = np.array([1, 1], dtype=np.int64)
    Pt = _entwining_tensors(psi)
    one_psi = np.einsum("ydck,k->ydc", Pt, unit) % 2
    p = np.einsum("ayx,ydc->xdac", mult, one_psi).reshape(4, 4) % 2
    return len(_rref2(p.T)), p


# -- T2 and its dual ------------------------------------------------------------


def t2_constants():
    """Upper triangular 2x2 matrices over F_2, basis e11, e12, e22."""
    m = np.zeros((3, 3, 3), dtype=np.int64)
    m[0, 0, 0] = 1
    m[0, 1, 1] = 1
    m[1, 2, 1] = 1
    m[2, 2, 2] = 1
    return m, np.array([1, 0, 1], dtype=np.int64)


def t2_frobenius_forms():
    """(functional, nondegenerate?) for all 8 functionals on T2.  A
    functional e gives a Frobenius form iff (x, y) -> e(xy) is nondegenerate."""
    m, _ = t2_constants()
    out = []
    for bits in itertools.product(range(2), repeat=3):
        e = np.array(bits, dtype=np.int64)
        gram = np.einsum("ijk,k->ij", m, e) % 2
        out.append((e, len(_rref2(gram)) == 3))
    return out


def main(argv=None) -> int:
    weak, strong = weak_entwining_census()
    print(f"weak entwinings over F2 (A = F2xF2, C = kC2): {len(weak)} weak-only, {len(strong)} ordinary")
    for psi in weak:
        r, _ = projection_rank(psi)
        print(f"  psi rows {psi.tolist()}  rank p = {r}")
    forms = t2_frobenius_forms()
    good = sum(ok for _, ok in forms)
    print(f"T2 over F2: {len(forms)} functionals scanned, {good} nondegenerate")
    corings = enumerate_corings()
    sep = sum(bool(brute_invariant_e(rc)) for rc in corings)
    cosep = sum(bool(brute_cointegrals(rc, limit=1)) for rc in corings)
    print(f"F2 corings with dim A, dim C <= 2: {len(corings)}; {sep} with invariant e, {cosep} with a cointegral")
    return 0


if __name__ == "__main__":
    sys.exit(main())
