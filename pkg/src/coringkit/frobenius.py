"""Frobenius property of A -> R = {}_A Hom(C, A), via the map
phi_e(r) = e_(1).r(e_(2)) for invariants e in C^A.

phi_e depends linearly on e, so the search is over a coefficient vector t
for a basis of C^A: exhaustive over small finite fields, seeded random
sampling (flagged probabilistic) over Q, optionally backed by an exact
symbolic determinant for small invariant spaces.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AlgebraMorphism,
    Bimodule,
    DualBasis,
    _mismatch,
    bimodule_invariants,
    dual_basis_projectivity,
    linearity_constraints,
    regular_bimodule,
    right_action_map,
    validate_bimodule,
)
from .coring import (
    Coring,
    CoringComodule,
    DualRing,
    _linear_failures,
    canonical_coring,
    dual_ring,
    extension_tensor,
    validate_comodule,
)
from .errors import InternalConsistencyError, MalformedInputError, PreconditionError
from .linalg import FieldSpec, inverse_array, rank_array, solve_array, stack_columns
from .linalg._kernels import first_nonsingular
from .report import ValidationReport

DEFAULT_BUDGET = 2**20
DEFAULT_RETRIES = 20


def _module_products(c: Coring, r: np.ndarray) -> np.ndarray:
    """K[:, (i, j)] = e_i . r(e_j) restricted to the quotient basis of C (x)_A C."""
    F = c.field
    d = c.dim
    K = F.einsum("km,kni->nim", r, c.bimodule.right)
    return K.reshape(d, d * d)[:, c.tensor_square.basis_index]


@dataclass
class FrobeniusVerdict:
    status: str  # "Frobenius", "NotProjective" or "NoBijectiveE"
    dual_basis: DualBasis | None
    ring: DualRing | None
    e: np.ndarray | None = None
    phi: np.ndarray | None = None
    phi_inv: np.ndarray | None = None
    invariants: np.ndarray | None = None
    exhaustive: bool = True
    probabilistic: bool = False
    candidates_scanned: int = 0
    candidates_total: int | None = None
    method: str = ""
    notes: list = field(default_factory=list)

    @property
    def is_frobenius(self) -> bool:
        return self.status == "Frobenius"


def phi_matrices(c: Coring, ring: DualRing, inv: np.ndarray) -> np.ndarray:
    """Phi[u] is the matrix of phi_{e_u} : R -> C for the invariant basis e_u."""
    F = c.field
    d = c.dim
    n = ring.dim
    k = inv.shape[1]
    cols = [F.dot(_module_products(c, ring.hom.basis[j]), c.delta) for j in range(n)]  # each d x d
    out = F.zeros((k, d, n))
    for u in range(k):
        for j in range(n):
            out[u, :, j] = F.dot(cols[j], inv[:, u])
    return out


def phi_of(c: Coring, ring: DualRing, e: np.ndarray) -> np.ndarray:
    F = c.field
    cols = [F.dot(F.dot(_module_products(c, ring.hom.basis[j]), c.delta), e) for j in range(ring.dim)]
    return stack_columns(F, cols, c.dim)


def _combine(F: FieldSpec, t, mats: np.ndarray) -> np.ndarray:
    return F.combo(F.array(list(t)), mats)


def _symbolic_nonzero_point(F: FieldSpec, mats: np.ndarray):
    """Exact determinant polynomial of sum t_u mats[u]; a point where it is
    nonzero, or None when it vanishes identically."""
    import sympy

    k = mats.shape[0]
    ts = sympy.symbols(f"t0:{k}")
    n = mats.shape[1]
    M = sympy.zeros(n, n)
    for u in range(k):
        M += ts[u] * sympy.Matrix(n, n, [sympy.Rational(x.numerator, x.denominator) for x in mats[u].reshape(-1)])
    det = sympy.Poly(sympy.expand(M.det(method="berkowitz")), *ts)
    if det.is_zero:
        return None
    deg = det.total_degree()
    # a nonzero polynomial of degree deg does not vanish on the whole grid {0..deg}^k
    import itertools

    for pt in itertools.product(range(deg + 1), repeat=k):
        if det.eval(dict(zip(ts, pt))) != 0:
            return list(pt)
    raise InternalConsistencyError("nonzero determinant vanished on a full grid")


def check_frobenius(c: Coring, seed: int = 0, retries: int = DEFAULT_RETRIES, budget: int = DEFAULT_BUDGET,
                    symbolic_det: bool = False) -> FrobeniusVerdict:
    F = c.field
    db = dual_basis_projectivity(c.bimodule.only_left())
    if db is None:
        return FrobeniusVerdict("NotProjective", None, None, method="dual-basis")
    R = dual_ring(c)
    inv = bimodule_invariants(c.bimodule)
    k = inv.shape[1]
    if R.dim != c.dim or k == 0:
        why = "dim R != dim C" if R.dim != c.dim else "C^A = 0"
        return FrobeniusVerdict("NoBijectiveE", db, R, invariants=inv, candidates_total=0, method=why)
    mats = phi_matrices(c, R, inv)
    hit = None
    scanned = 0
    total = None
    exhaustive = probabilistic = False
    method = ""
    # the invariant basis itself is tried first
    for u in range(k):
        scanned += 1
        if rank_array(F, mats[u]) == c.dim:
            hit = F.unit_vector(k, u)
            method = "basis"
            break
    if hit is None and F.is_finite and F.p**k <= budget:
        total = F.p**k
        idx = first_nonsingular(mats, F.p, 0, total)
        scanned = total if idx < 0 else scanned + idx + 1
        exhaustive = idx < 0
        method = "exhaustive"
        if idx >= 0:
            from .coring import _digits

            hit = F.array(_digits(idx, k, F.p))
    elif hit is None and symbolic_det and not F.is_finite and k <= 4:
        pt = _symbolic_nonzero_point(F, mats)
        method = "symbolic-det"
        exhaustive = pt is None
        if pt is not None:
            hit = F.array(pt)
    elif hit is None:
        rng = np.random.default_rng(seed)
        method = "random"
        for attempt in range(retries):
            t = F.random(k, rng, box=attempt + 1)
            scanned += 1
            if rank_array(F, _combine(F, t, mats)) == c.dim:
                hit = t
                break
        probabilistic = hit is None
        if F.is_finite:
            total = F.p**k
    if hit is None:
        v = FrobeniusVerdict("NoBijectiveE", db, R, invariants=inv, exhaustive=exhaustive,
                             probabilistic=probabilistic, candidates_scanned=scanned, candidates_total=total,
                             method=method)
        if probabilistic:
            v.notes.append(f"no bijective phi_e among {retries} seeded samples; verdict is probabilistic")
        elif not exhaustive:
            v.notes.append("search space exceeds budget; verdict not exhaustive")
        return v
    e = F.dot(inv, hit)
    phi = phi_of(c, R, e)
    phi_inv = inverse_array(F, phi)
    if phi_inv is None or np.any(F.dot(phi, phi_inv) != F.eye(c.dim)) or np.any(F.dot(phi_inv, phi) != F.eye(c.dim)):
        raise InternalConsistencyError("phi_e failed inversion check")
    v = FrobeniusVerdict("Frobenius", db, R, e, phi, phi_inv, inv, True, False, scanned, total, method)
    rep = theta_check(c, R, e, phi)
    if not rep.ok:
        raise InternalConsistencyError(f"theta(e) is not a bimodule map: {rep.axioms_violated}")
    return v


def right_R_action(c: Coring, ring: DualRing) -> np.ndarray:
    """c.r = c_(1).r(c_(2)) for each basis element r of R."""
    F = c.field
    return np.stack([F.dot(_module_products(c, ring.hom.basis[j]), c.delta) for j in range(ring.dim)])


def theta_check(c: Coring, ring: DualRing, e: np.ndarray, phi: np.ndarray) -> ValidationReport:
    """theta(e): r -> e.r is left A-linear and right R-linear."""
    F = c.field
    rep = ValidationReport("theta(e)")
    A = c.algebra
    la = ring.left_action
    rep.check("left_A_linear", _linear_failures(F, la, c.bimodule.left, phi, A.dim))
    act = right_R_action(c, ring)
    Rr = ring.algebra.rmats  # Rr[j] is right multiplication by r_j on R
    rep.check("right_R_linear", _linear_failures(F, Rr, act, phi, ring.dim))
    rep.check("bijective", [] if rank_array(F, phi) == c.dim == ring.dim else [()])
    return rep


# -- comodules as R-modules ---------------------------------------------------------


@dataclass
class RModule:
    """A right R-module given by action matrices act[j] (m -> m.r_j)."""

    ring: DualRing
    dim: int
    act: np.ndarray

    def as_bimodule(self) -> Bimodule:
        return Bimodule(self.ring.coring.field, self.dim, None, self.ring.algebra, None, self.act, "R-module")


def comodule_to_R(m: CoringComodule, ring: DualRing | None = None) -> RModule:
    """m.r = m_(0).r(m_(1))."""
    c = m.coring
    F = c.field
    R = ring or dual_ring(c)
    act = []
    ram = right_action_map(m.module)
    for j in range(R.dim):
        r = R.hom.basis[j]
        act.append(F.dot(ram, F.dot(F.kron(F.eye(m.dim), r), m.rho_lift)))
    out = RModule(R, m.dim, np.stack(act) if act else F.zeros((0, m.dim, m.dim)))
    rep = validate_bimodule(out.as_bimodule())
    if not rep.ok:
        raise InternalConsistencyError(f"induced R-action fails {rep.axioms_violated}")
    return out


def R_to_comodule(n: RModule, db: DualBasis) -> CoringComodule:
    """rho(m) = sum_i m.r_i (x)_A c^i; A acts through iota: A -> R."""
    R = n.ring
    c = R.coring
    F = c.field
    if db is None:
        raise PreconditionError("C is not projective as a left A-module", axiom="projective")

    def action(coords):
        return F.combo(coords, n.act) if R.dim else F.zeros((n.dim, n.dim))

    A = c.algebra
    right = np.stack([action(R.iota.matrix[:, a]) for a in range(A.dim)])
    mod = Bimodule(F, n.dim, None, A, None, right, "M")
    acts = [action(R.coords(ri)) for ri in db.r]
    lift = F.zeros((n.dim * c.dim, n.dim))
    for Ai, ci in zip(acts, db.c):
        lift = F.add(lift, F.kron(Ai, ci.reshape(-1, 1)))
    out = CoringComodule(mod, lift, c, "M")
    rep = validate_comodule(out)
    if not rep.ok:
        raise InternalConsistencyError(f"induced coaction fails {rep.axioms_violated}")
    return out


def transport_R(obj, direction: str, db: DualBasis | None = None, ring: DualRing | None = None):
    """``direction`` is "to_R" (comodule -> R-module) or "to_comodule"."""
    if direction == "to_R":
        if dual_basis_projectivity(obj.coring.bimodule.only_left()) is None:
            raise PreconditionError("C is not projective as a left A-module", axiom="projective")
        return comodule_to_R(obj, ring)
    if direction == "to_comodule":
        if db is None:
            db = dual_basis_projectivity(obj.ring.coring.bimodule.only_left())
        return R_to_comodule(obj, db)
    raise MalformedInputError(f"unknown direction {direction!r}")


def opposite_composition_failures(c: Coring, ring: DualRing) -> list:
    """For a canonical coring: f_{rr'} = f_{r'} o f_r where f_r(y) = r(1 (x) y)."""
    ext = c.extension
    if ext is None:
        raise PreconditionError("not a canonical coring", axiom="canonical")
    A = ext.target
    F = c.field
    T = extension_tensor(ext)
    emb = stack_columns(F, [T.element(A.unit, A.basis(i)) for i in range(A.dim)], c.dim)

    def endo(r):
        return F.dot(r, emb)

    bad = []
    for i in range(ring.dim):
        for j in range(ring.dim):
            prod = ring.element(ring.algebra.mult[i, j])
            if np.any(endo(prod) != F.dot(endo(ring.hom.basis[j]), endo(ring.hom.basis[i]))):
                bad.append((i, j))
    return bad


# -- Frobenius systems for extensions ---------------------------------------------------


@dataclass
class FrobeniusSystem:
    E: np.ndarray  # B.dim x A.dim
    pairs: list  # (a_i, abar_i) coordinate vectors in A


def validate_frobenius_system(ext: AlgebraMorphism, sys: FrobeniusSystem) -> ValidationReport:
    A, B = ext.target, ext.source
    F = A.field
    rep = ValidationReport("Frobenius system")
    E = sys.E
    if E.shape != (B.dim, A.dim):
        rep.fail("shape", f"E has shape {E.shape}")
        return rep
    inc = [ext(B.basis(b)) for b in range(B.dim)]
    lin = linearity_constraints(F, [A.lmat(x) for x in inc], list(B.lmats), A.dim, B.dim)
    rin = linearity_constraints(F, [A.rmat(x) for x in inc], list(B.rmats), A.dim, B.dim)
    rep.check("left_B_linear", [] if not np.any(F.dot(lin, E.reshape(-1))) else [()])
    rep.check("right_B_linear", [] if not np.any(F.dot(rin, E.reshape(-1))) else [()])

    def Ei(x):
        return F.dot(ext.matrix, F.dot(E, x))

    left_bad, right_bad = [], []
    for k in range(A.dim):
        a = A.basis(k)
        s1 = F.zeros(A.dim)
        s2 = F.zeros(A.dim)
        for ai, bi in sys.pairs:
            s1 = F.add(s1, A.mul(ai, Ei(A.mul(bi, a))))
            s2 = F.add(s2, A.mul(Ei(A.mul(a, ai)), bi))
        if np.any(s1 != a):
            left_bad.append((k,))
        if np.any(s2 != a):
            right_bad.append((k,))
    rep.check("dual_basis_left", left_bad)
    rep.check("dual_basis_right", right_bad)
    return rep


@dataclass
class InducedWitness:
    coring: Coring
    e: np.ndarray
    phi: np.ndarray
    phi_inv: np.ndarray
    formula: np.ndarray  # phi^{-1} built from E, in R coordinates
    ring: DualRing


def phi_inverse_formula(c: Coring, ring: DualRing, ext: AlgebraMorphism, E: np.ndarray) -> np.ndarray:
    """Columns: R-coordinates of phi^{-1}(a (x) a') : a'' (x) y -> a'' E(y a) a'."""
    A = ext.target
    F = A.field
    T = extension_tensor(ext)
    n = A.dim
    cols = []
    for idx in T.basis_index:
        i, j = divmod(int(idx), n)
        vals = []
        for jdx in T.basis_index:
            k, l = divmod(int(jdx), n)
            mid = F.dot(ext.matrix, F.dot(E, A.mul(A.basis(l), A.basis(i))))
            vals.append(A.mul(A.mul(A.basis(k), mid), A.basis(j)))
        r = stack_columns(F, vals, n)  # A.dim x C.dim
        cols.append(ring.coords(r))
    return stack_columns(F, cols, ring.dim)


def induced_coring_witness(ext: AlgebraMorphism, sys: FrobeniusSystem) -> InducedWitness:
    validate_frobenius_system(ext, sys).raise_if_invalid()
    A = ext.target
    F = A.field
    c = canonical_coring(ext)
    T = extension_tensor(ext)
    e = F.zeros(c.dim)
    for ai, bi in sys.pairs:
        e = F.add(e, T.element(ai, bi))
    if any(np.any(F.dot(c.bimodule.left[a], e) != F.dot(c.bimodule.right[a], e)) for a in range(A.dim)):
        raise InternalConsistencyError("e = sum a_i (x) abar_i is not central")
    R = dual_ring(c)
    phi = phi_of(c, R, e)
    phi_inv = inverse_array(F, phi)
    if phi_inv is None:
        raise InternalConsistencyError("phi_e is singular for a Frobenius system")
    formula = phi_inverse_formula(c, R, ext, sys.E)
    if np.any(formula != phi_inv):
        raise InternalConsistencyError("phi^{-1} differs from the formula built from E")
    return InducedWitness(c, e, phi, phi_inv, formula, R)
