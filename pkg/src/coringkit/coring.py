"""Corings, their right comodules, grouplikes, coinvariants and the dual ring.

A coring stores its coproduct as a *lift* into the plain tensor square
``C (x)_k C``; every axiom is checked after projecting to ``C (x)_A C``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import (
    Algebra,
    AlgebraMorphism,
    BalancedTensor,
    Bimodule,
    HomSpace,
    _mismatch,
    balanced_tensor,
    hom_space,
    linearity_constraints,
    left_action_map,
    regular_bimodule,
    right_action_map,
    same_algebra,
    validate_algebra,
    validate_bimodule,
)
from .errors import InternalConsistencyError, MalformedInputError, PreconditionError
from .linalg import FieldSpec, column_basis, kernel_array, left_inverse, solve_array, stack_columns
from .report import ValidationReport

DEFAULT_BUDGET = 2**20


@dataclass(frozen=True, eq=False)
class Coring:
    bimodule: Bimodule
    coproduct_lift: np.ndarray  # (c*c) x c
    counit: np.ndarray  # a x c
    name: str = ""
    known_grouplikes: tuple = ()
    extension: AlgebraMorphism | None = None  # set for canonical corings

    def __post_init__(self):
        b = self.bimodule
        if b.left is None or b.right is None or not same_algebra(b.left_algebra, b.right_algebra):
            raise MalformedInputError("a coring needs an (A,A)-bimodule")
        c = b.dim
        if self.coproduct_lift.shape != (c * c, c):
            raise MalformedInputError(f"coproduct lift has shape {self.coproduct_lift.shape}, expected {(c * c, c)}")
        if self.counit.shape != (b.left_algebra.dim, c):
            raise MalformedInputError(f"counit has shape {self.counit.shape}")

    @property
    def algebra(self) -> Algebra:
        return self.bimodule.left_algebra

    @property
    def field(self) -> FieldSpec:
        return self.bimodule.field

    @property
    def dim(self) -> int:
        return self.bimodule.dim

    @cached_property
    def tensor_square(self) -> BalancedTensor:
        return balanced_tensor(self.bimodule, self.bimodule)

    @cached_property
    def tensor_cube(self) -> BalancedTensor:
        """(C (x)_A C) (x)_A C."""
        return balanced_tensor(self.tensor_square.module, self.bimodule)

    @cached_property
    def delta(self) -> np.ndarray:
        """The coproduct in quotient coordinates of C (x)_A C."""
        return self.field.dot(self.tensor_square.project, self.coproduct_lift)

    @cached_property
    def delta_lift(self) -> np.ndarray:
        """Canonical representative of Delta(c) in C (x)_k C."""
        return self.field.dot(self.tensor_square.section, self.delta)

    def counit_of(self, x):
        return self.field.dot(self.counit, x)

    def with_name(self, name):
        return Coring(self.bimodule, self.coproduct_lift, self.counit, name, self.known_grouplikes, self.extension)

    def __repr__(self):
        return f"Coring({self.name or '?'}, dim={self.dim}, over {self.algebra!r})"


# -- iterated-tensor helpers ------------------------------------------------------


def cube_left_map(c: Coring) -> np.ndarray:
    """(Delta (x)_A C) o Delta as a map C -> C (x)_A C (x)_A C."""
    T2, T3 = c.tensor_square, c.tensor_cube
    F = c.field
    first = T2.tensor_maps(c.delta, F.eye(c.dim), T3)
    return F.dot(first, c.delta)


def id_tensor_delta(c: Coring) -> np.ndarray:
    """C (x)_A Delta as a map C (x)_A C -> C (x)_A C (x)_A C."""
    T2, T3 = c.tensor_square, c.tensor_cube
    F = c.field
    full = T2.tensor_maps(F.eye(c.dim), c.delta_lift)  # into C C C
    return F.dot(T3.project, F.dot(F.kron(T2.project, F.eye(c.dim)), full))


def cube_right_map(c: Coring) -> np.ndarray:
    return c.field.dot(id_tensor_delta(c), c.delta)


def cube_lift(c: Coring) -> np.ndarray:
    """Representatives in C (x) C (x) C of the quotient basis of the cube."""
    F = c.field
    T2, T3 = c.tensor_square, c.tensor_cube
    return T3.tensor_maps(T2.section, F.eye(c.dim))


def left_counit_map(c: Coring, counit: np.ndarray | None = None) -> np.ndarray:
    """(eps (x)_A C) as a map C (x)_A C -> C."""
    T2 = c.tensor_square
    eps = c.counit if counit is None else counit
    return c.field.dot(left_action_map(c.bimodule), T2.tensor_maps(eps, c.field.eye(c.dim)))


def right_counit_map(c: Coring) -> np.ndarray:
    T2 = c.tensor_square
    return c.field.dot(right_action_map(c.bimodule), T2.tensor_maps(c.field.eye(c.dim), c.counit))


def _linear_failures(F, src_acts, tgt_acts, f, n):
    bad = []
    for i in range(n):
        if np.any(F.dot(f, src_acts[i]) != F.dot(tgt_acts[i], f)):
            bad.append((i,))
    return bad


def validate_coring(c: Coring, *, precoring: bool = False) -> ValidationReport:
    """Exact per-axiom report; with ``precoring`` right unitality is not required."""
    F = c.field
    A = c.algebra
    rep = ValidationReport(f"coring {c.name}".strip())
    bm = validate_bimodule(c.bimodule, right_unital=not precoring)
    rep.merge(bm)
    if not bm.ok:
        return rep
    T2 = c.tensor_square
    mod2 = T2.module
    rep.check("coproduct_left_linear", _linear_failures(F, c.bimodule.left, mod2.left, c.delta, A.dim))
    rep.check("coproduct_right_linear", _linear_failures(F, c.bimodule.right, mod2.right, c.delta, A.dim))
    rep.check("counit_left_linear", _linear_failures(F, c.bimodule.left, A.lmats, c.counit, A.dim))
    eye = F.eye(c.dim)
    right = F.dot(right_counit_map(c), c.delta)
    if precoring:
        # Without right unitality eps is only right linear up to p(c) = c.1,
        # and eps (x)_A C is well defined only after composing with p.
        p = c.bimodule.right_mat(A.unit)
        ep = F.dot(c.counit, p)
        rep.check("counit_right_linear", [
            (i,) for i in range(A.dim)
            if np.any(F.dot(c.counit, c.bimodule.right[i]) != F.dot(A.rmats[i], ep))
        ])
        left = F.dot(left_counit_map(c, ep), c.delta)
        rep.check("unit_defect_left", _mismatch(left.T, p.T, 1))
        rep.check("unit_defect_right", _mismatch(right.T, p.T, 1))
    else:
        rep.check("counit_right_linear", _linear_failures(F, c.bimodule.right, A.rmats, c.counit, A.dim))
        left = F.dot(left_counit_map(c), c.delta)
        rep.check("left_counit", _mismatch(left.T, eye.T, 1))
        rep.check("right_counit", _mismatch(right.T, eye.T, 1))
    rep.check("coassociativity", _mismatch(cube_left_map(c).T, cube_right_map(c).T, 1))
    return rep


# -- constructors ---------------------------------------------------------------


def extension_tensor(ext: AlgebraMorphism) -> BalancedTensor:
    """A (x)_B A for an extension B -> A (quotient of A (x)_k A)."""
    R = regular_bimodule(ext.target)
    return balanced_tensor(R.restrict(right=ext), R.restrict(left=ext))


def canonical_coring(ext: AlgebraMorphism, name: str = "") -> Coring:
    """A (x)_B A with Delta(a (x) a') = (a (x) 1) (x) (1 (x) a') and eps = product."""
    rep = ext.validate()
    rep.raise_if_invalid()
    A = ext.target
    F = A.field
    T = extension_tensor(ext)
    bim = T.module.with_name(name or "AoA")
    q = T.quotient_dim
    ld = T.right.dim
    lift = F.zeros((q * q, q))
    for t, idx in enumerate(T.basis_index):
        i, j = divmod(int(idx), ld)
        left = T.element(A.basis(i), A.unit)
        right = T.element(A.unit, A.basis(j))
        lift[:, t] = F.kron(left, right)
    counit = F.dot(A.mult_matrix, T.section)
    g = T.element(A.unit, A.unit)
    return Coring(bim, lift, counit, name or "canonical", (g,), ext)


def trivial_coring(A: Algebra, name: str = "") -> Coring:
    """C = A with Delta the identification A -> A (x)_A A and eps = id."""
    F = A.field
    R = regular_bimodule(A)
    d = A.dim
    lift = F.zeros((d * d, d))
    for i in range(d):
        lift[:, i] = F.kron(A.basis(i), A.unit)
    return Coring(R.with_name("A"), lift, F.eye(d), name or "trivial", (A.unit.copy(),))


def coalgebra_as_coring(C, name: str = "") -> Coring:
    """A k-coalgebra seen as a coring over the ground field."""
    from .algebra import ground_algebra

    F = C.field
    k = ground_algebra(F)
    d = C.dim
    one = np.stack([F.eye(d)])
    bim = Bimodule(F, d, k, k, one, one.copy(), C.name)
    return Coring(bim, C.delta.copy(), C.eps.copy(), name or C.name)


# -- comodules -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CoringComodule:
    module: Bimodule  # right A-module
    coaction_lift: np.ndarray  # (m*c) x m into M (x)_k C
    coring: Coring
    name: str = ""

    def __post_init__(self):
        if self.module.right is None:
            raise MalformedInputError("a comodule needs a right module structure")
        m, c = self.module.dim, self.coring.dim
        if self.coaction_lift.shape != (m * c, m):
            raise MalformedInputError(f"coaction lift has shape {self.coaction_lift.shape}, expected {(m * c, m)}")

    @property
    def dim(self) -> int:
        return self.module.dim

    @property
    def field(self) -> FieldSpec:
        return self.coring.field

    @cached_property
    def tensor(self) -> BalancedTensor:
        """M (x)_A C."""
        return balanced_tensor(self.module.only_right(), self.coring.bimodule)

    @cached_property
    def rho(self) -> np.ndarray:
        return self.field.dot(self.tensor.project, self.coaction_lift)

    @cached_property
    def rho_lift(self) -> np.ndarray:
        return self.field.dot(self.tensor.section, self.rho)


def counit_on(m: CoringComodule) -> np.ndarray:
    """M (x)_A eps: M (x)_A C -> M."""
    F = m.field
    return F.dot(right_action_map(m.module), m.tensor.tensor_maps(F.eye(m.dim), m.coring.counit))


def validate_comodule(m: CoringComodule) -> ValidationReport:
    F = m.field
    c = m.coring
    A = c.algebra
    rep = ValidationReport(f"comodule {m.name}".strip())
    rep.merge(validate_bimodule(m.module.only_right()))
    if not rep.ok:
        return rep
    T = m.tensor
    rep.check("coaction_right_linear", _linear_failures(F, m.module.right, T.module.right, m.rho, A.dim))
    rep.check("counit", _mismatch(F.dot(counit_on(m), m.rho).T, F.eye(m.dim).T, 1))
    TT = balanced_tensor(T.module, c.bimodule)
    lhs = F.dot(T.tensor_maps(m.rho, F.eye(c.dim), TT), m.rho)
    full = T.tensor_maps(F.eye(m.dim), c.delta_lift)
    rhs = F.dot(TT.project, F.dot(F.kron(T.project, F.eye(c.dim)), F.dot(full, m.rho)))
    rep.check("coassociativity", _mismatch(lhs.T, rhs.T, 1))
    return rep


def regular_comodule(c: Coring) -> CoringComodule:
    """C as a right comodule over itself via Delta."""
    return CoringComodule(c.bimodule.only_right().with_name(c.name), c.delta_lift.copy(), c, c.name or "C")


def comodule_from_lift(module: Bimodule, coaction: np.ndarray, c: Coring, name: str = "") -> CoringComodule:
    return CoringComodule(module.only_right(), coaction, c, name)


def cofree_comodule(V: Bimodule, c: Coring, name: str = "") -> CoringComodule:
    """V (x)_A C with coaction V (x)_A Delta."""
    F = c.field
    T = balanced_tensor(V.only_right(), c.bimodule)
    X = T.module.only_right()
    lift = F.dot(F.kron(T.project, F.eye(c.dim)), T.tensor_maps(F.eye(V.dim), c.delta_lift))
    return CoringComodule(X.with_name(name or f"{V.name}oC"), lift, c, name or f"{V.name}oC")


def comodule_map_failures(f: np.ndarray, m: CoringComodule, n: CoringComodule) -> list[str]:
    """Axioms a map f: M -> N violates as a comodule morphism."""
    F = m.field
    bad = []
    A = m.coring.algebra
    if _linear_failures(F, m.module.right, n.module.right, f, A.dim):
        bad.append("right_linear")
    lhs = F.dot(n.rho, f)
    rhs = F.dot(m.tensor.tensor_maps(f, F.eye(m.coring.dim), n.tensor), m.rho)
    if np.any(lhs != rhs):
        bad.append("colinear")
    return bad


# -- grouplikes and coinvariants ------------------------------------------------


@dataclass(frozen=True)
class GrouplikeSearch:
    grouplikes: list
    exhaustive: bool
    candidates_total: int | None
    scanned: int
    status: str  # "exhaustive" or "non-exhaustive"

    def to_json(self, F: FieldSpec):
        return {
            "grouplikes": [[F.format(x) for x in g] for g in self.grouplikes],
            "exhaustive": self.exhaustive,
            "candidates_total": self.candidates_total,
            "scanned": self.scanned,
            "status": self.status,
        }


def is_grouplike(c: Coring, g: np.ndarray) -> bool:
    F = c.field
    g = F.array(g) if not isinstance(g, np.ndarray) else g
    if g.shape != (c.dim,):
        return False
    T2 = c.tensor_square
    if np.any(F.dot(c.counit, g) != c.algebra.unit):
        return False
    return not np.any(F.dot(c.delta, g) != T2.element(g, g))


def find_grouplikes(c: Coring, candidates=None, budget: int = DEFAULT_BUDGET) -> GrouplikeSearch:
    """All grouplikes when the affine search space fits in ``budget``;
    otherwise only supplied and constructor-known candidates are verified."""
    F = c.field
    d = c.dim
    sol = solve_array(F, c.counit, c.algebra.unit)
    if sol is None:
        return GrouplikeSearch([], True, 0, 0, "exhaustive")
    base, dirs = sol
    k = len(dirs)
    if k == 0:
        hits = [base] if is_grouplike(c, base) else []
        return GrouplikeSearch(hits, True, 1, 1, "exhaustive")
    if F.is_finite and F.p**k <= budget:
        from .linalg._kernels import quadratic_scan

        T2 = c.tensor_square
        proj = np.concatenate([T2.project, F.reduce(-c.delta)], axis=1)
        D = np.stack(dirs)
        idx = quadratic_scan(base, D, proj, F.p)
        found = []
        for i in idx:
            t = F.array(_digits(int(i), k, F.p))
            g = F.reduce(base + t @ D)
            if not is_grouplike(c, g):
                raise InternalConsistencyError("grouplike scan returned a non-grouplike")
            found.append(g)
        return GrouplikeSearch(found, True, F.p**k, F.p**k, "exhaustive")
    pool = list(candidates or []) + list(c.known_grouplikes)
    found = []
    for g in pool:
        g = F.array(g)
        if is_grouplike(c, g) and not any(np.array_equal(g, h) for h in found):
            found.append(g)
    total = F.p**k if F.is_finite else None
    return GrouplikeSearch(found, False, total, len(pool), "non-exhaustive")


def _digits(idx, k, p):
    out = [0] * k
    for j in range(k - 1, -1, -1):
        out[j] = idx % p
        idx //= p
    return out


def comodule_from_grouplike(c: Coring, g: np.ndarray) -> CoringComodule:
    """A as a right comodule via a -> g.a (in A (x)_A C)."""
    if not is_grouplike(c, g):
        raise PreconditionError("element is not grouplike", axiom="grouplike")
    F = c.field
    A = c.algebra
    M = regular_bimodule(A).only_right().with_name("A")
    lift = stack_columns(F, [F.kron(A.unit, F.dot(c.bimodule.right[i], g)) for i in range(A.dim)], A.dim * c.dim)
    m = CoringComodule(M, lift, c, "A")
    validate_comodule(m).raise_if_invalid()
    return m


def coinvariants(m: CoringComodule, g: np.ndarray) -> np.ndarray:
    """Basis (columns) of {x in M : rho(x) = x (x)_A g}."""
    F = m.field
    if not is_grouplike(m.coring, g):
        raise PreconditionError("element is not grouplike", axiom="grouplike")
    if m.dim == 0:
        return F.zeros((0, 0))
    T = m.tensor
    xg = F.dot(T.project, F.kron(F.eye(m.dim), g.reshape(-1, 1)))
    return stack_columns(F, kernel_array(F, F.sub(m.rho, xg)), m.dim)


# -- the dual ring -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DualRing:
    coring: Coring
    hom: HomSpace
    algebra: Algebra
    iota: AlgebraMorphism
    left_action: np.ndarray  # (A.dim, R.dim, R.dim)

    @property
    def dim(self) -> int:
        return self.hom.dim

    def element(self, coords) -> np.ndarray:
        """The map C -> A with the given coordinates."""
        return self.hom.combine(coords)

    def coords(self, r: np.ndarray) -> np.ndarray:
        return self.hom.coordinates(r)

    def product_maps(self, r: np.ndarray, s: np.ndarray) -> np.ndarray:
        return dual_product(self.coring, r, s)


def dual_product(c: Coring, r: np.ndarray, s: np.ndarray) -> np.ndarray:
    """(rs)(x) = s(x_(1) . r(x_(2)))."""
    F = c.field
    T2 = c.tensor_square
    d = c.dim
    # K[:, (i, j)] = e_i . r(e_j)
    K = F.einsum("km,kni->nim", r, c.bimodule.right).reshape(d, d * d)
    return F.dot(s, F.dot(K[:, T2.basis_index], c.delta))


def dual_ring(c: Coring) -> DualRing:
    F = c.field
    A = c.algebra
    H = hom_space(c.bimodule.only_left(), regular_bimodule(A).only_left(), "LeftLinear")
    n = H.dim
    mult = F.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            mult[i, j] = H.coordinates(dual_product(c, H.basis[i], H.basis[j]))
    unit = H.coordinates(c.counit)
    R = Algebra(F, mult, unit, f"R({c.name})")
    iota_cols = [H.coordinates(F.dot(A.rmats[a], c.counit)) for a in range(A.dim)]
    iota = AlgebraMorphism(A, R, stack_columns(F, iota_cols, n))
    act = F.zeros((A.dim, n, n))
    for a in range(A.dim):
        for j in range(n):
            act[a, :, j] = H.coordinates(F.dot(H.basis[j], c.bimodule.right[a]))
    dr = DualRing(c, H, R, iota, act)
    rep = validate_algebra(R)
    rep.merge(iota.validate(), "iota.")
    if not rep.ok:
        raise InternalConsistencyError(f"dual ring failed its own checks: {rep.axioms_violated}")
    return dr


# -- pre-corings --------------------------------------------------------------------


@dataclass(frozen=True)
class PrecoringResult:
    projection: np.ndarray
    basis: np.ndarray  # columns spanning Im p
    coring: Coring


def validate_precoring(c: Coring) -> ValidationReport:
    F = c.field
    A = c.algebra
    rep = validate_coring(c, precoring=True)
    p = c.bimodule.right_mat(A.unit)
    rep.check("projection_idempotent", _mismatch(F.dot(p, p).T, p.T, 1))
    rep.check("projection_left_linear", _linear_failures(F, c.bimodule.left, c.bimodule.left, p, A.dim))
    rep.check("projection_right_linear", _linear_failures(F, c.bimodule.right, c.bimodule.right, p, A.dim))
    T2 = c.tensor_square
    pp = F.dot(T2.tensor_maps(p, p, T2), c.delta)
    rep.check("projection_coproduct", _mismatch(pp.T, F.dot(c.delta, p).T, 1))
    return rep


def restrict_to_image(c: Coring, p: np.ndarray, basis: np.ndarray, lift_images: np.ndarray, name: str) -> Coring:
    """Coring on span(basis) given lifts (in C (x)_k C) of Delta of each basis vector."""
    F = c.field
    A = c.algebra
    linv = left_inverse(F, basis)

    def restrict(mats):
        out = []
        for M in mats:
            img = F.dot(M, basis)
            co = F.dot(linv, img)
            if np.any(F.dot(basis, co) != img):
                raise PreconditionError("image of p is not a sub-bimodule", axiom="projection_bilinear")
            out.append(co)
        return np.stack(out) if out else F.zeros((0, basis.shape[1], basis.shape[1]))

    r = basis.shape[1]
    bim = Bimodule(F, r, A, A, restrict(c.bimodule.left), restrict(c.bimodule.right), name)
    lift = F.dot(F.kron(linv, linv), F.dot(F.kron(p, p), lift_images))
    counit = F.dot(c.counit, basis)
    return Coring(bim, lift, counit, name)


def coring_from_precoring(c: Coring, name: str = "") -> PrecoringResult:
    """Restrict a pre-coring to the image of p(c) = c.1."""
    rep = validate_precoring(c)
    rep.raise_if_invalid()
    F = c.field
    p = c.bimodule.right_mat(c.algebra.unit)
    basis = column_basis(F, p) if c.dim else F.zeros((0, 0))
    images = F.dot(c.coproduct_lift, basis)
    out = restrict_to_image(c, p, basis, images, name or f"Im p({c.name})")
    res = validate_coring(out)
    if not res.ok:
        raise InternalConsistencyError(f"restricted coring invalid: {res.axioms_violated}")
    return PrecoringResult(p, basis, out)


def coring_morphism_failures(f: np.ndarray, src: Coring, tgt: Coring) -> list[str]:
    """Axioms a bimodule map f: src -> tgt violates as a coring morphism."""
    F = src.field
    A = src.algebra
    bad = []
    if _linear_failures(F, src.bimodule.left, tgt.bimodule.left, f, A.dim):
        bad.append("left_linear")
    if _linear_failures(F, src.bimodule.right, tgt.bimodule.right, f, A.dim):
        bad.append("right_linear")
    lhs = F.dot(tgt.delta, f)
    rhs = F.dot(src.tensor_square.tensor_maps(f, f, tgt.tensor_square), src.delta)
    if np.any(lhs != rhs):
        bad.append("coproduct")
    if np.any(F.dot(tgt.counit, f) != src.counit):
        bad.append("counit")
    return bad


def same_coring_structure(c1: Coring, c2: Coring) -> bool:
    """Identical bimodule constants, projected coproduct and counit."""
    b1, b2 = c1.bimodule, c2.bimodule
    return (
        b1.dim == b2.dim
        and np.array_equal(b1.left, b2.left)
        and np.array_equal(b1.right, b2.right)
        and np.array_equal(c1.delta, c2.delta)
        and np.array_equal(c1.counit, c2.counit)
    )


def comodule_hom_space(m: CoringComodule, n: CoringComodule) -> list:
    """Basis of Hom^C(M, N): right A-linear, colinear maps (n.dim x m.dim arrays)."""
    F = m.field
    c = m.coring
    A = c.algebra
    size = m.dim * n.dim
    if size == 0:
        return []
    rows = [linearity_constraints(F, list(m.module.right), list(n.module.right), m.dim, n.dim)]
    Tm, Tn = m.tensor, n.tensor
    eye_c = F.eye(c.dim)
    cols = []
    for idx in range(size):
        f = F.zeros(size)
        f[idx] = F.one
        f = f.reshape(n.dim, m.dim)
        cols.append(F.sub(F.dot(n.rho, f), F.dot(Tm.tensor_maps(f, eye_c, Tn), m.rho)).reshape(-1))
    rows.append(stack_columns(F, cols, Tn.quotient_dim * m.dim))
    cons = np.concatenate(rows, axis=0)
    return [v.reshape(n.dim, m.dim) for v in kernel_array(F, cons)]
