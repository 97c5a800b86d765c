"""Finite-dimensional algebras, bimodules, balanced tensor products and hom spaces.

Conventions used everywhere in the package:

* ``mult[i, j, k]`` is the coefficient of ``e_k`` in ``e_i * e_j``.
* Module actions are stored as matrices acting on column vectors:
  ``left[i] @ m`` is ``e_i . m`` and ``right[i] @ m`` is ``m . e_i``.
* Tensor coordinates are lexicographic with the left index major, so the
  k-linear map ``f (x) g`` is ``numpy.kron(f, g)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import MalformedInputError
from .linalg import FieldSpec, kernel_array, left_inverse, rank_array, rref_array, solve_array, stack_columns
from .report import ValidationReport


def _mismatch(a: np.ndarray, b: np.ndarray, keep: int) -> list[tuple]:
    """Index tuples (first ``keep`` axes) where arrays ``a`` and ``b`` differ."""
    diff = np.asarray(a != b)
    if diff.ndim > keep:
        diff = diff.reshape(diff.shape[:keep] + (-1,)).any(axis=-1)
    return [tuple(int(x) for x in idx) for idx in np.argwhere(diff)]


@dataclass(frozen=True, eq=False)
class Algebra:
    field: FieldSpec
    mult: np.ndarray
    unit: np.ndarray
    name: str = ""

    def __post_init__(self):
        d = self.unit.shape[0] if np.ndim(self.unit) == 1 else -1
        if d < 0 or self.mult.shape != (d, d, d):
            raise MalformedInputError(
                f"algebra structure constants of shape {self.mult.shape} do not match unit of shape {np.shape(self.unit)}"
            )

    @classmethod
    def from_data(cls, field: FieldSpec, mult, unit, name=""):
        return cls(field, field.array(mult), field.array(unit), name)

    @property
    def dim(self) -> int:
        return self.unit.shape[0]

    @cached_property
    def lmats(self) -> np.ndarray:
        """lmats[i] is the matrix of left multiplication by e_i."""
        return np.ascontiguousarray(np.transpose(self.mult, (0, 2, 1)))

    @cached_property
    def rmats(self) -> np.ndarray:
        """rmats[i] is the matrix of right multiplication by e_i."""
        return np.ascontiguousarray(np.transpose(self.mult, (1, 2, 0)))

    def basis(self, i: int) -> np.ndarray:
        return self.field.unit_vector(self.dim, i)

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return self.field.dot(self.lmat(x), y)

    def lmat(self, x: np.ndarray) -> np.ndarray:
        return self.field.combo(x, self.lmats)

    def rmat(self, x: np.ndarray) -> np.ndarray:
        return self.field.combo(x, self.rmats)

    @cached_property
    def mult_matrix(self) -> np.ndarray:
        """The product as a linear map A (x) A -> A."""
        return self.mult.reshape(self.dim * self.dim, self.dim).T.copy()

    @cached_property
    def is_commutative(self) -> bool:
        return not np.any(self.mult != np.transpose(self.mult, (1, 0, 2)))

    @cached_property
    def generators(self) -> list[int]:
        """Basis indices generating the algebra (greedy, in basis order).

        Linear conditions that only need to hold for all elements of the
        algebra are imposed on these generators alone.
        """
        F = self.field
        span = self.unit.reshape(-1, 1)
        gens: list[int] = []
        for i in range(self.dim):
            if rank_array(F, np.concatenate([span, self.basis(i).reshape(-1, 1)], axis=1)) == rank_array(F, span):
                continue
            gens.append(i)
            span = self._closure(np.concatenate([span, self.basis(i).reshape(-1, 1)], axis=1), gens)
        return gens

    def _closure(self, span: np.ndarray, gens: list[int]) -> np.ndarray:
        F = self.field
        r = rank_array(F, span)
        while True:
            products = [F.dot(self.lmats[g], span) for g in gens]
            basis = _column_space(F, np.concatenate([span] + products, axis=1))
            if basis.shape[1] == r:
                return basis
            span, r = basis, basis.shape[1]

    def __repr__(self):
        return f"Algebra({self.name or '?'}, dim={self.dim}, over {self.field})"


def _column_space(F: FieldSpec, m: np.ndarray) -> np.ndarray:
    r, piv = rref_array(F, m.T.copy())
    return r[: len(piv)].T.copy()


# -- standard algebras --------------------------------------------------------


def ground_algebra(F: FieldSpec) -> Algebra:
    return Algebra(F, F.array([[[1]]]), F.array([1]), "k")


def truncated_polynomial_algebra(F: FieldSpec, n: int) -> Algebra:
    """k[x]/(x^n) on the basis 1, x, ..., x^(n-1)."""
    mult = F.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            if i + j < n:
                mult[i, j, i + j] = F.one
    return Algebra(F, mult, F.unit_vector(n, 0), f"k[x]/(x^{n})")


def matrix_algebra(F: FieldSpec, n: int) -> Algebra:
    """M_n(k) on matrix units e_ij (row-major index i*n + j)."""
    d = n * n
    mult = F.zeros((d, d, d))
    for i in range(n):
        for j in range(n):
            for l in range(n):
                mult[i * n + j, j * n + l, i * n + l] = F.one
    unit = F.zeros(d)
    for i in range(n):
        unit[i * n + i] = F.one
    return Algebra(F, mult, unit, f"M_{n}")


def group_algebra(F: FieldSpec, table: list[list[int]], identity: int = 0) -> Algebra:
    """k[G] from a multiplication table of group element indices."""
    n = len(table)
    mult = F.zeros((n, n, n))
    for i in range(n):
        for j in range(n):
            mult[i, j, table[i][j]] = F.one
    return Algebra(F, mult, F.unit_vector(n, identity), f"k[G{n}]")


def upper_triangular_algebra(F: FieldSpec) -> Algebra:
    """T_2 on the basis e11, e12, e22."""
    units = {(0, 0): 0, (0, 1): 1, (1, 1): 2}
    mult = F.zeros((3, 3, 3))
    for (i, j), a in units.items():
        for (j2, l), b in units.items():
            if j == j2:
                mult[a, b, units[(i, l)]] = F.one
    unit = F.array([1, 0, 1])
    return Algebra(F, mult, unit, "T_2")


def product_algebra(F: FieldSpec, n: int) -> Algebra:
    """k x ... x k (n copies) on orthogonal idempotents."""
    mult = F.zeros((n, n, n))
    for i in range(n):
        mult[i, i, i] = F.one
    return Algebra(F, mult, F.array([1] * n), f"k^{n}")


def validate_algebra(a: Algebra) -> ValidationReport:
    """Exact check of associativity and both unit laws on all basis elements."""
    F, d = a.field, a.dim
    rep = ValidationReport(f"algebra {a.name or ''}".strip())
    mult = a.mult
    # left[i,j,l,m] = ((e_i e_j) e_l)_m ; right[i,j,l,m] = (e_i (e_j e_l))_m
    left = F.tensordot(mult, mult, (2, 0))
    right = np.transpose(F.tensordot(mult, mult, (1, 2)), (0, 2, 3, 1))
    # tensordot(mult, mult, (1,2)) -> [i, m, j, l] summing mult[i,k,m]*mult[j,l,k]
    rep.check("associativity", _mismatch(left, right, 3))
    eye = F.eye(d)
    lu = F.tensordot(a.unit, mult, (0, 0))  # [j, m] = (1 e_j)_m
    ru = F.tensordot(a.unit, mult, (0, 1))  # [i, m] = (e_i 1)_m
    rep.check("left_unit", _mismatch(lu, eye, 1))
    rep.check("right_unit", _mismatch(ru, eye, 1))
    return rep


@dataclass(frozen=True, eq=False)
class AlgebraMorphism:
    source: Algebra
    target: Algebra
    matrix: np.ndarray  # target.dim x source.dim

    def __call__(self, x):
        return self.target.field.dot(self.matrix, x)

    def validate(self) -> ValidationReport:
        F = self.target.field
        rep = ValidationReport("algebra morphism")
        if self.matrix.shape != (self.target.dim, self.source.dim):
            rep.fail("shape", f"matrix shape {self.matrix.shape}")
            return rep
        rep.check("unital", [] if not np.any(self(self.source.unit) != self.target.unit) else [()])
        bad = []
        for i in range(self.source.dim):
            fi = self.matrix[:, i]
            for j in range(self.source.dim):
                lhs = self(self.source.mult[i, j])
                rhs = self.target.mul(fi, self.matrix[:, j])
                if np.any(lhs != rhs):
                    bad.append((i, j))
        rep.check("multiplicative", bad)
        return rep


def subalgebra(A: Algebra, basis: np.ndarray, name: str = "B") -> tuple[Algebra, AlgebraMorphism]:
    """Algebra structure on the span of the columns of ``basis`` (must be a
    unital subalgebra) together with its inclusion."""
    F = A.field
    linv = left_inverse(F, basis)
    r = basis.shape[1]
    mult = F.zeros((r, r, r))
    for i in range(r):
        for j in range(r):
            prod = A.mul(basis[:, i], basis[:, j])
            coords = F.dot(linv, prod)
            if np.any(F.dot(basis, coords) != prod):
                raise MalformedInputError("span is not closed under multiplication")
            mult[i, j] = coords
    unit = F.dot(linv, A.unit)
    if np.any(F.dot(basis, unit) != A.unit):
        raise MalformedInputError("span does not contain the unit")
    B = Algebra(F, mult, unit, name)
    return B, AlgebraMorphism(B, A, basis.copy())


# -- bimodules ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Bimodule:
    """A vector space with an optional left action of ``left_algebra`` and an
    optional right action of ``right_algebra``, each stored as a stack of
    action matrices indexed by the algebra basis."""

    field: FieldSpec
    dim: int
    left_algebra: Algebra | None = None
    right_algebra: Algebra | None = None
    left: np.ndarray | None = None
    right: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        for alg, act, side in ((self.left_algebra, self.left, "left"), (self.right_algebra, self.right, "right")):
            if (alg is None) != (act is None):
                raise MalformedInputError(f"{side} action needs both an algebra and action matrices")
            if alg is not None and act.shape != (alg.dim, self.dim, self.dim):
                raise MalformedInputError(
                    f"{side} action of shape {act.shape} expected {(alg.dim, self.dim, self.dim)}"
                )

    def left_mat(self, x: np.ndarray) -> np.ndarray:
        return self.field.combo(x, self.left)

    def right_mat(self, x: np.ndarray) -> np.ndarray:
        return self.field.combo(x, self.right)

    def act_left(self, x, m):
        return self.field.dot(self.left_mat(x), m)

    def act_right(self, m, x):
        return self.field.dot(self.right_mat(x), m)

    def with_name(self, name: str) -> "Bimodule":
        return Bimodule(self.field, self.dim, self.left_algebra, self.right_algebra, self.left, self.right, name)

    def only_left(self) -> "Bimodule":
        return Bimodule(self.field, self.dim, self.left_algebra, None, self.left, None, self.name)

    def only_right(self) -> "Bimodule":
        return Bimodule(self.field, self.dim, None, self.right_algebra, None, self.right, self.name)

    def restrict(self, left: AlgebraMorphism | None = None, right: AlgebraMorphism | None = None) -> "Bimodule":
        """Restriction of scalars along algebra morphisms into the acting algebras."""
        F = self.field
        la, lact = self.left_algebra, self.left
        ra, ract = self.right_algebra, self.right
        if left is not None:
            la, lact = left.source, np.stack([self.left_mat(left.matrix[:, i]) for i in range(left.source.dim)])
        if right is not None:
            ra, ract = right.source, np.stack([self.right_mat(right.matrix[:, i]) for i in range(right.source.dim)])
        return Bimodule(F, self.dim, la, ra, lact, ract, self.name)

    def __repr__(self):
        return f"Bimodule({self.name or '?'}, dim={self.dim})"


def regular_bimodule(A: Algebra) -> Bimodule:
    return Bimodule(A.field, A.dim, A, A, A.lmats, A.rmats, A.name)


def zero_module(A: Algebra, left=True, right=True) -> Bimodule:
    F = A.field
    z = F.zeros((A.dim, 0, 0))
    return Bimodule(F, 0, A if left else None, A if right else None, z if left else None, z if right else None, "0")


def same_algebra(a: Algebra, b: Algebra) -> bool:
    return a is b or (
        a.field == b.field and a.dim == b.dim and not np.any(a.mult != b.mult) and not np.any(a.unit != b.unit)
    )


def validate_bimodule(m: Bimodule, *, right_unital: bool = True, left_unital: bool = True) -> ValidationReport:
    F = m.field
    rep = ValidationReport(f"bimodule {m.name}".strip())
    eye = F.eye(m.dim)
    if m.left is not None:
        A = m.left_algebra
        if left_unital:
            rep.check("left_unital", [] if not np.any(m.left_mat(A.unit) != eye) else [()])
        bad = []
        for i in range(A.dim):
            for j in range(A.dim):
                if np.any(F.dot(m.left[i], m.left[j]) != m.left_mat(A.mult[i, j])):
                    bad.append((i, j))
        rep.check("left_associative", bad)
    if m.right is not None:
        A = m.right_algebra
        if right_unital:
            rep.check("right_unital", [] if not np.any(m.right_mat(A.unit) != eye) else [()])
        bad = []
        for i in range(A.dim):
            for j in range(A.dim):
                if np.any(F.dot(m.right[j], m.right[i]) != m.right_mat(A.mult[i, j])):
                    bad.append((i, j))
        rep.check("right_associative", bad)
    if m.left is not None and m.right is not None:
        bad = []
        for i in range(m.left_algebra.dim):
            for j in range(m.right_algebra.dim):
                if np.any(F.dot(m.left[i], m.right[j]) != F.dot(m.right[j], m.left[i])):
                    bad.append((i, j))
        rep.check("actions_commute", bad)
    return rep


def _relation_generators(alg: Algebra, include_unit: bool) -> list[np.ndarray]:
    gens = [alg.basis(i) for i in alg.generators]
    if include_unit:
        gens.append(alg.unit)
    return gens


def kron_columns(F: FieldSpec, f: np.ndarray, g: np.ndarray, qi: np.ndarray, qj: np.ndarray) -> np.ndarray:
    """Columns ``(qi[t], qj[t])`` of ``kron(f, g)`` without forming it."""
    out = f[:, None, qi] * g[None, :, qj]
    return F.reduce(out.reshape(f.shape[0] * g.shape[0], len(qi)))


@dataclass(frozen=True, eq=False)
class BalancedTensor:
    """M (x)_B N as a quotient of M (x)_k N.

    The quotient basis is the set of non-pivot coordinates of the row-reduced
    relation space, so ``section`` just picks standard basis tensors.
    """

    left: Bimodule
    right: Bimodule
    middle: Algebra
    project: np.ndarray  # quotient_dim x (m*n)
    basis_index: np.ndarray  # k-tensor coordinates of the quotient basis

    @property
    def field(self) -> FieldSpec:
        return self.middle.field

    @property
    def quotient_dim(self) -> int:
        return len(self.basis_index)

    @property
    def full_dim(self) -> int:
        return self.left.dim * self.right.dim

    @cached_property
    def section(self) -> np.ndarray:
        s = self.field.zeros((self.full_dim, self.quotient_dim))
        for t, idx in enumerate(self.basis_index):
            s[idx, t] = self.field.one
        return s

    @cached_property
    def _qi(self):
        return self.basis_index // self.right.dim

    @cached_property
    def _qj(self):
        return self.basis_index % self.right.dim

    def proj(self, v: np.ndarray) -> np.ndarray:
        return self.field.dot(self.project, v)

    def lift(self, x: np.ndarray) -> np.ndarray:
        return self.field.dot(self.section, x)

    def tensor_maps(self, f: np.ndarray, g: np.ndarray, target: "BalancedTensor | None" = None) -> np.ndarray:
        """Matrix of f (x)_B g from this quotient to ``target`` (or to the
        plain k-tensor product when ``target`` is None)."""
        cols = kron_columns(self.field, f, g, self._qi, self._qj)
        return cols if target is None else self.field.dot(target.project, cols)

    def element(self, m: np.ndarray, n: np.ndarray) -> np.ndarray:
        """Quotient coordinates of m (x) n."""
        return self.proj(self.field.kron(m.reshape(-1), n.reshape(-1)))

    @cached_property
    def module(self) -> Bimodule:
        """Induced bimodule: left action from ``left``, right action from ``right``."""
        F = self.field
        la = ra = lact = ract = None
        if self.left.left is not None:
            la = self.left.left_algebra
            eye = F.eye(self.right.dim)
            lact = np.stack([self.tensor_maps(L, eye, self) for L in self.left.left]) if la.dim else None
        if self.right.right is not None:
            ra = self.right.right_algebra
            eye = F.eye(self.left.dim)
            ract = np.stack([self.tensor_maps(eye, R, self) for R in self.right.right]) if ra.dim else None
        if la is not None and lact is None:
            lact = F.zeros((la.dim, self.quotient_dim, self.quotient_dim))
        if ra is not None and ract is None:
            ract = F.zeros((ra.dim, self.quotient_dim, self.quotient_dim))
        return Bimodule(F, self.quotient_dim, la, ra, lact, ract, f"{self.left.name}(x){self.right.name}")


def balanced_tensor(m: Bimodule, n: Bimodule) -> BalancedTensor:
    """M (x)_B N for M with a right B-action and N with a left B-action."""
    if m.right is None or n.left is None:
        raise MalformedInputError("balanced tensor needs a right module on the left and a left module on the right")
    B = m.right_algebra
    if not same_algebra(B, n.left_algebra):
        raise MalformedInputError("middle algebras of the two factors differ")
    F = m.field
    dm, dn = m.dim, n.dim
    full = dm * dn
    eye_m, eye_n = F.eye(dm), F.eye(dn)
    unital = not np.any(m.right_mat(B.unit) != eye_m) and not np.any(n.left_mat(B.unit) != eye_n)
    blocks = []
    for b in _relation_generators(B, include_unit=not unital):
        rel = F.sub(F.kron(m.right_mat(b), eye_n), F.kron(eye_m, n.left_mat(b)))
        blocks.append(rel.T)
    if blocks and full:
        rels = np.concatenate(blocks, axis=0)
        rels = rels[np.any(rels != 0, axis=1)]
    else:
        rels = F.zeros((0, full))
    if rels.shape[0]:
        r, piv = rref_array(F, rels)
    else:
        r, piv = F.zeros((0, full)), []
    pset = set(piv)
    free = np.array([c for c in range(full) if c not in pset], dtype=np.int64)
    project = F.zeros((len(free), full))
    for t, c in enumerate(free):
        project[t, c] = F.one
    for t, pc in enumerate(piv):
        project[:, pc] = F.reduce(-r[t, free]) if F.is_finite else -r[t, free]
    return BalancedTensor(m, n, B, project, free)


# -- hom spaces, invariants, centralizers ---------------------------------------


@dataclass(frozen=True, eq=False)
class HomSpace:
    source: Bimodule
    target: Bimodule
    flavor: str
    basis: list  # of target.dim x source.dim arrays

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Columns are the vectorised (row-major) basis maps."""
        n = self.source.dim * self.target.dim
        return stack_columns(self.source.field, [b.reshape(-1) for b in self.basis], n)

    @cached_property
    def _coord_map(self) -> np.ndarray:
        return left_inverse(self.source.field, self.matrix)

    def coordinates(self, f: np.ndarray) -> np.ndarray:
        F = self.source.field
        x = F.dot(self._coord_map, f.reshape(-1))
        if np.any(F.dot(self.matrix, x) != f.reshape(-1)):
            raise MalformedInputError("map is not in the hom space")
        return x

    def combine(self, coords: np.ndarray) -> np.ndarray:
        F = self.source.field
        return F.dot(self.matrix, coords).reshape(self.target.dim, self.source.dim)


def linearity_constraints(F: FieldSpec, src_acts, tgt_acts, n_src: int, n_tgt: int) -> np.ndarray:
    """Rows expressing f @ X_g == Y_g @ f on vec(f) (row-major)."""
    eye_s, eye_t = F.eye(n_src), F.eye(n_tgt)
    blocks = [F.sub(F.kron(eye_t, X.T), F.kron(Y, eye_s)) for X, Y in zip(src_acts, tgt_acts)]
    if not blocks:
        return F.zeros((0, n_src * n_tgt))
    return np.concatenate(blocks, axis=0)


def hom_space(m: Bimodule, n: Bimodule, flavor: str = "LeftLinear") -> HomSpace:
    """Basis of the maps M -> N that are left, right or two-sided linear."""
    F = m.field
    if flavor not in ("LeftLinear", "RightLinear", "Bilinear", "Linear"):
        raise MalformedInputError(f"unknown hom flavor {flavor!r}")
    rows = []
    if flavor in ("LeftLinear", "Bilinear"):
        if m.left is None or n.left is None or not same_algebra(m.left_algebra, n.left_algebra):
            raise MalformedInputError("left-linear maps need left modules over the same algebra")
        A = m.left_algebra
        gens = A.generators
        rows.append(linearity_constraints(F, [m.left[g] for g in gens], [n.left[g] for g in gens], m.dim, n.dim))
    if flavor in ("RightLinear", "Bilinear"):
        if m.right is None or n.right is None or not same_algebra(m.right_algebra, n.right_algebra):
            raise MalformedInputError("right-linear maps need right modules over the same algebra")
        A = m.right_algebra
        gens = A.generators
        rows.append(linearity_constraints(F, [m.right[g] for g in gens], [n.right[g] for g in gens], m.dim, n.dim))
    cons = np.concatenate(rows, axis=0) if rows else F.zeros((0, m.dim * n.dim))
    basis = [v.reshape(n.dim, m.dim) for v in kernel_array(F, cons)] if m.dim * n.dim else []
    return HomSpace(m, n, flavor, basis)


def bimodule_invariants(m: Bimodule) -> np.ndarray:
    """Basis (as columns) of M^A = {m : a.m = m.a for all a}."""
    F = m.field
    if m.left is None or m.right is None or not same_algebra(m.left_algebra, m.right_algebra):
        raise MalformedInputError("invariants need an (A,A)-bimodule")
    A = m.left_algebra
    if m.dim == 0:
        return F.zeros((0, 0))
    gens = A.generators
    cons = np.concatenate([F.sub(m.left[g], m.right[g]) for g in gens], axis=0) if gens else F.zeros((0, m.dim))
    return stack_columns(F, kernel_array(F, cons), m.dim)


def centralizer(A: Algebra, m: Bimodule, v: np.ndarray) -> np.ndarray:
    """Basis (columns) of {b in A : b.v = v.b}; verified to be a unital subalgebra."""
    F = A.field
    cols = [F.sub(F.dot(m.left[i], v), F.dot(m.right[i], v)) for i in range(A.dim)]
    cons = stack_columns(F, cols, m.dim)
    basis = stack_columns(F, kernel_array(F, cons), A.dim)
    _check_subalgebra(A, basis)
    return basis


def _check_subalgebra(A: Algebra, basis: np.ndarray):
    from .errors import InternalConsistencyError

    F = A.field
    if solve_array(F, basis, A.unit) is None:
        raise InternalConsistencyError("centralizer does not contain 1")
    for i in range(basis.shape[1]):
        for j in range(basis.shape[1]):
            if solve_array(F, basis, A.mul(basis[:, i], basis[:, j])) is None:
                raise InternalConsistencyError("centralizer not closed under multiplication")


# -- projectivity ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DualBasis:
    """Maps r_i in Hom_A(M, A) and elements c^i with sum_i r_i(m).c^i = m."""

    module: Bimodule
    r: list  # A.dim x M.dim arrays
    c: list  # coordinate vectors in M

    def verify(self) -> bool:
        F = self.module.field
        m = self.module
        total = F.zeros((m.dim, m.dim))
        for ri, ci in zip(self.r, self.c):
            for col in range(m.dim):
                total[:, col] = F.add(total[:, col], m.act_left(ri[:, col], ci))
        return not np.any(total != F.eye(m.dim))


def dual_basis_projectivity(m: Bimodule) -> DualBasis | None:
    """Dual basis of a left A-module with the module basis as generators, or
    None when no such system exists (then M is not projective)."""
    F = m.field
    A = m.left_algebra
    n = m.dim
    if n == 0:
        return DualBasis(m, [], [])
    H = hom_space(m.only_left(), regular_bimodule(A).only_left(), "LeftLinear")
    h = H.dim
    if h == 0:
        return None
    Hs = np.stack(H.basis)  # (h, dimA, n)
    # coeff[m_, k, i, s] = sum_a Hs[s, a, m_] * left[a][k, i]
    coeff = F.tensordot(np.transpose(Hs, (2, 0, 1)), m.left, (2, 0))  # [m_, s, k, i]
    coeff = np.transpose(coeff, (0, 2, 3, 1)).reshape(n * n, n * h)
    rhs = F.eye(n).T.reshape(-1)  # row (m_, k) -> delta_{k m_}
    sol = solve_array(F, coeff, rhs)
    if sol is None:
        return None
    x = sol[0].reshape(n, h)
    r = [H.combine(x[i]) for i in range(n)]
    c = [F.unit_vector(n, i) for i in range(n)]
    db = DualBasis(m, r, c)
    if not db.verify():
        from .errors import InternalConsistencyError

        raise InternalConsistencyError("dual basis failed re-verification")
    return db


def left_action_map(m: Bimodule) -> np.ndarray:
    """The left action as a linear map A (x) M -> M."""
    return np.ascontiguousarray(np.transpose(m.left, (1, 0, 2)).reshape(m.dim, -1))


def right_action_map(m: Bimodule) -> np.ndarray:
    """The right action as a linear map M (x) A -> M."""
    return np.ascontiguousarray(np.transpose(m.right, (1, 2, 0)).reshape(m.dim, -1))


# -- sums, submodules, quotients --------------------------------------------------


def direct_sum(*mods: Bimodule, name: str = "") -> Bimodule:
    """Block-diagonal direct sum (all summands over the same algebras)."""
    F = mods[0].field
    dim = sum(m.dim for m in mods)

    def blocks(side):
        alg = getattr(mods[0], f"{side}_algebra")
        if alg is None:
            return None, None
        out = F.zeros((alg.dim, dim, dim))
        off = 0
        for m in mods:
            out[:, off:off + m.dim, off:off + m.dim] = getattr(m, side)
            off += m.dim
        return alg, out

    la, lact = blocks("left")
    ra, ract = blocks("right")
    return Bimodule(F, dim, la, ra, lact, ract, name or "+".join(m.name for m in mods))


def free_module(m: Bimodule, n: int) -> Bimodule:
    return direct_sum(*([m] * n), name=f"{m.name}^{n}") if n else Bimodule(
        m.field, 0, m.left_algebra, m.right_algebra,
        None if m.left is None else m.field.zeros((m.left_algebra.dim, 0, 0)),
        None if m.right is None else m.field.zeros((m.right_algebra.dim, 0, 0)), "0")


def submodule_span(m: Bimodule, vectors) -> np.ndarray:
    """Basis (columns) of the sub-bimodule generated by ``vectors``."""
    F = m.field
    acts = [np.stack([F.eye(m.dim)])]
    if m.left is not None:
        acts.append(m.left)
    if m.right is not None:
        acts.append(m.right)
    span = stack_columns(F, [F.array(v) for v in vectors], m.dim)
    while True:
        cols = [span] + [F.dot(X, span) for group in acts for X in group]
        new = _column_space(F, np.concatenate(cols, axis=1))
        if new.shape[1] == span.shape[1]:
            return new
        span = new


def quotient_module(m: Bimodule, sub: np.ndarray, name: str = "") -> tuple[Bimodule, np.ndarray]:
    """M / S for a sub-bimodule S given by basis columns.  Returns the quotient
    and the projection M -> M/S (coordinates on non-pivot positions)."""
    F = m.field
    if sub.shape[1]:
        r, piv = rref_array(F, sub.T.copy())
    else:
        r, piv = F.zeros((0, m.dim)), []
    pset = set(piv)
    free = [c for c in range(m.dim) if c not in pset]
    proj = F.zeros((len(free), m.dim))
    for t, c in enumerate(free):
        proj[t, c] = F.one
    for t, pc in enumerate(piv):
        proj[:, pc] = F.reduce(-r[t, free]) if F.is_finite else -r[t, free]
    sec = F.zeros((m.dim, len(free)))
    for t, c in enumerate(free):
        sec[c, t] = F.one

    def act(stack):
        if stack is None:
            return None
        out = np.stack([F.dot(proj, F.dot(X, sec)) for X in stack]) if len(stack) else F.zeros((0, len(free), len(free)))
        for X in stack:
            if sub.shape[1] and np.any(F.dot(proj, F.dot(X, sub)) != 0):
                raise MalformedInputError("subspace is not a submodule")
        return out

    q = Bimodule(F, len(free), m.left_algebra, m.right_algebra, act(m.left), act(m.right), name or f"{m.name}/S")
    return q, proj
