"""Coalgebras over the ground field, their comodules and cotensor products.

``comult[i, j, k]`` is the coefficient of ``e_j (x) e_k`` in ``Delta(e_i)``.
Coactions are k-linear maps: a right coaction is a ``(dim*C.dim) x dim``
matrix into ``M (x) C``, a left one a ``(C.dim*dim) x dim`` matrix into
``C (x) M``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import Algebra, _mismatch
from .errors import MalformedInputError, PreconditionError
from .linalg import FieldSpec, kernel_array, left_inverse, rank_array, stack_columns
from .report import ValidationReport


@dataclass(frozen=True, eq=False)
class Coalgebra:
    field: FieldSpec
    comult: np.ndarray
    counit: np.ndarray
    name: str = ""

    def __post_init__(self):
        d = self.counit.shape[0] if np.ndim(self.counit) == 1 else -1
        if d < 0 or self.comult.shape != (d, d, d):
            raise MalformedInputError(
                f"coalgebra constants of shape {self.comult.shape} do not match counit {np.shape(self.counit)}"
            )

    @classmethod
    def from_data(cls, field, comult, counit, name=""):
        return cls(field, field.array(comult), field.array(counit), name)

    @property
    def dim(self) -> int:
        return self.counit.shape[0]

    @cached_property
    def delta(self) -> np.ndarray:
        """Delta as a (dim*dim) x dim matrix."""
        return np.ascontiguousarray(self.comult.reshape(self.dim, -1).T)

    @cached_property
    def eps(self) -> np.ndarray:
        """epsilon as a 1 x dim matrix."""
        return self.counit.reshape(1, -1).copy()

    def __repr__(self):
        return f"Coalgebra({self.name or '?'}, dim={self.dim}, over {self.field})"


def grouplike_coalgebra(F: FieldSpec, n: int, name: str = "") -> Coalgebra:
    """k-span of n grouplike elements."""
    comult = F.zeros((n, n, n))
    for i in range(n):
        comult[i, i, i] = F.one
    return Coalgebra(F, comult, F.array([1] * n), name or f"kG{n}")


def trivial_coalgebra(F: FieldSpec) -> Coalgebra:
    return grouplike_coalgebra(F, 1, "k")


def dual_coalgebra(A: Algebra, name: str = "") -> Coalgebra:
    """The coalgebra A* on the dual basis: Delta(f_k) = sum mult[i,j,k] f_i (x) f_j."""
    comult = np.ascontiguousarray(np.transpose(A.mult, (2, 0, 1)))
    counit = A.unit.copy()
    return Coalgebra(A.field, comult, counit, name or f"{A.name}*")


def dual_algebra(C: Coalgebra, name: str = "") -> Algebra:
    """Convolution algebra C* on the dual basis: (f_i f_j)(e_k) = comult[k, i, j]."""
    mult = np.ascontiguousarray(np.transpose(C.comult, (1, 2, 0)))
    return Algebra(C.field, mult, C.counit.copy(), name or f"{C.name}*")


def validate_coalgebra(c: Coalgebra) -> ValidationReport:
    F, d = c.field, c.dim
    rep = ValidationReport(f"coalgebra {c.name}".strip())
    D = c.delta
    eye = F.eye(d)
    lhs = F.dot(F.kron(D, eye), D)
    rhs = F.dot(F.kron(eye, D), D)
    rep.check("coassociativity", _mismatch(lhs.T, rhs.T, 1))
    left = F.dot(F.kron(c.eps, eye), D)
    right = F.dot(F.kron(eye, c.eps), D)
    rep.check("left_counit", _mismatch(left.T, eye.T, 1))
    rep.check("right_counit", _mismatch(right.T, eye.T, 1))
    return rep


@dataclass(frozen=True, eq=False)
class CoalgebraMorphism:
    source: Coalgebra
    target: Coalgebra
    matrix: np.ndarray  # target.dim x source.dim

    def validate(self) -> ValidationReport:
        F = self.source.field
        rep = ValidationReport("coalgebra morphism")
        if self.matrix.shape != (self.target.dim, self.source.dim):
            rep.fail("shape", f"matrix shape {self.matrix.shape}")
            return rep
        P = self.matrix
        rep.check("counit_preserving", _mismatch(F.dot(self.target.eps, P).T, self.source.eps.T, 1))
        lhs = F.dot(self.target.delta, P)
        rhs = F.dot(F.kron(P, P), self.source.delta)
        rep.check("comultiplicative", _mismatch(lhs.T, rhs.T, 1))
        return rep

    @property
    def is_surjective(self) -> bool:
        return rank_array(self.source.field, self.matrix) == self.target.dim


@dataclass(frozen=True, eq=False)
class CoalgebraComodule:
    """A left, right or bi-comodule over a coalgebra."""

    coalgebra: Coalgebra
    dim: int
    right: np.ndarray | None = None  # M -> M (x) C
    left: np.ndarray | None = None  # M -> C (x) M
    name: str = ""

    def __post_init__(self):
        c = self.coalgebra.dim
        if self.right is not None and self.right.shape != (self.dim * c, self.dim):
            raise MalformedInputError(f"right coaction shape {self.right.shape}")
        if self.left is not None and self.left.shape != (c * self.dim, self.dim):
            raise MalformedInputError(f"left coaction shape {self.left.shape}")

    @property
    def field(self) -> FieldSpec:
        return self.coalgebra.field

    @property
    def side(self) -> str:
        if self.left is not None and self.right is not None:
            return "Bi"
        return "Left" if self.left is not None else "Right"


def regular_comodule(C: Coalgebra) -> CoalgebraComodule:
    """C as a (C,C)-bicomodule via Delta on both sides."""
    return CoalgebraComodule(C, C.dim, C.delta, C.delta, C.name)


def validate_comodule(m: CoalgebraComodule) -> ValidationReport:
    F = m.field
    C = m.coalgebra
    rep = ValidationReport(f"comodule {m.name}".strip())
    eye = F.eye(m.dim)
    eye_c = F.eye(C.dim)
    if m.right is not None:
        r = m.right
        lhs = F.dot(F.kron(r, eye_c), r)
        rhs = F.dot(F.kron(eye, C.delta), r)
        rep.check("right_coassociativity", _mismatch(lhs.T, rhs.T, 1))
        rep.check("right_counit", _mismatch(F.dot(F.kron(eye, C.eps), r).T, eye.T, 1))
    if m.left is not None:
        l = m.left
        lhs = F.dot(F.kron(eye_c, l), l)
        rhs = F.dot(F.kron(C.delta, eye), l)
        rep.check("left_coassociativity", _mismatch(lhs.T, rhs.T, 1))
        rep.check("left_counit", _mismatch(F.dot(F.kron(C.eps, eye), l).T, eye.T, 1))
    if m.left is not None and m.right is not None:
        lhs = F.dot(F.kron(m.left, eye_c), m.right)
        rhs = F.dot(F.kron(eye_c, m.right), m.left)
        rep.check("bicomodule_compatibility", _mismatch(lhs.T, rhs.T, 1))
    return rep


@dataclass(frozen=True, eq=False)
class CotensorSpace:
    """M box_C N as a subspace of M (x) N, stored with its inclusion."""

    left: CoalgebraComodule
    right: CoalgebraComodule
    inclusion: np.ndarray  # (m*n) x dim

    @property
    def dim(self) -> int:
        return self.inclusion.shape[1]

    @property
    def field(self) -> FieldSpec:
        return self.left.field

    @cached_property
    def retraction(self) -> np.ndarray:
        return left_inverse(self.field, self.inclusion)

    def contains(self, v: np.ndarray) -> bool:
        F = self.field
        v = v.reshape(v.shape[0], -1)
        return not np.any(F.dot(self.inclusion, F.dot(self.retraction, v)) != v)

    def corestrict(self, f: np.ndarray) -> np.ndarray:
        """Coordinates of a map landing in the cotensor (membership checked)."""
        F = self.field
        coords = F.dot(self.retraction, f)
        if np.any(F.dot(self.inclusion, coords) != f):
            raise PreconditionError("map does not corestrict to the cotensor product", axiom="cotensor_membership")
        return coords

    @cached_property
    def comodule(self) -> CoalgebraComodule:
        """Induced coactions: left from M, right from N (where present)."""
        F = self.field
        C = self.left.coalgebra
        dm, dn = self.left.dim, self.right.dim
        right = left = None
        if self.right.right is not None:
            big = F.dot(F.kron(F.eye(dm), self.right.right), self.inclusion)  # into M N C
            right = _corestrict_first(F, self, big, C.dim)
        if self.left.left is not None:
            big = F.dot(F.kron(self.left.left, F.eye(dn)), self.inclusion)  # into C M N
            left = F.dot(F.kron(F.eye(C.dim), self.retraction), big)
            if np.any(F.dot(F.kron(F.eye(C.dim), self.inclusion), left) != big):
                raise PreconditionError("left coaction leaves the cotensor product", axiom="cotensor_membership")
        return CoalgebraComodule(C, self.dim, right, left, f"{self.left.name}[]{self.right.name}")


def _corestrict_first(F, cot: CotensorSpace, big: np.ndarray, c: int) -> np.ndarray:
    out = F.dot(F.kron(cot.retraction, F.eye(c)), big)
    if np.any(F.dot(F.kron(cot.inclusion, F.eye(c)), out) != big):
        raise PreconditionError("right coaction leaves the cotensor product", axiom="cotensor_membership")
    return out


def cotensor(m: CoalgebraComodule, n: CoalgebraComodule) -> CotensorSpace:
    """Kernel of rho^M (x) N - M (x) rho^N on M (x) N."""
    if m.right is None or n.left is None:
        raise MalformedInputError("cotensor needs a right comodule and a left comodule")
    C = m.coalgebra
    if C is not n.coalgebra and (
        C.dim != n.coalgebra.dim or np.any(C.comult != n.coalgebra.comult) or np.any(C.counit != n.coalgebra.counit)
    ):
        raise MalformedInputError("cotensor factors are comodules over different coalgebras")
    F = m.field
    full = m.dim * n.dim
    if full == 0:
        return CotensorSpace(m, n, F.zeros((0, 0)))
    eq = F.sub(F.kron(m.right, F.eye(n.dim)), F.kron(F.eye(m.dim), n.left))
    return CotensorSpace(m, n, stack_columns(F, kernel_array(F, eq), full))


def comodule_via_morphism(m: CoalgebraComodule, pi: CoalgebraMorphism) -> CoalgebraComodule:
    """Push the coactions of m forward along a coalgebra morphism."""
    rep = pi.validate()
    if not rep.ok:
        raise PreconditionError("not a coalgebra morphism: " + ", ".join(rep.axioms_violated),
                                axiom=rep.axioms_violated[0], report=rep)
    F = m.field
    eye = F.eye(m.dim)
    right = F.dot(F.kron(eye, pi.matrix), m.right) if m.right is not None else None
    left = F.dot(F.kron(pi.matrix, eye), m.left) if m.left is not None else None
    out = CoalgebraComodule(pi.target, m.dim, right, left, m.name)
    validate_comodule(out).raise_if_invalid()
    return out
