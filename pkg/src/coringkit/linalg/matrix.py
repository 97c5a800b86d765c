"""Dense exact matrices and the elimination routines built on them."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..errors import MalformedInputError
from . import _kernels
from .field import FieldSpec


class ExactMatrix:
    """Immutable dense matrix over a :class:`FieldSpec`."""

    __slots__ = ("field", "a")

    def __init__(self, field: FieldSpec, data, *, trusted: bool = False):
        arr = data if trusted else field.array(data)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2:
            raise MalformedInputError(f"matrix data must be 2-dimensional, got shape {arr.shape}")
        arr.flags.writeable = False
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", arr)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def zeros(cls, field, rows, cols):
        return cls(field, field.zeros((rows, cols)), trusted=True)

    @classmethod
    def identity(cls, field, n):
        return cls(field, field.eye(n), trusted=True)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self):
        return self.a.shape

    @property
    def T(self) -> "ExactMatrix":
        return ExactMatrix(self.field, self.a.T.copy(), trusted=True)

    def _check(self, other: "ExactMatrix"):
        if not isinstance(other, ExactMatrix):
            raise TypeError(f"expected ExactMatrix, got {type(other).__name__}")
        if other.field != self.field:
            raise MalformedInputError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other):
        self._check(other)
        if self.cols != other.rows:
            raise MalformedInputError(f"cannot multiply {self.shape} by {other.shape}")
        return ExactMatrix(self.field, self.field.dot(self.a, other.a), trusted=True)

    def __add__(self, other):
        self._check(other)
        return ExactMatrix(self.field, self.field.add(self.a, other.a), trusted=True)

    def __sub__(self, other):
        self._check(other)
        return ExactMatrix(self.field, self.field.sub(self.a, other.a), trusted=True)

    def __neg__(self):
        return ExactMatrix(self.field, self.field.reduce(-self.a), trusted=True)

    def __mul__(self, scalar):
        return ExactMatrix(self.field, self.field.scale(self.field(scalar), self.a), trusted=True)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and not np.any(self.a != other.a)

    def __hash__(self):
        return hash((self.field, self.shape, tuple(self.field.format(x) for x in self.a.flat)))

    def __repr__(self):
        body = [[self.field.format(x) for x in row] for row in self.a]
        return f"ExactMatrix({self.field}, {body})"

    def is_zero(self) -> bool:
        return self.field.is_zero(self.a)

    def tolist(self):
        return [[self.field.format(x) for x in row] for row in self.a]

    # elimination shortcuts
    def rref(self):
        return rref(self)

    def rank(self) -> int:
        return rref(self)[2]

    def kernel(self):
        return kernel_basis(self)

    def inverse(self) -> "ExactMatrix | None":
        return inverse(self)


def as_matrix(field: FieldSpec, m) -> ExactMatrix:
    return m if isinstance(m, ExactMatrix) else ExactMatrix(field, m)


# -- Gauss-Jordan over Q -----------------------------------------------------


def _rref_rational(arr: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan on sparse rows (dicts column -> Fraction).

    Structure matrices are mostly zero, so only nonzero entries are touched.
    """
    rows, cols = arr.shape
    a = []
    for row in arr:
        a.append({j: Fraction(x) for j, x in enumerate(row) if x != 0})
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = next((i for i in range(r, rows) if c in a[i]), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        inv = 1 / a[r][c]
        prow = {j: x * inv for j, x in a[r].items()} if inv != 1 else a[r]
        a[r] = prow
        items = list(prow.items())
        for i in range(rows):
            if i == r:
                continue
            row = a[i]
            f = row.get(c)
            if f is None:
                continue
            for j, v in items:
                x = row.get(j, 0) - f * v
                if x:
                    row[j] = x
                else:
                    del row[j]
        pivots.append(c)
        r += 1
    out = np.empty((rows, cols), dtype=object)
    out.fill(Fraction(0))
    for i, row in enumerate(a):
        for j, x in row.items():
            out[i, j] = x
    return out, pivots


def rref_array(field: FieldSpec, arr: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """RREF on a raw array. Pivots are normalized to 1, leftmost first."""
    if arr.ndim != 2:
        raise MalformedInputError("rref expects a 2-dimensional array")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        return field.zeros(arr.shape), []
    if field.is_finite:
        r, piv = _kernels.rref_mod_p(arr, field.p)
        return r, [int(x) for x in piv]
    return _rref_rational(arr)


def rref(m: ExactMatrix) -> tuple[ExactMatrix, list[int], int]:
    """Reduced row echelon form, pivot columns and rank."""
    if not isinstance(m, ExactMatrix):
        raise MalformedInputError("rref expects an ExactMatrix")
    r, piv = rref_array(m.field, m.a)
    return ExactMatrix(m.field, r, trusted=True), piv, len(piv)


def rank_array(field: FieldSpec, arr: np.ndarray) -> int:
    return len(rref_array(field, arr)[1])


def _kernel_from_rref(field, r: np.ndarray, piv: list[int], cols: int) -> list[np.ndarray]:
    pset = set(piv)
    basis = []
    for f in range(cols):
        if f in pset:
            continue
        v = field.zeros(cols)
        v[f] = field.one
        for t, pc in enumerate(piv):
            v[pc] = field.reduce(-r[t, f]) if field.is_finite else -r[t, f]
        basis.append(v)
    return basis


def kernel_array(field: FieldSpec, arr: np.ndarray) -> list[np.ndarray]:
    """Basis of the null space of ``arr`` in free-column order."""
    cols = arr.shape[1]
    if arr.shape[0] == 0:
        return [field.unit_vector(cols, i) for i in range(cols)]
    r, piv = rref_array(field, arr)
    return _kernel_from_rref(field, r, piv, cols)


def kernel_basis(m: ExactMatrix) -> list[np.ndarray]:
    return kernel_array(m.field, m.a)


def solve_array(field: FieldSpec, arr: np.ndarray, b: np.ndarray):
    """Solve arr @ x = b. Returns (particular, kernel basis) or None."""
    b = np.asarray(b)
    if b.ndim != 1 or b.shape[0] != arr.shape[0]:
        raise MalformedInputError(f"right-hand side of length {b.shape} does not match {arr.shape[0]} rows")
    cols = arr.shape[1]
    aug = np.concatenate([arr, b.reshape(-1, 1).astype(arr.dtype)], axis=1)
    if arr.shape[0] == 0:
        return field.zeros(cols), [field.unit_vector(cols, i) for i in range(cols)]
    r, piv = rref_array(field, aug)
    if piv and piv[-1] == cols:
        return None
    x = field.zeros(cols)
    for t, pc in enumerate(piv):
        x[pc] = r[t, cols]
    return x, _kernel_from_rref(field, r[:, :cols], piv, cols)


def solve_affine(m: ExactMatrix, b) -> tuple[np.ndarray, list[np.ndarray]] | None:
    """Canonical particular solution (free variables zero) and kernel basis."""
    b = m.field.array(b) if not isinstance(b, np.ndarray) else b
    return solve_array(m.field, m.a, b)


def rank_witness(field: FieldSpec, arr: np.ndarray, b: np.ndarray) -> dict:
    """Ranks of the homogeneous and augmented systems (infeasible iff they differ)."""
    aug = np.concatenate([arr, np.asarray(b).reshape(-1, 1).astype(arr.dtype)], axis=1)
    return {"rank": rank_array(field, arr), "augmented_rank": rank_array(field, aug)}


def inverse_array(field: FieldSpec, arr: np.ndarray) -> np.ndarray | None:
    n = arr.shape[0]
    if arr.shape != (n, n):
        return None
    if n == 0:
        return field.zeros((0, 0))
    aug = np.concatenate([arr, field.eye(n)], axis=1)
    r, piv = rref_array(field, aug)
    if len(piv) < n or piv[n - 1] != n - 1:
        return None
    return r[:, n:].copy()


def inverse(m: ExactMatrix) -> ExactMatrix | None:
    inv = inverse_array(m.field, m.a)
    return None if inv is None else ExactMatrix(m.field, inv, trusted=True)


def column_basis(field: FieldSpec, arr: np.ndarray) -> np.ndarray:
    """Columns of ``arr`` forming a basis of its column space (pivot columns)."""
    _, piv = rref_array(field, arr)
    return arr[:, piv].copy()


def row_space_basis(field: FieldSpec, arr: np.ndarray) -> np.ndarray:
    """Nonzero rows of the RREF of ``arr`` (a canonical basis of its row space)."""
    r, piv = rref_array(field, arr)
    return r[: len(piv)].copy()


def left_inverse(field: FieldSpec, basis: np.ndarray) -> np.ndarray:
    """L with L @ basis = I for a full-column-rank ``basis`` (n x r)."""
    n, r = basis.shape
    if r == 0:
        return field.zeros((0, n))
    _, rows = rref_array(field, basis.T.copy())
    if len(rows) != r:
        raise MalformedInputError("left_inverse needs linearly independent columns")
    sub_inv = inverse_array(field, basis[rows, :])
    out = field.zeros((r, n))
    out[:, rows] = sub_inv
    return out


def stack_columns(field: FieldSpec, vectors, n: int) -> np.ndarray:
    if len(vectors) == 0:
        return field.zeros((n, 0))
    return np.stack(list(vectors), axis=1)
