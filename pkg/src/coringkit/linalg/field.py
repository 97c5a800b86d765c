"""Ground fields: the rationals and prime fields.

Scalars are plain Python objects: ``fractions.Fraction`` over Q and ``int``
residues in ``[0, p)`` over F_p.  Arrays are numpy arrays with ``dtype=object``
(Q) or ``int64`` (F_p), always kept reduced.
"""
from __future__ import annotations

import itertools
import math
import operator
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from ..errors import MalformedInputError

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")

# above this bound int64 products may overflow during a dot product
_INT64_SAFE = 2**62


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either the rationals (``kind="Q"``) or F_p (``kind="Fp"``)."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "Q":
            if self.p is not None:
                raise MalformedInputError("the rational field takes no modulus")
        elif self.kind == "Fp":
            if self.p is None or not is_prime(int(self.p)):
                raise MalformedInputError(f"modulus {self.p!r} is not prime")
            if self.p >= 2**31:
                raise MalformedInputError("prime moduli must be below 2**31")
        else:
            raise MalformedInputError(f"unknown field kind {self.kind!r}")

    @property
    def is_finite(self) -> bool:
        return self.kind == "Fp"

    @property
    def dtype(self):
        return np.int64 if self.is_finite else object

    def __str__(self):
        return "Q" if self.kind == "Q" else f"F_{self.p}"

    # -- scalars -----------------------------------------------------------

    def __call__(self, x) -> Fraction | int:
        """Coerce ``x`` (int, Fraction, numpy int or "num/den" string)."""
        if isinstance(x, str):
            return self.parse(x)
        if self.is_finite:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise MalformedInputError(f"{x} has no image in {self}")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        if isinstance(x, (float, np.floating)):
            raise MalformedInputError("floating point scalars are not accepted")
        return Fraction(x)

    def parse(self, token: str) -> Fraction | int:
        m = _RATIONAL_RE.match(token)
        if not m:
            raise MalformedInputError(f"malformed scalar {token!r}")
        num, den = int(m.group(1)), int(m.group(2) or 1)
        if den == 0:
            raise MalformedInputError(f"zero denominator in scalar {token!r}")
        return self(Fraction(num, den))

    @property
    def zero(self):
        return 0 if self.is_finite else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_finite else Fraction(1)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.is_finite:
            return pow(int(x), -1, self.p)
        return 1 / Fraction(x)

    def elements(self) -> Iterator[int]:
        if not self.is_finite:
            raise ValueError("the rationals cannot be enumerated")
        return iter(range(self.p))

    def vectors(self, n: int) -> Iterator[np.ndarray]:
        """All vectors of F_p^n in lexicographic order."""
        for t in itertools.product(range(self.p), repeat=n):
            yield np.array(t, dtype=np.int64)

    def format(self, x) -> int | str:
        """JSON-friendly form of a scalar."""
        if self.is_finite:
            return int(x)
        x = Fraction(x)
        return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def random(self, shape, rng: np.random.Generator, box: int = 3) -> np.ndarray:
        """Uniform residues over F_p, integers in [-box, box] over Q."""
        if self.is_finite:
            return rng.integers(0, self.p, size=shape, dtype=np.int64)
        vals = rng.integers(-box, box + 1, size=shape)
        return self.array(vals.tolist() if np.ndim(vals) else int(vals))

    # -- arrays ------------------------------------------------------------

    def array(self, data) -> np.ndarray:
        """Exact array from nested lists / arrays, reduced into the field."""
        if isinstance(data, np.ndarray) and data.dtype == self.dtype:
            return self.reduce(data.copy())
        if self.is_finite:
            flat = np.asarray(data, dtype=object)
            out = np.empty(flat.shape, dtype=np.int64)
            for idx, v in np.ndenumerate(flat):
                out[idx] = self(v)
            return out
        flat = np.asarray(data, dtype=object)
        out = np.empty(flat.shape, dtype=object)
        for idx, v in np.ndenumerate(flat):
            out[idx] = self(v)
        return out

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        if self.is_finite:
            return np.mod(arr, self.p).astype(np.int64, copy=False)
        return arr

    def zeros(self, shape) -> np.ndarray:
        if self.is_finite:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one
        return out

    def unit_vector(self, n: int, i: int) -> np.ndarray:
        v = self.zeros(n)
        v[i] = self.one
        return v

    def dot(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if not self.is_finite:
            return _rational_dot(a, b)
        inner = a.shape[-1] if a.ndim else 1
        if (self.p - 1) ** 2 * max(inner, 1) < _INT64_SAFE:
            return np.mod(a @ b, self.p)
        prod = a.astype(object) @ b.astype(object)
        return np.mod(prod, self.p).astype(np.int64)

    def kron(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if not self.is_finite:
            return _rational_kron(a, b)
        return self.reduce(np.kron(a, b))

    def scale(self, x, arr: np.ndarray) -> np.ndarray:
        return self.reduce(arr * x)

    def add(self, a, b):
        if not self.is_finite and isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
            return _rational_linear(a, b, 1)
        return self.reduce(a + b)

    def sub(self, a, b):
        if not self.is_finite and isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
            return _rational_linear(a, b, -1)
        return self.reduce(a - b)

    def combo(self, coeffs, arrays) -> np.ndarray:
        """sum_i coeffs[i] * arrays[i] along the first axis."""
        arrays = np.asarray(arrays) if not isinstance(arrays, np.ndarray) else arrays
        coeffs = np.asarray(coeffs, dtype=self.dtype)
        if arrays.shape[0] == 0:
            return self.zeros(arrays.shape[1:])
        return self.tensordot(coeffs, arrays, (0, 0))

    def tensordot(self, a: np.ndarray, b: np.ndarray, axes) -> np.ndarray:
        if self.is_finite:
            return self.reduce(np.tensordot(a, b, axes=axes))
        return _rational_bilinear(lambda x, y: np.tensordot(x, y, axes=axes), a, b)

    def einsum(self, spec: str, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.is_finite:
            return self.reduce(np.einsum(spec, a, b))
        return _rational_bilinear(lambda x, y: np.einsum(spec, x, y), a, b)

    def is_zero(self, arr) -> bool:
        return not np.any(np.asarray(arr) != 0)


_num = np.frompyfunc(lambda x: x.numerator, 1, 1)
_den = np.frompyfunc(lambda x: x.denominator, 1, 1)
# slot access skips the Fraction property wrappers; used when every entry is a Fraction
_num_fast = np.frompyfunc(operator.attrgetter("_numerator"), 1, 1)
_den_fast = np.frompyfunc(operator.attrgetter("_denominator"), 1, 1)

# shared Fraction objects for small integers (Fractions are immutable)
_SMALL = 1 << 12
_SMALL_TABLE = np.array([Fraction(i) for i in range(-_SMALL, _SMALL + 1)], dtype=object)


def _parts(a: np.ndarray):
    try:
        return _num_fast(a), _den_fast(a)
    except AttributeError:
        return _num(a), _den(a)


def _integral(a: np.ndarray) -> tuple[np.ndarray, int]:
    """(N, d) with a = N / d; N is int64 when it fits, else Python ints."""
    if not a.size:
        return np.zeros(a.shape, dtype=np.int64), 1
    nums, dens = _parts(a)
    d = math.lcm(*set(dens.ravel().tolist()))
    if d != 1:
        nums = nums * (d // dens)
    try:
        out = nums.astype(np.int64)
    except OverflowError:
        return nums, d
    if out.size and np.abs(out).max() >= 2**62:
        return nums, d
    return out, d


def _small(n: np.ndarray, bound: int) -> bool:
    return n.dtype == np.int64 and (not n.size or int(np.abs(n).max()) < bound)


def _rational_dot(a: np.ndarray, b: np.ndarray):
    """a @ b over Q, computed on integer numerators.

    Fraction arithmetic normalises after every product; clearing
    denominators first and multiplying integers (int64 when the bound
    allows) is far cheaper on the mostly 0/1 structure matrices.
    """
    if a.size == 0 or b.size == 0:
        shape = np.shape(np.zeros(a.shape, dtype=np.int8) @ np.zeros(b.shape, dtype=np.int8))
        if not shape:
            return Fraction(0)
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    na, da = _integral(a)
    nb, db = _integral(b)
    if na.dtype == nb.dtype == np.int64 and \
            int(np.abs(na).max()) * int(np.abs(nb).max()) * a.shape[-1] < _INT64_SAFE:
        prod = na @ nb
    else:
        prod = na.astype(object) @ nb.astype(object)
    d = da * db
    if np.ndim(prod) == 0:
        return Fraction(int(prod), d)
    return _to_fraction(prod, d)


def _rational_bilinear(op, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """op(a, b) over Q for an op that is bilinear with integer coefficients."""
    if a.size == 0 or b.size == 0:
        shape = np.shape(op(np.zeros(a.shape, dtype=np.int64), np.zeros(b.shape, dtype=np.int64)))
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    na, da = _integral(a)
    nb, db = _integral(b)
    if na.dtype == nb.dtype == np.int64 and \
            int(np.abs(na).max()) * int(np.abs(nb).max()) * max(a.size, b.size) < _INT64_SAFE:
        out = op(na, nb)
    else:
        out = op(na.astype(object), nb.astype(object))
    return _to_fraction(np.asarray(out), da * db)


def _rational_kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size == 0 or b.size == 0:
        return np.kron(a, b)
    na, da = _integral(a)
    nb, db = _integral(b)
    if _small(na, 2**31) and _small(nb, 2**31):
        prod = np.kron(na, nb)
    else:
        prod = np.kron(na.astype(object), nb.astype(object))
    return _to_fraction(prod, da * db)


def _rational_linear(a: np.ndarray, b: np.ndarray, sign: int) -> np.ndarray:
    """a + sign * b over Q on integer numerators."""
    if a.dtype != object or b.dtype != object or a.size == 0 or b.size == 0:
        return a + sign * b
    na, da = _integral(a)
    nb, db = _integral(b)
    d = math.lcm(da, db)
    if _small(na, 2**31) and _small(nb, 2**31) and d < 2**30:
        out = na * (d // da) + sign * (nb * (d // db))
    else:
        out = na.astype(object) * (d // da) + sign * (nb.astype(object) * (d // db))
    return _to_fraction(out, d)


def _to_fraction(prod: np.ndarray, d: int) -> np.ndarray:
    if d == 1 and prod.dtype == np.int64 and (not prod.size or int(np.abs(prod).max()) <= _SMALL):
        return _SMALL_TABLE[prod + _SMALL]
    if d == 1:
        out = np.frompyfunc(lambda x: Fraction(int(x)), 1, 1)(prod)
    else:
        out = np.frompyfunc(lambda x: Fraction(int(x), d), 1, 1)(prod)
    return np.asarray(out, dtype=object)


QQ = FieldSpec("Q")


def GF(p: int) -> FieldSpec:
    return FieldSpec("Fp", int(p))
