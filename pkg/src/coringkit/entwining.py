"""Entwining structures psi: C (x) A -> A (x) C and their corings.

psi is a ``(A.dim*C.dim) x (C.dim*A.dim)`` matrix.  Weak entwinings replace
the two unit/counit identities by the weaker pair; the associated coring
then lives on the image of the projection p(a (x) c) = a psi(c (x) 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .algebra import (
    Algebra,
    Bimodule,
    _mismatch,
    balanced_tensor,
    regular_bimodule,
    right_action_map,
    validate_algebra,
    validate_bimodule,
)
from .coalgebra import Coalgebra, validate_coalgebra
from .coring import (
    Coring,
    CoringComodule,
    coring_from_precoring,
    restrict_to_image,
    validate_comodule,
    validate_coring,
)
from .errors import InternalConsistencyError, MalformedInputError, PreconditionError
from .linalg import FieldSpec, column_basis, inverse_array, kernel_array, left_inverse, rank_array, stack_columns
from .report import ValidationReport


@dataclass(frozen=True, eq=False)
class Entwining:
    algebra: Algebra
    coalgebra: Coalgebra
    psi: np.ndarray
    name: str = ""

    def __post_init__(self):
        a, c = self.algebra.dim, self.coalgebra.dim
        if self.psi.shape != (a * c, c * a):
            raise MalformedInputError(f"psi has shape {self.psi.shape}, expected {(a * c, c * a)}")
        if self.algebra.field != self.coalgebra.field:
            raise MalformedInputError("algebra and coalgebra live over different fields")

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def apply(self, c: np.ndarray, a: np.ndarray) -> np.ndarray:
        return self.field.dot(self.psi, self.field.kron(c, a))

    @cached_property
    def psi_unit(self) -> np.ndarray:
        """c -> psi(c (x) 1) as an (A C) x C matrix."""
        F = self.field
        return F.dot(self.psi, F.kron(F.eye(self.coalgebra.dim), self.algebra.unit.reshape(-1, 1)))

    @cached_property
    def projection(self) -> np.ndarray:
        """p = (mu (x) C)(A (x) psi)(A (x) C (x) 1)."""
        F = self.field
        A, C = self.algebra, self.coalgebra
        return F.dot(F.kron(A.mult_matrix, F.eye(C.dim)), F.kron(F.eye(A.dim), self.psi_unit))


WeakEntwining = Entwining


def _structure_checks(e: Entwining, rep: ValidationReport) -> None:
    F = e.field
    A, C = e.algebra, e.coalgebra
    a, c = A.dim, C.dim
    Ia, Ic = F.eye(a), F.eye(c)
    psi = e.psi
    # psi (C (x) mu) = (mu (x) C)(A (x) psi)(psi (x) A)
    lhs = F.dot(psi, F.kron(Ic, A.mult_matrix))
    rhs = F.dot(F.kron(A.mult_matrix, Ic), F.dot(F.kron(Ia, psi), F.kron(psi, Ia)))
    rep.check("entwining_product", _triple(_mismatch(lhs.T, rhs.T, 1), (c, a, a)))
    # (A (x) Delta) psi = (psi (x) C)(C (x) psi)(Delta (x) A)
    lhs = F.dot(F.kron(Ia, C.delta), psi)
    rhs = F.dot(F.kron(psi, Ic), F.dot(F.kron(Ic, psi), F.kron(C.delta, Ia)))
    rep.check("entwining_coproduct", _triple(_mismatch(lhs.T, rhs.T, 1), (c, a)))


def _triple(fails, dims):
    out = []
    for (idx,) in fails:
        parts = []
        for d in reversed(dims):
            parts.append(idx % d)
            idx //= d
        out.append(tuple(reversed(parts)))
    return out


def validate_entwining(e: Entwining) -> ValidationReport:
    F = e.field
    A, C = e.algebra, e.coalgebra
    rep = ValidationReport(f"entwining {e.name}".strip())
    rep.merge(validate_algebra(A), "algebra.")
    rep.merge(validate_coalgebra(C), "coalgebra.")
    _structure_checks(e, rep)
    unit_rhs = F.kron(A.unit.reshape(-1, 1), F.eye(C.dim))
    rep.check("entwining_unit", _mismatch(e.psi_unit.T, unit_rhs.T, 1))
    lhs = F.dot(F.kron(F.eye(A.dim), C.eps), e.psi)
    rhs = F.kron(C.eps, F.eye(A.dim))
    rep.check("entwining_counit", _triple(_mismatch(lhs.T, rhs.T, 1), (C.dim, A.dim)))
    return rep


def validate_weak_entwining(e: Entwining) -> ValidationReport:
    F = e.field
    A, C = e.algebra, e.coalgebra
    Ia = F.eye(A.dim)
    rep = ValidationReport(f"weak entwining {e.name}".strip())
    rep.merge(validate_algebra(A), "algebra.")
    rep.merge(validate_coalgebra(C), "coalgebra.")
    _structure_checks(e, rep)
    # a_alpha eps(c^alpha) = 1_alpha a eps(c^alpha)
    eps_psi = F.dot(F.kron(Ia, C.eps), e.psi)  # C A -> A
    lhs = eps_psi
    rhs = F.dot(A.mult_matrix, F.kron(F.dot(F.kron(Ia, C.eps), e.psi_unit), Ia))
    rep.check("weak_counit", _triple(_mismatch(lhs.T, rhs.T, 1), (C.dim, A.dim)))
    # 1_alpha eps(c_(1)^alpha) (x) c_(2) = 1_alpha (x) c^alpha
    Ic = F.eye(C.dim)
    lhs = F.dot(F.kron(F.kron(Ia, C.eps), Ic), F.dot(F.kron(e.psi_unit, Ic), C.delta))
    rep.check("weak_unit", _mismatch(lhs.T, e.psi_unit.T, 1))
    return rep


def flip_entwining(A: Algebra, C: Coalgebra) -> Entwining:
    """psi(c (x) a) = a (x) c."""
    F = A.field
    a, c = A.dim, C.dim
    psi = F.zeros((a * c, c * a))
    for i in range(c):
        for j in range(a):
            psi[j * c + i, i * a + j] = F.one
    return Entwining(A, C, psi, "flip")


# -- the coring A (x) C -------------------------------------------------------------


def _entwined_bimodule(e: Entwining) -> Bimodule:
    F = e.field
    A, C = e.algebra, e.coalgebra
    a, c = A.dim, C.dim
    Ic = F.eye(c)
    left = np.stack([F.kron(A.lmats[x], Ic) for x in range(a)])
    base = F.dot(F.kron(A.mult_matrix, Ic), F.kron(F.eye(a), e.psi))  # A C A -> A C
    right = np.stack([F.dot(base, F.kron(F.eye(a * c), A.basis(x).reshape(-1, 1))) for x in range(a)])
    return Bimodule(F, a * c, A, A, left, right, "AoC")


def _entwined_lift(e: Entwining) -> np.ndarray:
    return _entwined_lift_from(e.algebra, e.coalgebra)


def _entwined_lift_from(A: Algebra, C: Coalgebra) -> np.ndarray:
    """a (x) c -> (a (x) c_(1)) (x) (1 (x) c_(2)) in (A C) (x) (A C)."""
    F = A.field
    Ia, Ic = F.eye(A.dim), F.eye(C.dim)
    insert_one = F.kron(Ia, F.kron(Ic, F.kron(A.unit.reshape(-1, 1), Ic)))
    return F.dot(insert_one, F.kron(Ia, C.delta))


def precoring_from_entwining(e: Entwining) -> Coring:
    """A (x) C with the entwined actions; right action unital iff psi(c (x) 1) = 1 (x) c."""
    F = e.field
    A, C = e.algebra, e.coalgebra
    bim = _entwined_bimodule(e)
    counit = F.kron(F.eye(A.dim), C.eps)
    return Coring(bim, _entwined_lift(e), counit, f"AoC({e.name})" if e.name else "AoC")


def coring_from_entwining(e: Entwining) -> Coring:
    rep = validate_entwining(e)
    rep.raise_if_invalid()
    c = precoring_from_entwining(e)
    res = validate_coring(c)
    if not res.ok:
        raise InternalConsistencyError(f"entwined coring invalid: {res.axioms_violated}")
    return c


def entwining_from_coring(c: Coring, C: Coalgebra) -> Entwining:
    """Recover psi(c (x) a) = (1 (x) c).a from a coring on A (x) C with the
    standard left action, coproduct A (x) Delta and counit A (x) eps."""
    F = c.field
    A = c.algebra
    a, d = A.dim, C.dim
    if c.dim != a * d:
        raise PreconditionError("coring is not of the form A (x) C", axiom="shape")
    Ic = F.eye(d)
    if any(np.any(c.bimodule.left[x] != F.kron(A.lmats[x], Ic)) for x in range(a)):
        raise PreconditionError("left action is not a.(a' (x) c) = aa' (x) c", axiom="left_action")
    if np.any(c.counit != F.kron(F.eye(a), C.eps)):
        raise PreconditionError("counit is not A (x) eps", axiom="counit_shape")
    proto = Coring(c.bimodule, _entwined_lift_from(A, C), c.counit)
    if np.any(proto.delta != c.delta):
        raise PreconditionError("coproduct is not A (x) Delta", axiom="coproduct_shape")
    psi = F.zeros((a * d, d * a))
    for ci in range(d):
        one_c = F.kron(A.unit, F.unit_vector(d, ci))
        for x in range(a):
            psi[:, ci * a + x] = F.dot(c.bimodule.right[x], one_c)
    e = Entwining(A, C, psi, "")
    validate_entwining(e).raise_if_invalid()
    return e


# -- weak entwinings ---------------------------------------------------------------


@dataclass(frozen=True)
class WeakCoring:
    projection: np.ndarray
    basis: np.ndarray  # columns: basis of Im p inside A (x) C
    coring: Coring


def coring_from_weak(e: Entwining, name: str = "") -> WeakCoring:
    """Coring on Im p with Delta = (A (x) Delta)| and eps = (A (x) eps)|.

    Delta on Im p is lifted by a.p(1 (x) c_(1)) (x) p(1 (x) c_(2)), read off
    the factorisation through C (x)_A C.
    """
    rep = validate_weak_entwining(e)
    rep.raise_if_invalid()
    F = e.field
    A, C = e.algebra, e.coalgebra
    a, d = A.dim, C.dim
    p = e.projection
    if np.any(F.dot(p, p) != p):
        raise InternalConsistencyError("p is not idempotent")
    full = _entwined_bimodule(e)
    basis = column_basis(F, p)
    linv = left_inverse(F, basis)
    # right action on Im p: (a' 1_alpha (x) c^alpha).a = a' a_alpha (x) c^alpha
    r = basis.shape[1]
    left = np.stack([F.dot(linv, F.dot(full.left[x], basis)) for x in range(a)])
    right = np.stack([F.dot(linv, F.dot(full.right[x], basis)) for x in range(a)])
    bim = Bimodule(F, r, A, A, left, right, "Im p")
    # D(a (x) c) = a.p(1 (x) c1) (x) p(1 (x) c2) on A (x) C, in Im p coordinates
    pu = F.dot(linv, e.psi_unit)  # c -> coords of p(1 (x) c) = 1_alpha (x) c^alpha
    Dfull = F.zeros((r * r, a * d))
    for x in range(a):
        lx = F.dot(linv, F.dot(full.left[x], basis))  # left mult by e_x on Im p coords
        for ci in range(d):
            dc = C.delta[:, ci]
            img = F.dot(F.kron(F.dot(lx, pu), pu), dc)
            Dfull[:, x * d + ci] = img
    lift = F.dot(Dfull, basis)
    counit = F.dot(F.kron(F.eye(a), C.eps), basis)
    cor = Coring(bim, lift, counit, name or f"Im p({e.name})")
    res = validate_coring(cor)
    if not res.ok:
        raise InternalConsistencyError(f"coring on Im p invalid: {res.axioms_violated}")
    return WeakCoring(p, basis, cor)


def coring_from_weak_via_precoring(e: Entwining, name: str = "") -> WeakCoring:
    """Same coring, built by the generic pre-coring restriction of A (x) C."""
    validate_weak_entwining(e).raise_if_invalid()
    res = coring_from_precoring(precoring_from_entwining(e), name or f"Im p({e.name})")
    return WeakCoring(res.projection, res.basis, res.coring)


# -- the psi-twisted convolution ---------------------------------------------------------


def psi_convolution(f: np.ndarray, g: np.ndarray, e: Entwining) -> np.ndarray:
    """(f *_psi g)(c) = f(c_(2))_alpha g(c_(1)^alpha)."""
    F = e.field
    A, C = e.algebra, e.coalgebra
    step = F.dot(F.kron(F.eye(C.dim), f), C.delta)  # c -> c1 (x) f(c2)
    step = F.dot(e.psi, step)  # -> f(c2)_alpha (x) c1^alpha
    step = F.dot(F.kron(F.eye(A.dim), g), step)
    return F.dot(A.mult_matrix, step)


def hom_to_dual(f: np.ndarray, e: Entwining) -> np.ndarray:
    """r(a (x) c) = a f(c): the left A-linear extension of f: C -> A."""
    F = e.field
    A, C = e.algebra, e.coalgebra
    return F.dot(A.mult_matrix, F.kron(F.eye(A.dim), f))


def dual_to_hom(r: np.ndarray, e: Entwining) -> np.ndarray:
    """f(c) = r(1 (x) c)."""
    F = e.field
    return F.dot(r, F.kron(e.algebra.unit.reshape(-1, 1), F.eye(e.coalgebra.dim)))


# -- entwined modules ----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EntwinedModule:
    entwining: Entwining
    module: Bimodule  # right A-module
    coaction: np.ndarray  # M -> M (x) C
    name: str = ""

    @property
    def dim(self):
        return self.module.dim


def validate_entwined_module(m: EntwinedModule) -> ValidationReport:
    e = m.entwining
    F = e.field
    A, C = e.algebra, e.coalgebra
    rep = ValidationReport(f"entwined module {m.name}".strip())
    rep.merge(validate_bimodule(m.module.only_right()))
    Im, Ic = F.eye(m.dim), F.eye(C.dim)
    rho = m.coaction
    rep.check("coassociativity", _mismatch(F.dot(F.kron(rho, Ic), rho).T, F.dot(F.kron(Im, C.delta), rho).T, 1))
    rep.check("counit", _mismatch(F.dot(F.kron(Im, C.eps), rho).T, Im.T, 1))
    act = right_action_map(m.module)
    lhs = F.dot(rho, act)
    rhs = F.dot(F.kron(act, Ic), F.dot(F.kron(Im, e.psi), F.kron(rho, F.eye(A.dim))))
    rep.check("entwined_compatibility", _mismatch(lhs.T, rhs.T, 1))
    return rep


def entwined_module_of_coring(e: Entwining) -> EntwinedModule:
    """A (x) C with coaction A (x) Delta and action through psi."""
    bim = _entwined_bimodule(e)
    F = e.field
    A, C = e.algebra, e.coalgebra
    rho = F.kron(F.eye(A.dim), C.delta)
    return EntwinedModule(e, bim.only_right(), rho, "AoC")


def to_coring_comodule(m: EntwinedModule, c: Coring, basis: np.ndarray | None = None) -> CoringComodule:
    """Entwined module -> comodule of the (possibly weak) coring: m -> m_(0) (x) p(1 (x) m_(1))."""
    e = m.entwining
    F = e.field
    A, C = e.algebra, e.coalgebra
    pu = e.psi_unit if basis is None else F.dot(left_inverse(F, basis), e.psi_unit)
    lift = F.dot(F.kron(F.eye(m.dim), pu), m.coaction)
    out = CoringComodule(m.module.only_right(), lift, c, m.name)
    validate_comodule(out).raise_if_invalid()
    return out


def from_coring_comodule(m: CoringComodule, e: Entwining, basis: np.ndarray | None = None) -> EntwinedModule:
    """Comodule of A (x) C (or of Im p) -> entwined module via M (x)_A (A (x) C) = M (x) C."""
    F = e.field
    A, C = e.algebra, e.coalgebra
    lift = m.rho_lift if basis is None else F.dot(F.kron(F.eye(m.dim), basis), m.rho_lift)
    iso = F.kron(right_action_map(m.module), F.eye(C.dim))  # M A C -> M C
    out = EntwinedModule(e, m.module.only_right(), F.dot(iso, lift), m.name)
    validate_entwined_module(out).raise_if_invalid()
    return out


def transport_module(m, direction: str, target=None):
    """Move a module across the entwined-module / coring-comodule correspondence.

    direction "to_comodule": m is an EntwinedModule; ``target`` may be the coring
    (or WeakCoring) to land in, otherwise it is built from the entwining.
    direction "to_entwined": m is a CoringComodule and ``target`` the entwining.
    """
    if direction == "to_comodule":
        e = m.entwining
        if isinstance(target, WeakCoring):
            return to_coring_comodule(m, target.coring, target.basis)
        if target is not None:
            return to_coring_comodule(m, target)
        if validate_entwining(e).ok:
            return to_coring_comodule(m, coring_from_entwining(e))
        w = coring_from_weak(e)
        return to_coring_comodule(m, w.coring, w.basis)
    if direction == "to_entwined":
        if not isinstance(target, Entwining):
            raise MalformedInputError("transport to entwined modules needs the entwining")
        e = target
        if m.coring.dim == e.algebra.dim * e.coalgebra.dim:
            return from_coring_comodule(m, e)
        w = coring_from_weak(e)
        if w.basis.shape[1] != m.coring.dim:
            raise MalformedInputError("comodule is over neither A (x) C nor Im p")
        return from_coring_comodule(m, e, w.basis)
    raise MalformedInputError(f"unknown direction {direction!r}")


# -- weak C-Galois extensions -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ComoduleAlgebra:
    """An algebra A with a right C-coaction rho: A -> A (x) C."""

    algebra: Algebra
    coalgebra: Coalgebra
    rho: np.ndarray

    @property
    def field(self):
        return self.algebra.field

    @cached_property
    def coinvariant_basis(self) -> np.ndarray:
        """B = {b : rho(b a) = b rho(a) for all a}."""
        F = self.field
        A, C = self.algebra, self.coalgebra
        Ic = F.eye(C.dim)
        cols = []
        for i in range(A.dim):
            blocks = [
                F.sub(F.dot(self.rho, A.mult[i, x]), F.dot(F.kron(A.lmats[i], Ic), self.rho[:, x]))
                for x in range(A.dim)
            ]
            cols.append(np.concatenate(blocks))
        cons = stack_columns(F, cols, A.dim * A.dim * C.dim)
        return stack_columns(F, kernel_array(F, cons), A.dim)

    @cached_property
    def coinvariants(self):
        from .algebra import subalgebra

        return subalgebra(self.algebra, self.coinvariant_basis, "B")

    @cached_property
    def tensor(self):
        """A (x)_B A."""
        B, inc = self.coinvariants
        R = regular_bimodule(self.algebra)
        return balanced_tensor(R.restrict(right=inc), R.restrict(left=inc))

    @cached_property
    def can(self) -> np.ndarray:
        """a (x)_B a' -> a rho(a'), from A (x)_B A to A (x) C."""
        F = self.field
        A, C = self.algebra, self.coalgebra
        full = F.dot(F.kron(A.mult_matrix, F.eye(C.dim)), F.kron(F.eye(A.dim), self.rho))
        T = self.tensor
        return F.dot(full, T.section)

    @cached_property
    def tensor_coaction(self) -> np.ndarray:
        """A (x)_B rho^A on A (x)_B A, landing in (A (x)_B A) (x) C."""
        F = self.field
        T = self.tensor
        C = self.coalgebra
        return F.dot(F.kron(T.project, F.eye(C.dim)), T.tensor_maps(F.eye(self.algebra.dim), self.rho))


def split_failures(ca: ComoduleAlgebra, sigma: np.ndarray) -> list[str]:
    F = ca.field
    A, C = ca.algebra, ca.coalgebra
    T = ca.tensor
    bad = []
    if sigma.shape != (T.quotient_dim, A.dim * C.dim):
        return ["shape"]
    Ic = F.eye(C.dim)
    Tl = T.module.left
    if any(np.any(F.dot(sigma, F.kron(A.lmats[x], Ic)) != F.dot(Tl[x], sigma)) for x in range(A.dim)):
        bad.append("sigma_left_linear")
    lhs = F.dot(F.kron(sigma, Ic), F.kron(F.eye(A.dim), C.delta))
    rhs = F.dot(ca.tensor_coaction, sigma)
    if np.any(lhs != rhs):
        bad.append("sigma_colinear")
    if np.any(F.dot(sigma, ca.can) != F.eye(T.quotient_dim)):
        bad.append("sigma_splits_can")
    return bad


def weak_entwining_from_split(ca: ComoduleAlgebra, sigma: np.ndarray) -> Entwining:
    """psi = can o (A (x)_B mu) o (tau (x) A) with tau(c) = sigma(1 (x) c)."""
    F = ca.field
    A, C = ca.algebra, ca.coalgebra
    Ia, Ic = F.eye(A.dim), F.eye(C.dim)
    if np.any(F.dot(F.kron(ca.rho, Ic), ca.rho) != F.dot(F.kron(Ia, C.delta), ca.rho)) or np.any(
        F.dot(F.kron(Ia, C.eps), ca.rho) != Ia
    ):
        raise PreconditionError("rho is not a right C-coaction", axiom="coaction")
    bad = split_failures(ca, sigma)
    if bad:
        raise PreconditionError(f"sigma fails: {', '.join(bad)}", axiom=bad[0])
    T = ca.tensor
    tau = F.dot(sigma, F.kron(A.unit.reshape(-1, 1), Ic))  # C -> A (x)_B A
    step = F.kron(F.dot(T.section, tau), Ia)  # C A -> A A A
    step = F.dot(F.kron(Ia, A.mult_matrix), step)  # -> A A
    psi = F.dot(ca.can, F.dot(T.project, step))
    e = Entwining(A, C, psi, "weak-galois")
    validate_weak_entwining(e).raise_if_invalid()
    mod = EntwinedModule(e, regular_bimodule(A).only_right(), ca.rho, "A")
    r = validate_entwined_module(mod)
    if not r.ok:
        raise InternalConsistencyError(f"A is not a weak entwined module: {r.axioms_violated}")
    return e
