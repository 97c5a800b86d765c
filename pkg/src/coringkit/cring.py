"""C-rings: monoids in (C,C)-bicomodules under the cotensor product.

Maps out of a cotensor product are stored in the coordinates of its
kernel basis; every map into one is corestricted with an exact membership
check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .algebra import Algebra, _mismatch
from .coalgebra import (
    Coalgebra,
    CoalgebraComodule,
    CoalgebraMorphism,
    CotensorSpace,
    cotensor,
    validate_coalgebra,
    validate_comodule,
)
from .coring import DEFAULT_BUDGET, _digits
from .entwining import Entwining, validate_entwining
from .errors import InternalConsistencyError, MalformedInputError, PreconditionError
from .linalg import FieldSpec, left_inverse, rank_array, rref_array, solve_array, stack_columns
from .report import ValidationReport
from .separability import Verdict, _solve


@dataclass(frozen=True, eq=False)
class CRing:
    bicomodule: CoalgebraComodule
    product: np.ndarray  # dim x (A box_C A).dim, in cotensor coordinates
    unit: np.ndarray  # dim x C.dim
    name: str = ""

    def __post_init__(self):
        m = self.bicomodule
        if m.left is None or m.right is None:
            raise MalformedInputError("a C-ring needs both coactions")
        if self.unit.shape != (m.dim, m.coalgebra.dim):
            raise MalformedInputError(f"unit has shape {self.unit.shape}, expected {(m.dim, m.coalgebra.dim)}")
        if self.product.shape != (m.dim, self.square.dim):
            raise MalformedInputError(f"product has shape {self.product.shape}, expected {(m.dim, self.square.dim)}")

    @property
    def field(self) -> FieldSpec:
        return self.bicomodule.field

    @property
    def coalgebra(self) -> Coalgebra:
        return self.bicomodule.coalgebra

    @property
    def dim(self) -> int:
        return self.bicomodule.dim

    @cached_property
    def square(self) -> CotensorSpace:
        return cotensor(self.bicomodule, self.bicomodule)

    @cached_property
    def product_ext(self) -> np.ndarray:
        """The product extended to all of A (x) A through the retraction.  Agrees
        with the product on the cotensor and nowhere else matters."""
        return self.field.dot(self.product, self.square.retraction)

    @classmethod
    def from_full_product(cls, bicomodule, product_full, unit, name=""):
        """Build from a product given on A (x) A (only its restriction is kept)."""
        S = cotensor(bicomodule, bicomodule)
        F = bicomodule.field
        return cls(bicomodule, F.dot(product_full, S.inclusion), unit, name)

    def __repr__(self):
        return f"CRing({self.name or '?'}, dim={self.dim}, over {self.coalgebra!r})"


def _coords(F, basis, X):
    """Exact coordinates of the columns of X in the column basis, or None."""
    if basis.shape[1] == 0:
        return F.zeros((0, X.shape[1])) if not np.any(X) else None
    Y = F.dot(left_inverse(F, basis), X)
    return Y if not np.any(F.dot(basis, Y) != X) else None


def triple_cotensor(r: CRing) -> np.ndarray:
    """Basis of A box A box A inside A (x) A (x) A."""
    F = r.field
    S = r.square
    n = r.dim
    T = cotensor(S.comodule, r.bicomodule)
    return F.dot(F.kron(S.inclusion, F.eye(n)), T.inclusion)


def validate_cring(r: CRing) -> ValidationReport:
    F = r.field
    C = r.coalgebra
    A = r.bicomodule
    n, c = r.dim, C.dim
    rep = ValidationReport(f"C-ring {r.name}".strip())
    rep.merge(validate_comodule(A))
    if not rep.ok:
        return rep
    S = r.square
    eta, mu = r.unit, r.product
    rep.check("unit_left_colinear", _mismatch(F.dot(A.left, eta).T, F.dot(F.kron(F.eye(c), eta), C.delta).T, 1))
    rep.check("unit_right_colinear", _mismatch(F.dot(A.right, eta).T, F.dot(F.kron(eta, F.eye(c)), C.delta).T, 1))
    Sc = S.comodule
    rep.check("product_left_colinear",
              _mismatch(F.dot(A.left, mu).T, F.dot(F.kron(F.eye(c), mu), Sc.left).T, 1))
    rep.check("product_right_colinear",
              _mismatch(F.dot(A.right, mu).T, F.dot(F.kron(mu, F.eye(c)), Sc.right).T, 1))
    # associativity on A box A box A
    T3 = triple_cotensor(r)
    I = F.eye(n)
    first = _coords(F, S.inclusion, F.dot(F.kron(r.product_ext, I), T3))
    second = _coords(F, S.inclusion, F.dot(F.kron(I, r.product_ext), T3))
    if first is None or second is None:
        rep.fail("associativity", "partial products leave the cotensor")
    else:
        rep.check("associativity", _mismatch(F.dot(mu, first).T, F.dot(mu, second).T, 1))
    for axiom, big in (
        ("left_unit", F.dot(F.kron(eta, I), A.left)),
        ("right_unit", F.dot(F.kron(I, eta), A.right)),
    ):
        y = _coords(F, S.inclusion, big)
        if y is None:
            rep.fail(axiom, "unit insertion leaves the cotensor")
        else:
            rep.check(axiom, _mismatch(F.dot(mu, y).T, I.T, 1))
    return rep


def cring_from_algebra(A: Algebra, name: str = "") -> CRing:
    """A k-algebra as a C-ring over the one-dimensional coalgebra k."""
    F = A.field
    k = Coalgebra(F, F.array([[[1]]]), F.array([1]), "k")
    m = CoalgebraComodule(k, A.dim, F.eye(A.dim), F.eye(A.dim), A.name)
    unit = A.unit.reshape(-1, 1).copy()
    return CRing.from_full_product(m, A.mult_matrix, unit, name or A.name)


# -- from an entwining --------------------------------------------------------


@dataclass
class EntwiningCRing:
    cring: CRing
    iso: np.ndarray  # C (x) A (x) A -> A box A, in cotensor coordinates


def cring_from_entwining(e: Entwining, name: str = "") -> EntwiningCRing:
    """C (x) A with coactions Delta (x) A and (C (x) psi)(Delta (x) A), product
    C (x) mu through C (x) A (x) A ~ A box A."""
    validate_entwining(e).raise_if_invalid()
    F = e.field
    A, C = e.algebra, e.coalgebra
    a, c = A.dim, C.dim
    Ia, Ic = F.eye(a), F.eye(c)
    left = F.kron(C.delta, Ia)
    right = F.dot(F.kron(Ic, e.psi), F.kron(C.delta, Ia))
    m = CoalgebraComodule(C, c * a, right, left, f"{C.name}(x){A.name}")
    S = cotensor(m, m)
    xi = S.corestrict(F.kron(right, Ia))  # c (x) a (x) a' -> rho(c (x) a) (x) a'
    if xi.shape[0] != xi.shape[1] or rank_array(F, xi) != xi.shape[0]:
        raise InternalConsistencyError("C (x) A (x) A -> A box A is not bijective")
    collapse = F.kron(F.kron(F.eye(c * a), C.eps), Ia)  # A (x) C (x) A -> C (x) A (x) A
    if np.any(F.dot(F.dot(collapse, S.inclusion), xi) != F.eye(c * a * a)):
        raise InternalConsistencyError("collapse does not invert the cotensor isomorphism")
    mu_full = F.dot(F.kron(Ic, A.mult_matrix), collapse)
    unit = F.kron(Ic, A.unit.reshape(-1, 1))
    r = CRing(m, F.dot(mu_full, S.inclusion), unit, name or f"{e.name}-cring")
    validate_cring(r).raise_if_invalid()
    return EntwiningCRing(r, xi)


def entwining_from_cring(r: CRing, A: Algebra, name: str = "") -> Entwining:
    """psi = (eps (x) A (x) C) o rho^{C (x) A} for a C-ring on C (x) A of the standard shape."""
    F = r.field
    C = r.coalgebra
    a, c = A.dim, C.dim
    if r.dim != a * c:
        raise PreconditionError(f"C-ring has dimension {r.dim}, expected {c} * {a}", axiom="shape")
    Ia, Ic = F.eye(a), F.eye(c)
    if np.any(r.bicomodule.left != F.kron(C.delta, Ia)):
        raise PreconditionError("left coaction is not Delta (x) A", axiom="left_coaction_shape")
    if np.any(r.unit != F.kron(Ic, A.unit.reshape(-1, 1))):
        raise PreconditionError("unit is not C (x) 1", axiom="unit_shape")
    collapse = F.kron(F.kron(F.eye(c * a), C.eps), Ia)
    mu_full = F.dot(F.kron(Ic, A.mult_matrix), collapse)
    if np.any(F.dot(mu_full, r.square.inclusion) != r.product):
        raise PreconditionError("product is not C (x) mu", axiom="product_shape")
    psi = F.dot(F.kron(C.eps, F.eye(a * c)), r.bicomodule.right)
    out = Entwining(A, C, psi, name or f"{r.name}-psi")
    validate_entwining(out).raise_if_invalid()
    return out


# -- from a coalgebra surjection ----------------------------------------------


def _corestrict_coaction(F, S: CotensorSpace, big: np.ndarray, c: int, side: str) -> np.ndarray:
    if side == "left":
        out = F.dot(F.kron(F.eye(c), S.retraction), big)
        ok = not np.any(F.dot(F.kron(F.eye(c), S.inclusion), out) != big)
    else:
        out = F.dot(F.kron(S.retraction, F.eye(c)), big)
        ok = not np.any(F.dot(F.kron(S.inclusion, F.eye(c)), out) != big)
    if not ok:
        raise PreconditionError(f"{side} coaction leaves the cotensor product", axiom="cotensor_membership")
    return out


def cring_from_surjection(pi: CoalgebraMorphism, name: str = "") -> CRing:
    """C box_B C for a surjective coalgebra map pi: C -> B; product
    C box eps box C and unit Delta."""
    rep = pi.validate()
    if not rep.ok:
        raise PreconditionError("not a coalgebra morphism: " + ", ".join(rep.axioms_violated),
                                axiom=rep.axioms_violated[0], report=rep)
    C, B = pi.source, pi.target
    F = C.field
    if rank_array(F, pi.matrix) != B.dim:
        raise PreconditionError("coalgebra map is not surjective", axiom="surjective")
    c = C.dim
    Ic = F.eye(c)
    CB = CoalgebraComodule(B, c, F.dot(F.kron(Ic, pi.matrix), C.delta), F.dot(F.kron(pi.matrix, Ic), C.delta), "C")
    validate_comodule(CB).raise_if_invalid()
    SB = cotensor(CB, CB)
    left = _corestrict_coaction(F, SB, F.dot(F.kron(C.delta, Ic), SB.inclusion), c, "left")
    right = _corestrict_coaction(F, SB, F.dot(F.kron(Ic, C.delta), SB.inclusion), c, "right")
    m = CoalgebraComodule(C, SB.dim, right, left, "CoC")
    S = cotensor(m, m)
    collapse = F.kron(F.kron(Ic, F.kron(C.eps, C.eps)), Ic)
    big = F.dot(collapse, F.dot(F.kron(SB.inclusion, SB.inclusion), S.inclusion))
    product = _coords(F, SB.inclusion, big)
    unit = _coords(F, SB.inclusion, C.delta)
    if product is None or unit is None:
        raise InternalConsistencyError("product or unit leaves C box_B C")
    r = CRing(m, product, unit, name or "CoC")
    validate_cring(r).raise_if_invalid()
    return r


# -- modules ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CRingModule:
    comodule: CoalgebraComodule  # right C-comodule
    action: np.ndarray  # dim x (M box A).dim
    cring: CRing
    name: str = ""

    @cached_property
    def cotensor(self) -> CotensorSpace:
        return cotensor(self.comodule, self.cring.bicomodule)

    @property
    def dim(self):
        return self.comodule.dim


def validate_cring_module(m: CRingModule) -> ValidationReport:
    F = m.comodule.field
    r = m.cring
    C = r.coalgebra
    rep = ValidationReport(f"C-ring module {m.name}".strip())
    rep.merge(validate_comodule(m.comodule))
    if not rep.ok:
        return rep
    MA = m.cotensor
    if m.action.shape != (m.dim, MA.dim):
        rep.fail("shape", f"action has shape {m.action.shape}")
        return rep
    rep.check("action_colinear", _mismatch(
        F.dot(m.comodule.right, m.action).T, F.dot(F.kron(m.action, F.eye(C.dim)), MA.comodule.right).T, 1))
    ext = F.dot(m.action, MA.retraction)
    n, d = r.dim, m.dim
    T = cotensor(MA.comodule, r.bicomodule)
    T3 = F.dot(F.kron(MA.inclusion, F.eye(n)), T.inclusion)  # in M A A
    first = _coords(F, MA.inclusion, F.dot(F.kron(ext, F.eye(n)), T3))
    second = _coords(F, MA.inclusion, F.dot(F.kron(F.eye(d), r.product_ext), T3))
    if first is None or second is None:
        rep.fail("associativity", "partial actions leave the cotensor")
    else:
        rep.check("associativity", _mismatch(F.dot(m.action, first).T, F.dot(m.action, second).T, 1))
    y = _coords(F, MA.inclusion, F.dot(F.kron(F.eye(d), r.unit), m.comodule.right))
    if y is None:
        rep.fail("unit", "unit insertion leaves the cotensor")
    else:
        rep.check("unit", _mismatch(F.dot(m.action, y).T, F.eye(d).T, 1))
    return rep


def free_cring_module(M: CoalgebraComodule, r: CRing) -> CRingModule:
    """M box_C A with action M box mu."""
    F = r.field
    X = cotensor(M, r.bicomodule)
    mod = X.comodule
    mod = CoalgebraComodule(mod.coalgebra, mod.dim, mod.right, None, f"{M.name}[]A")
    Y = cotensor(mod, r.bicomodule)
    big = F.dot(F.kron(F.eye(M.dim), r.product_ext), F.dot(F.kron(X.inclusion, F.eye(r.dim)), Y.inclusion))
    act = _coords(F, X.inclusion, big)
    if act is None:
        raise InternalConsistencyError("M box mu leaves M box A")
    return CRingModule(mod, act, r, mod.name)


# -- separability criteria ------------------------------------------------------


@dataclass
class DualInductionCertificate:
    cring: CRing
    e: np.ndarray  # 1 x dim

    def verify(self) -> ValidationReport:
        r = self.cring
        F = r.field
        A = r.bicomodule
        c = r.coalgebra.dim
        rep = ValidationReport("dual induction certificate")
        lhs = F.dot(F.kron(self.e, F.eye(c)), A.right)
        rhs = F.dot(F.kron(F.eye(c), self.e), A.left)
        rep.check("bicolinear", _mismatch(lhs.T, rhs.T, 1))
        rep.check("normalised", _mismatch(F.dot(self.e, r.unit), r.coalgebra.eps, 0))
        return rep


def _linear_system(F, nvars, residual, shape):
    """Stack residual(E_i) over unit inputs into a coefficient matrix."""
    cols = []
    for i in range(nvars):
        x = F.zeros(nvars)
        x[i] = F.one
        cols.append(residual(x.reshape(shape)).reshape(-1))
    return stack_columns(F, cols, cols[0].shape[0]) if cols else F.zeros((0, 0))


def check_dual_induction_separable(r: CRing) -> Verdict:
    F = r.field
    A = r.bicomodule
    n, c = r.dim, r.coalgebra.dim
    homog = _linear_system(
        F, n,
        lambda e: F.sub(F.dot(F.kron(e, F.eye(c)), A.right), F.dot(F.kron(F.eye(c), e), A.left)),
        (1, n))
    unit_rows = _linear_system(F, n, lambda e: F.dot(e, r.unit), (1, n))
    cons = np.concatenate([homog, unit_rows], axis=0)
    rhs = np.concatenate([F.zeros(homog.shape[0]), r.coalgebra.eps.reshape(-1)])
    x, dim, wit = _solve(F, cons, rhs)
    if x is None:
        return Verdict(None, None, wit)
    cert = DualInductionCertificate(r, x.reshape(1, n))
    if not cert.verify().ok:
        raise InternalConsistencyError("dual induction certificate fails its own check")
    return Verdict(cert, dim)


@dataclass
class DualCointegral:
    cring: CRing
    gamma: np.ndarray  # (A box A).dim x C.dim

    def sides(self):
        r = self.cring
        F = r.field
        n = r.dim
        I = F.eye(n)
        g = F.dot(r.square.inclusion, self.gamma)
        lhs = F.dot(F.kron(r.product_ext, I), F.dot(F.kron(I, g), r.bicomodule.right))
        rhs = F.dot(F.kron(I, r.product_ext), F.dot(F.kron(g, I), r.bicomodule.left))
        return lhs, rhs

    def verify(self) -> ValidationReport:
        r = self.cring
        F = r.field
        C = r.coalgebra
        c = C.dim
        S = r.square
        Sc = S.comodule
        rep = ValidationReport("dual cointegral")
        rep.check("left_colinear", _mismatch(F.dot(Sc.left, self.gamma).T,
                                             F.dot(F.kron(F.eye(c), self.gamma), C.delta).T, 1))
        rep.check("right_colinear", _mismatch(F.dot(Sc.right, self.gamma).T,
                                              F.dot(F.kron(self.gamma, F.eye(c)), C.delta).T, 1))
        rep.check("normalised", _mismatch(F.dot(r.product, self.gamma), r.unit, 0))
        # each partial product must come from a genuine triple cotensor element
        T3 = triple_cotensor(r)
        n = r.dim
        I = F.eye(n)
        g = F.dot(S.inclusion, self.gamma)
        inner_l = F.dot(F.kron(I, g), r.bicomodule.right)
        inner_r = F.dot(F.kron(g, I), r.bicomodule.left)
        if T3.shape[1] and (_coords(F, T3, inner_l) is None or _coords(F, T3, inner_r) is None):
            rep.fail("cotensor_membership")
        lhs, rhs = self.sides()
        rep.check("compatibility", _mismatch(lhs.T, rhs.T, 1))
        return rep


def check_dual_forgetful_separable(r: CRing) -> Verdict:
    F = r.field
    C = r.coalgebra
    c = C.dim
    S = r.square
    Sc = S.comodule
    s = S.dim
    shape = (s, c)

    def colinear(g):
        return np.concatenate([
            F.sub(F.dot(Sc.left, g), F.dot(F.kron(F.eye(c), g), C.delta)).reshape(-1),
            F.sub(F.dot(Sc.right, g), F.dot(F.kron(g, F.eye(c)), C.delta)).reshape(-1),
        ])

    def compat(g):
        lhs, rhs = DualCointegral(r, g).sides()
        return F.sub(lhs, rhs)

    homog = np.concatenate([_linear_system(F, s * c, colinear, shape), _linear_system(F, s * c, compat, shape)])
    norm = _linear_system(F, s * c, lambda g: F.dot(r.product, g), shape)
    cons = np.concatenate([homog, norm], axis=0)
    rhs = np.concatenate([F.zeros(homog.shape[0]), r.unit.reshape(-1)])
    x, dim, wit = _solve(F, cons, rhs)
    if x is None:
        return Verdict(None, None, wit)
    cert = DualCointegral(r, x.reshape(shape))
    if not cert.verify().ok:
        raise InternalConsistencyError("dual cointegral fails its own check")
    return Verdict(cert, dim)


# -- characters and the invariants coideal ------------------------------------------


@dataclass(frozen=True, eq=False)
class Character:
    cring: CRing
    kappa: np.ndarray  # length dim

    @cached_property
    def action(self) -> np.ndarray:
        """rho_C: A -> C, a -> kappa(a_(0)) a_(1)."""
        F = self.cring.field
        return F.dot(F.kron(self.kappa.reshape(1, -1), F.eye(self.cring.coalgebra.dim)), self.cring.bicomodule.right)

    def module(self) -> CRingModule:
        """C as a right module; C box A is identified with A through eps (x) A."""
        r = self.cring
        F = r.field
        C = r.coalgebra
        Cm = CoalgebraComodule(C, C.dim, C.delta, None, C.name or "C")
        X = cotensor(Cm, r.bicomodule)
        collapse = F.kron(C.eps, F.eye(r.dim))
        return CRingModule(Cm, F.dot(self.action, F.dot(collapse, X.inclusion)), r, "C")


def validate_character(k: Character) -> ValidationReport:
    r = k.cring
    F = r.field
    rep = ValidationReport("character")
    if k.kappa.shape != (r.dim,):
        rep.fail("shape", f"kappa has shape {k.kappa.shape}")
        return rep
    rep.check("nontrivial", _mismatch(F.dot(k.kappa.reshape(1, -1), r.unit), r.coalgebra.eps, 0))
    if rep.ok:
        rep.merge(validate_cring_module(k.module()), "module.")
    return rep


def find_characters(r: CRing, budget: int = DEFAULT_BUDGET) -> tuple[list, bool]:
    """Characters over F_p by scanning the affine space kappa o eta = eps.
    Returns (characters, exhaustive)."""
    F = r.field
    if not F.is_finite:
        raise PreconditionError("character enumeration needs a finite field", axiom="finite_field")
    n = r.dim
    sol = solve_array(F, r.unit.T.copy(), r.coalgebra.eps.reshape(-1))
    if sol is None:
        return [], True
    x0, ker = sol
    k = len(ker)
    total = F.p ** k
    found = []
    for idx in range(min(total, budget)):
        coeffs = _digits(idx, k, F.p)
        v = F.add(x0, F.combo(coeffs, np.stack(ker))) if k else x0
        ch = Character(r, v)
        if validate_character(ch).ok:
            found.append(ch)
    return found, total <= budget


@dataclass
class CoidealResult:
    action: np.ndarray  # rho_C as a C.dim x A.dim matrix
    ideal: np.ndarray  # basis columns of I in C
    projection: np.ndarray  # C -> C/I
    quotient: Coalgebra


def invariants_coideal(r: CRing, kappa: Character) -> CoidealResult:
    rep = validate_character(kappa)
    if not rep.ok:
        raise PreconditionError("not a character: " + ", ".join(rep.axioms_violated),
                                axiom=rep.axioms_violated[0], report=rep)
    F = r.field
    C = r.coalgebra
    c = C.dim
    kap = kappa.kappa.reshape(1, -1)
    rho = kappa.action
    lam = F.dot(F.kron(F.eye(c), kap), r.bicomodule.left)  # a -> a_(-1) kappa(a_(0))
    span = F.sub(rho, lam)
    if span.shape[1] and np.any(span):
        red, piv = rref_array(F, span.T.copy())
        ideal = red[: len(piv)].T.copy()
    else:
        ideal, piv = F.zeros((c, 0)), []
    # coideal: Delta(I) in I (x) C + C (x) I and eps(I) = 0
    if ideal.shape[1]:
        both = np.concatenate([F.kron(ideal, F.eye(c)), F.kron(F.eye(c), ideal)], axis=1)
        if rank_array(F, np.concatenate([both, F.dot(C.delta, ideal)], axis=1)) != rank_array(F, both):
            raise InternalConsistencyError("I is not a coideal: Delta(I) escapes I (x) C + C (x) I")
        if np.any(F.dot(C.eps, ideal)):
            raise InternalConsistencyError("I is not a coideal: eps(I) != 0")
    pset = set(piv)
    free = [j for j in range(c) if j not in pset]
    proj = F.zeros((len(free), c))
    for t, j in enumerate(free):
        proj[t, j] = F.one
    for t, pc in enumerate(piv):
        proj[:, pc] = F.reduce(-ideal[free, t]) if F.is_finite else -ideal[free, t]
    sec = F.zeros((c, len(free)))
    for t, j in enumerate(free):
        sec[j, t] = F.one
    if ideal.shape[1] and np.any(F.dot(proj, ideal)):
        raise InternalConsistencyError("projection does not kill I")
    delta_b = F.dot(F.kron(proj, proj), F.dot(C.delta, sec))
    eps_b = F.dot(C.eps, sec).reshape(-1)
    q = len(free)
    B = Coalgebra(F, np.ascontiguousarray(delta_b.T.reshape(q, q, q)), eps_b, f"{C.name}/I")
    vb = validate_coalgebra(B)
    if not vb.ok:
        raise InternalConsistencyError("quotient coalgebra fails: " + ", ".join(vb.axioms_violated))
    if np.any(F.dot(F.kron(proj, proj), C.delta) != F.dot(B.delta, proj)):
        raise InternalConsistencyError("C -> C/I is not a coalgebra map")
    return CoidealResult(rho, ideal, proj, B)
