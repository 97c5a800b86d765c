"""Separability of the induction and forgetful functors of a coring.

Both questions reduce to affine linear systems.  A feasible system yields
its row-reduced canonical solution (free variables set to zero) together
with the dimension of the full solution space; an infeasible one yields the
ranks of the homogeneous and augmented matrices, which differ.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    AlgebraMorphism,
    Bimodule,
    _mismatch,
    balanced_tensor,
    bimodule_invariants,
    dual_basis_projectivity,
    hom_space,
    left_action_map,
    linearity_constraints,
    regular_bimodule,
    right_action_map,
)
from .coring import (
    Coring,
    CoringComodule,
    _linear_failures,
    canonical_coring,
    comodule_map_failures,
    cube_lift,
    extension_tensor,
    id_tensor_delta,
    validate_coring,
)
from .errors import InternalConsistencyError, MalformedInputError, PreconditionError
from .linalg import FieldSpec, rank_array, rank_witness, solve_array, stack_columns
from .report import ValidationReport


def _fmt(F: FieldSpec, arr) -> list:
    return np.vectorize(F.format, otypes=[object])(arr).tolist() if np.size(arr) else np.asarray(arr).tolist()


@dataclass
class Verdict:
    """Outcome of a feasibility question: a certificate or a rank witness."""

    certificate: object | None
    solution_dim: int | None = None
    witness: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.certificate is not None

    def __bool__(self):
        return self.feasible


def _solve(F: FieldSpec, cons: np.ndarray, rhs: np.ndarray):
    sol = solve_array(F, cons, rhs)
    if sol is None:
        return None, None, rank_witness(F, cons, rhs)
    x, ker = sol
    return x, len(ker), {}


# -- induction functor -----------------------------------------------------------


@dataclass
class InductionCertificate:
    """e in C^A with eps(e) = 1."""

    coring: Coring
    e: np.ndarray

    def verify(self) -> ValidationReport:
        c = self.coring
        F = c.field
        rep = ValidationReport("induction certificate")
        bad = [(a,) for a in range(c.algebra.dim)
               if np.any(F.dot(c.bimodule.left[a], self.e) != F.dot(c.bimodule.right[a], self.e))]
        rep.check("central", bad)
        rep.check("normalised", [] if np.array_equal(F.dot(c.counit, self.e), c.algebra.unit) else [()])
        return rep

    def to_json(self):
        return {"e": _fmt(self.coring.field, self.e)}


def check_induction_separable(c: Coring) -> Verdict:
    """Solve {a.e = e.a, eps(e) = 1}."""
    F = c.field
    A = c.algebra
    gens = A.generators
    blocks = [F.sub(c.bimodule.left[g], c.bimodule.right[g]) for g in gens]
    cons = np.concatenate(blocks + [c.counit], axis=0)
    rhs = np.concatenate([F.zeros(c.dim * len(gens)), A.unit])
    x, dim, wit = _solve(F, cons, rhs)
    if x is None:
        inv = bimodule_invariants(c.bimodule)
        img = F.dot(c.counit, inv) if inv.shape[1] else F.zeros((A.dim, 0))
        wit.update(
            invariants_dim=int(inv.shape[1]),
            counit_image_dim=rank_array(F, img) if img.shape[1] else 0,
            image_contains_one=solve_array(F, img, A.unit) is not None if img.shape[1] else False,
        )
        return Verdict(None, None, wit)
    cert = InductionCertificate(c, x)
    if not cert.verify().ok:
        raise InternalConsistencyError("induction certificate failed re-verification")
    return Verdict(cert, dim)


@dataclass
class NuSplitting:
    """nu_M(m) = m (x)_A e, a right A-linear section of Psi_M(m (x) c) = m.eps(c)."""

    module: Bimodule
    tensor: object
    nu: np.ndarray
    psi: np.ndarray


def build_nu_from_e(cert: InductionCertificate, M: Bimodule) -> NuSplitting:
    c = cert.coring
    F = c.field
    if M.right is None:
        raise MalformedInputError("nu needs a right A-module")
    T = balanced_tensor(M.only_right(), c.bimodule)
    nu = T.proj(F.kron(F.eye(M.dim), cert.e.reshape(-1, 1)))
    psi = F.dot(right_action_map(M), T.tensor_maps(F.eye(M.dim), c.counit))
    if np.any(F.dot(psi, nu) != F.eye(M.dim)):
        raise InternalConsistencyError("Psi o nu is not the identity")
    if _linear_failures(F, M.right, T.module.right, nu, c.algebra.dim):
        raise InternalConsistencyError("nu is not right A-linear")
    return NuSplitting(M, T, nu, psi)


def nu_naturality_failures(cert: InductionCertificate, f: np.ndarray, M: Bimodule, N: Bimodule) -> bool:
    """True when nu_N o f != (f (x) C) o nu_M for the right A-linear f: M -> N."""
    F = cert.coring.field
    sm, sn = build_nu_from_e(cert, M), build_nu_from_e(cert, N)
    lhs = F.dot(sn.nu, f)
    rhs = F.dot(sm.tensor.tensor_maps(f, F.eye(cert.coring.dim), sn.tensor), sm.nu)
    return bool(np.any(lhs != rhs))


# -- forgetful functor ------------------------------------------------------------


def _delta_slices(c: Coring) -> np.ndarray:
    d = c.dim
    return c.delta_lift.T.reshape(d, d, d)  # [i, k, l]: coefficient of e_k (x) e_l in Delta(e_i)


def _compat_coefficients(c: Coring) -> np.ndarray:
    """Rows expressing c_(1).gamma(c_(2) (x) c') - gamma(c (x) c'_(1)).c'_(2) = 0
    on the quotient basis of C (x)_A C, linear in vec(gamma) (row-major)."""
    F = c.field
    T2 = c.tensor_square
    d, a, q = c.dim, c.algebra.dim, T2.quotient_dim
    P = T2.project
    D = _delta_slices(c)
    Rs = c.bimodule.right.reshape(a * d, d)
    Ls = c.bimodule.left.reshape(a * d, d)
    ar = np.arange(d)
    rows = []
    for u in range(q):
        i, j = divmod(int(T2.basis_index[u]), d)
        Y = F.dot(D[i], P[:, ar * d + j].T)  # [k, t]
        lhs = F.dot(Rs, Y)  # [(s, m), t]
        Z = F.dot(D[j].T, P[:, i * d + ar].T)  # [l, t]
        rhs = F.dot(Ls, Z)
        diff = F.sub(lhs, rhs).reshape(a, d, q).transpose(1, 0, 2).reshape(d, a * q)
        rows.append(diff)
    return np.concatenate(rows, axis=0) if rows else F.zeros((0, a * q))


def gamma_sides(c: Coring, gamma: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """The maps c (x) c' -> c_(1).gamma(c_(2) (x) c') and -> gamma(c (x) c'_(1)).c'_(2)."""
    F = c.field
    T2 = c.tensor_square
    d = c.dim
    gp = F.dot(gamma, T2.project)
    left = F.dot(right_action_map(c.bimodule), F.dot(F.kron(F.eye(d), gp), T2.tensor_maps(c.delta_lift, F.eye(d))))
    right = F.dot(left_action_map(c.bimodule), F.dot(F.kron(gp, F.eye(d)), T2.tensor_maps(F.eye(d), c.delta_lift)))
    return left, right


@dataclass
class Cointegral:
    coring: Coring
    gamma: np.ndarray  # A.dim x dim(C (x)_A C)

    def verify(self) -> ValidationReport:
        c = self.coring
        F = c.field
        T2 = c.tensor_square
        A = c.algebra
        g = self.gamma
        rep = ValidationReport("cointegral")
        rep.check("left_linear", _linear_failures(F, T2.module.left, A.lmats, g, A.dim))
        rep.check("right_linear", _linear_failures(F, T2.module.right, A.rmats, g, A.dim))
        rep.check("normalised", _mismatch(F.dot(g, c.delta).T, c.counit.T, 1))
        lhs, rhs = gamma_sides(c, g)
        rep.check("compatibility", _mismatch(lhs.T, rhs.T, 1))
        return rep

    def to_json(self):
        return {"gamma": _fmt(self.coring.field, self.gamma)}


def forgetful_system(c: Coring) -> tuple[np.ndarray, np.ndarray]:
    F = c.field
    A = c.algebra
    T2 = c.tensor_square
    a, q, d = A.dim, T2.quotient_dim, c.dim
    gens = A.generators
    mod = T2.module
    blocks = [
        linearity_constraints(F, [mod.left[g] for g in gens], [A.lmats[g] for g in gens], q, a),
        linearity_constraints(F, [mod.right[g] for g in gens], [A.rmats[g] for g in gens], q, a),
        F.kron(F.eye(a), c.delta.T),
        _compat_coefficients(c),
    ]
    sizes = [b.shape[0] for b in blocks]
    rhs = F.zeros(sum(sizes))
    start = sizes[0] + sizes[1]
    rhs[start:start + a * d] = c.counit.reshape(-1)
    return np.concatenate(blocks, axis=0), rhs


def check_forgetful_separable(c: Coring) -> Verdict:
    """Bilinear gamma with gamma o Delta = eps and the compatibility identity.

    Bilinearity is imposed as explicit constraints: a map on the quotient
    coordinates of C (x)_A C is only a k-linear map until then.
    """
    F = c.field
    cons, rhs = forgetful_system(c)
    x, dim, wit = _solve(F, cons, rhs)
    if x is None:
        return Verdict(None, None, wit)
    cert = Cointegral(c, x.reshape(c.algebra.dim, c.tensor_square.quotient_dim))
    if not cert.verify().ok:
        raise InternalConsistencyError("cointegral failed re-verification")
    return Verdict(cert, dim)


@dataclass
class CosepIdempotent:
    coring: Coring
    pi: np.ndarray  # dim x dim(C (x)_A C)

    def verify(self) -> ValidationReport:
        c = self.coring
        F = c.field
        A = c.algebra
        T2, T3 = c.tensor_square, c.tensor_cube
        pi = self.pi
        rep = ValidationReport("coseparability idempotent")
        rep.check("left_linear", _linear_failures(F, T2.module.left, c.bimodule.left, pi, A.dim))
        rep.check("right_linear", _linear_failures(F, T2.module.right, c.bimodule.right, pi, A.dim))
        rep.check("splits_coproduct", _mismatch(F.dot(pi, c.delta).T, F.eye(c.dim).T, 1))
        dpi = F.dot(c.delta, pi)
        # (C (x) pi) o (Delta (x) C)
        c_pi = F.dot(T2.project, F.dot(F.kron(F.eye(c.dim), F.dot(pi, T2.project)), cube_lift(c)))
        first = F.dot(c_pi, T2.tensor_maps(c.delta, F.eye(c.dim), T3))
        rep.check("right_colinear", _mismatch(dpi.T, first.T, 1))
        # (pi (x) C) o (C (x) Delta)
        pi_c = T3.tensor_maps(pi, F.eye(c.dim), T2)
        second = F.dot(pi_c, id_tensor_delta(c))
        rep.check("left_colinear", _mismatch(dpi.T, second.T, 1))
        return rep

    def to_json(self):
        return {"pi": _fmt(self.coring.field, self.pi)}


def cosep_idempotent(g: Cointegral) -> CosepIdempotent:
    """pi(c (x) c') = c_(1).gamma(c_(2) (x) c'), verified against all four identities."""
    pi, _ = gamma_sides(g.coring, g.gamma)
    out = CosepIdempotent(g.coring, pi)
    rep = out.verify()
    if not rep.ok:
        raise InternalConsistencyError(f"pi fails {rep.axioms_violated}")
    return out


def gamma_from_pi(p: CosepIdempotent) -> Cointegral:
    """gamma = eps o pi."""
    c = p.coring
    return Cointegral(c, c.field.dot(c.counit, p.pi))


# -- Maschke-type splitting --------------------------------------------------------


def nu_comodule(g: Cointegral, m: CoringComodule) -> np.ndarray:
    """nu_M(m (x) c) = m_(0).gamma(m_(1) (x) c), a map M (x)_A C -> M."""
    c = g.coring
    F = c.field
    T = m.tensor
    T2 = c.tensor_square
    d = c.dim
    gp = F.dot(g.gamma, T2.project)
    step = T.tensor_maps(m.rho_lift, F.eye(d))  # into M C C
    step = F.dot(F.kron(F.eye(m.dim), gp), step)  # into M A
    return F.dot(right_action_map(m.module), step)


def maschke_split(f: np.ndarray, s: np.ndarray, g: Cointegral, M: CoringComodule, N: CoringComodule) -> np.ndarray:
    """Colinear section s~ = nu_M o (s (x)_A C) o rho^N of a comodule epimorphism f: M -> N."""
    F = M.field
    A = M.coring.algebra
    problems = []
    if np.any(F.dot(f, s) != F.eye(N.dim)):
        problems.append("section")
    if comodule_map_failures(f, M, N):
        problems.append("f_comodule_map")
    if _linear_failures(F, N.module.right, M.module.right, s, A.dim):
        problems.append("s_right_linear")
    if problems:
        raise PreconditionError(f"Maschke splitting preconditions fail: {', '.join(problems)}", axiom=problems[0])
    nu = nu_comodule(g, M)
    lifted = N.tensor.tensor_maps(s, F.eye(M.coring.dim), M.tensor)
    out = F.dot(nu, F.dot(lifted, N.rho))
    bad = comodule_map_failures(out, N, M)
    if bad or np.any(F.dot(f, out) != F.eye(N.dim)):
        raise InternalConsistencyError(f"split section fails: {bad or ['section']}")
    return out


def colinearity_residual(f: np.ndarray, m: CoringComodule, n: CoringComodule) -> np.ndarray:
    """rho^N o f - (f (x) C) o rho^M (zero exactly when f is colinear)."""
    F = m.field
    return F.sub(F.dot(n.rho, f), F.dot(m.tensor.tensor_maps(f, F.eye(m.coring.dim), n.tensor), m.rho))


# -- ring extensions ----------------------------------------------------------------


@dataclass
class ExtensionAnalysis:
    extension: AlgebraMorphism
    coring: Coring
    separable: Verdict  # certificate: list of (coefficient, a_i, a'_i) triples
    split: Verdict  # certificate: E as a B.dim x A.dim matrix
    forgetful: Verdict
    induction: Verdict
    b_summand: bool
    iff_asserted: bool
    notes: list = field(default_factory=list)


def _separability_idempotent(ext: AlgebraMorphism) -> Verdict:
    """e in A (x)_k A, central modulo the B-balancing relations, with mu(e) = 1.

    Solved in the plain tensor product with explicit multipliers for the
    relations, independently of the quotient used by the coring.
    """
    A = ext.target
    B = ext.source
    F = A.field
    n = A.dim
    I = F.eye(n)
    rels = [F.sub(F.kron(A.rmat(ext(B.basis(b))), I), F.kron(I, A.lmat(ext(B.basis(b))))) for b in range(B.dim)]
    rel = np.concatenate(rels, axis=1) if rels else F.zeros((n * n, 0))
    gens = A.generators
    r = rel.shape[1]
    nvar = n * n + r * len(gens)
    blocks = []
    for t, g in enumerate(gens):
        row = F.zeros((n * n, nvar))
        row[:, : n * n] = F.sub(F.kron(A.lmats[g], I), F.kron(I, A.rmats[g]))
        row[:, n * n + t * r: n * n + (t + 1) * r] = F.reduce(-rel) if F.is_finite else -rel
        blocks.append(row)
    mu = F.zeros((n, nvar))
    mu[:, : n * n] = A.mult_matrix
    cons = np.concatenate(blocks + [mu], axis=0)
    rhs = np.concatenate([F.zeros(n * n * len(gens)), A.unit])
    x, dim, wit = _solve(F, cons, rhs)
    if x is None:
        return Verdict(None, None, wit)
    e = x[: n * n]
    pairs = [(e[i * n + j], i, j) for i in range(n) for j in range(n) if e[i * n + j] != 0]
    return Verdict(pairs, dim)


def _split_system(ext: AlgebraMorphism):
    A, B = ext.target, ext.source
    F = A.field
    inc = [ext(B.basis(b)) for b in range(B.dim)]
    cons = np.concatenate(
        [
            linearity_constraints(F, [A.lmat(x) for x in inc], list(B.lmats), A.dim, B.dim),
            linearity_constraints(F, [A.rmat(x) for x in inc], list(B.rmats), A.dim, B.dim),
            F.kron(F.eye(B.dim), A.unit.reshape(1, -1)),
        ],
        axis=0,
    )
    rhs = F.zeros(cons.shape[0])
    rhs[cons.shape[0] - B.dim:] = B.unit
    return cons, rhs


def gamma_from_E(c: Coring, ext: AlgebraMorphism, E: np.ndarray) -> np.ndarray:
    """gamma(a (x) a' (x) a'') = a E(a') a'' on the canonical coring."""
    A = ext.target
    F = A.field
    T = extension_tensor(ext)
    T2 = c.tensor_square
    n = A.dim
    cols = []
    for idx in T2.basis_index:
        u, v = divmod(int(idx), c.dim)
        i, j = divmod(int(T.basis_index[u]), n)
        k, l = divmod(int(T.basis_index[v]), n)
        mid = F.dot(ext.matrix, F.dot(E, A.mul(A.basis(j), A.basis(k))))
        cols.append(A.mul(A.mul(A.basis(i), mid), A.basis(l)))
    return stack_columns(F, cols, n)


def E_from_gamma(c: Coring, ext: AlgebraMorphism, gamma: np.ndarray) -> np.ndarray | None:
    """E(a) = gamma(1 (x) a (x) 1), expressed in B when it lands there."""
    A, B = ext.target, ext.source
    F = A.field
    T = extension_tensor(ext)
    T2 = c.tensor_square
    out = []
    for i in range(A.dim):
        x = T2.element(T.element(A.unit, A.basis(i)), T.element(A.unit, A.unit))
        val = F.dot(gamma, x)
        sol = solve_array(F, ext.matrix, val)
        if sol is None:
            return None
        out.append(sol[0])
    return stack_columns(F, out, B.dim)


def b_summand_condition(ext: AlgebraMorphism) -> bool:
    """A projective as a left B-module and a left B-linear retraction A -> B
    with E(1) = 1 exists (sufficient for faithful flatness over a field)."""
    A, B = ext.target, ext.source
    F = A.field
    left = np.stack([A.lmat(ext(B.basis(b))) for b in range(B.dim)])
    AB = Bimodule(F, A.dim, B, None, left, None, "A")
    if dual_basis_projectivity(AB) is None:
        return False
    inc = [ext(B.basis(b)) for b in range(B.dim)]
    cons = np.concatenate(
        [
            linearity_constraints(F, [A.lmat(x) for x in inc], list(B.lmats), A.dim, B.dim),
            F.kron(F.eye(B.dim), A.unit.reshape(1, -1)),
        ],
        axis=0,
    )
    rhs = F.zeros(cons.shape[0])
    rhs[cons.shape[0] - B.dim:] = B.unit
    return solve_array(F, cons, rhs) is not None


def analyze_extension(ext: AlgebraMorphism) -> ExtensionAnalysis:
    A, B = ext.target, ext.source
    F = A.field
    c = canonical_coring(ext)
    validate_coring(c).raise_if_invalid()
    sep = _separability_idempotent(ext)
    ind = check_induction_separable(c)
    notes = []
    if sep.feasible != ind.feasible:
        raise InternalConsistencyError("separability idempotent and induction certificate disagree")
    cons, rhs = _split_system(ext)
    x, dim, wit = _solve(F, cons, rhs)
    split = Verdict(None, None, wit) if x is None else Verdict(x.reshape(B.dim, A.dim), dim)
    forg = check_forgetful_separable(c)
    over_field = B.dim == 1
    summand = over_field or b_summand_condition(ext)
    if split.feasible:
        gam = Cointegral(c, gamma_from_E(c, ext, split.certificate))
        if not gam.verify().ok:
            raise InternalConsistencyError("gamma built from E is not a cointegral")
    if forg.feasible:
        E = E_from_gamma(c, ext, forg.certificate.gamma)
        if E is None:
            notes.append("gamma(1 (x) a (x) 1) leaves B for some a")
    if summand and split.feasible != forg.feasible:
        raise InternalConsistencyError("split and forgetful verdicts disagree under the summand condition")
    if summand and split.feasible and split.solution_dim != forg.solution_dim:
        raise InternalConsistencyError("E and gamma solution spaces differ in dimension")
    if not summand:
        notes.append("summand condition fails: split and forgetful verdicts reported separately")
    return ExtensionAnalysis(ext, c, sep, split, forg, ind, summand, summand, notes)
