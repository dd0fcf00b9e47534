"""Closed-form solvers for two-sided Sylvester quaternion tensor equations.

The main equation is ``A * X * B + C * Y * D = E`` with shapes

    A: I|J   X: J|K   B: K|L
    C: I|G   Y: G|H   D: H|L   E: I|L

Solvability is decided from four projected residuals of ``E``; when they
vanish the general solution is assembled term by term from pseudo-inverses
and projectors (``L_T = I - T^+ T``, ``R_T = I - T T^+``).  Every residual is
divided by ``max(1, ||E||_F)`` before it is compared with ``tol``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DimensionMismatch, Inconsistent, NotASolution, NotEtaHermitian
from .quat_core import check_eta
from .quat_tensor import (
    QuatTensor,
    eta_conj_transpose,
    frobenius_norm,
    tensor_svd,
    unit_tensor,
)

DEFAULT_TOL = 1e-10

# condition labels for the general equation
COND_RP_RA_E = "R_P*R_A*E"
COND_E_LB_LQ = "E*L_B*L_Q"
COND_RA_E_LD = "R_A*E*L_D"
COND_RC_E_LB = "R_C*E*L_B"


def _scale(e: QuatTensor) -> float:
    return max(1.0, frobenius_norm(e))


def _zeros_like_shape(left, right):
    return QuatTensor.zeros(left, right)


class _Inverse:
    """Pseudo-inverse of ``t`` plus its two projectors, computed once.

    ``scale`` sets the magnitude the rank cutoff is measured against; it
    matters for intermediates such as ``P = R_A * C`` that may be zero up
    to rounding, where a cutoff relative to their own norm would invert
    noise.
    """

    def __init__(self, t: QuatTensor, scale=None, tol_rank=None):
        f = tensor_svd(t, tol_rank, scale=scale)
        self.t = t
        self.rank = f.rank
        self.sigma_max = float(f.singvals.max()) if f.rank else 0.0
        self.pinv = f.pseudo_inverse()
        self.L = unit_tensor(t.right) - self.pinv @ t
        self.R = unit_tensor(t.left) - t @ self.pinv


@dataclass(frozen=True)
class SylvesterProblem:
    """Coefficients of ``A * X * B + C * Y * D = E``; shapes are checked on construction."""

    A: QuatTensor
    B: QuatTensor
    C: QuatTensor
    D: QuatTensor
    E: QuatTensor

    def __post_init__(self):
        A, B, C, D, E = self.A, self.B, self.C, self.D, self.E
        if not (A.left == C.left == E.left):
            raise DimensionMismatch(f"left shapes of A, C, E differ: {A.left}, {C.left}, {E.left}")
        if not (B.right == D.right == E.right):
            raise DimensionMismatch(f"right shapes of B, D, E differ: {B.right}, {D.right}, {E.right}")

    @property
    def x_shape(self):
        return self.A.right, self.B.left

    @property
    def y_shape(self):
        return self.C.right, self.D.left

    def residual(self, X: QuatTensor, Y: QuatTensor) -> float:
        """``||A*X*B + C*Y*D - E||_F / max(1, ||E||_F)``."""
        lhs = self.A @ X @ self.B + self.C @ Y @ self.D
        return frobenius_norm(lhs - self.E) / _scale(self.E)


@dataclass(frozen=True)
class FreeParameters:
    """Arbitrary tensors ``U1..U5`` of the general solution; ``None`` means zero.

    ``U1``, ``U2``, ``U3`` have the shape of ``Y``; ``U4``, ``U5`` that of ``X``.
    """

    U1: QuatTensor | None = None
    U2: QuatTensor | None = None
    U3: QuatTensor | None = None
    U4: QuatTensor | None = None
    U5: QuatTensor | None = None

    def resolved(self, problem: SylvesterProblem):
        xs, ys = problem.x_shape, problem.y_shape
        out = []
        for name, shape in (("U1", ys), ("U2", ys), ("U3", ys), ("U4", xs), ("U5", xs)):
            u = getattr(self, name)
            if u is None:
                u = _zeros_like_shape(*shape)
            elif (u.left, u.right) != shape:
                raise DimensionMismatch(f"{name} must be {shape[0]}|{shape[1]}, got {u.left}|{u.right}")
            out.append(u)
        return out

    @classmethod
    def random(cls, problem: SylvesterProblem, rng, low=-1.0, high=1.0) -> "FreeParameters":
        xs, ys = problem.x_shape, problem.y_shape
        return cls(*(QuatTensor.random(*s, rng, low, high) for s in (ys, ys, ys, xs, xs)))


class SolverIntermediates:
    """Pseudo-inverses and projectors shared by the conditions and the solution.

    ``P = R_A * C``, ``Q = D * L_B`` and ``S = C * L_P``.
    """

    def __init__(self, problem: SylvesterProblem, tol_rank=None):
        A, B, C, D = problem.A, problem.B, problem.C, problem.D
        self.a = _Inverse(A, tol_rank=tol_rank)
        self.b = _Inverse(B, tol_rank=tol_rank)
        self.c = _Inverse(C, tol_rank=tol_rank)
        self.d = _Inverse(D, tol_rank=tol_rank)
        self.P = self.a.R @ C
        self.Q = D @ self.b.L
        self.p = _Inverse(self.P, scale=self.c.sigma_max, tol_rank=tol_rank)
        self.q = _Inverse(self.Q, scale=self.d.sigma_max, tol_rank=tol_rank)
        self.S = C @ self.p.L
        self.s = _Inverse(self.S, scale=self.c.sigma_max, tol_rank=tol_rank)


@dataclass(frozen=True)
class SolverReport:
    """Outcome of a solve: condition residuals, verdict and, if solvable, the solution.

    ``residuals`` maps a formula label to its Frobenius norm divided by
    ``max(1, ||E||_F)``.  ``X`` and ``Y`` are ``None`` when the problem is
    not solvable or the solver has no such unknown.
    """

    residuals: dict
    solvable: bool
    tol: float
    X: QuatTensor | None = None
    Y: QuatTensor | None = None
    equation_residual: float | None = None
    extra: dict = field(default_factory=dict)

    def violated(self):
        return [k for k, v in self.residuals.items() if v > self.tol]


def _conditions(problem: SylvesterProblem, m: SolverIntermediates):
    E = problem.E
    s = _scale(E)
    return {
        COND_RP_RA_E: frobenius_norm(m.p.R @ m.a.R @ E) / s,
        COND_E_LB_LQ: frobenius_norm(E @ m.b.L @ m.q.L) / s,
        COND_RA_E_LD: frobenius_norm(m.a.R @ E @ m.d.L) / s,
        COND_RC_E_LB: frobenius_norm(m.c.R @ E @ m.b.L) / s,
    }


def check_consistency(problem: SylvesterProblem, tol=DEFAULT_TOL, tol_rank=None) -> SolverReport:
    """Evaluate the four solvability conditions without building a solution."""
    m = SolverIntermediates(problem, tol_rank)
    res = _conditions(problem, m)
    return SolverReport(residuals=res, solvable=all(v <= tol for v in res.values()), tol=tol)


def _assemble(problem: SylvesterProblem, m: SolverIntermediates, params: FreeParameters):
    E, C, D = problem.E, problem.C, problem.D
    U1, U2, U3, U4, U5 = params.resolved(problem)
    Ap, Bp, Cp, Dp = m.a.pinv, m.b.pinv, m.c.pinv, m.d.pinv
    Pp, Qp, Sp, S = m.p.pinv, m.q.pinv, m.s.pinv, m.S
    X = (
        Ap @ E @ Bp
        - Ap @ C @ Pp @ E @ Bp
        - Ap @ S @ Cp @ E @ Qp @ D @ Bp
        - Ap @ S @ U2 @ m.q.R @ D @ Bp
        + m.a.L @ U4
        + U5 @ m.b.R
    )
    Y = (
        Pp @ E @ Dp
        + Sp @ S @ Cp @ E @ Qp
        + m.p.L @ m.s.L @ U1
        + m.p.L @ U2 @ m.q.R
        + U3 @ m.d.R
    )
    return X, Y


def solve(problem: SylvesterProblem, params: FreeParameters | None = None, tol=DEFAULT_TOL,
          tol_rank=None, intermediates: SolverIntermediates | None = None) -> SolverReport:
    """General solution of ``A*X*B + C*Y*D = E``.

    Pass ``intermediates`` to reuse the pseudo-inverses across several
    draws of the free parameters.

    Raises
    ------
    Inconsistent
        If any condition residual exceeds ``tol``; the exception carries
        the report so callers can see which condition failed.
    """
    m = intermediates or SolverIntermediates(problem, tol_rank)
    res = _conditions(problem, m)
    if not all(v <= tol for v in res.values()):
        report = SolverReport(residuals=res, solvable=False, tol=tol)
        raise Inconsistent(f"conditions violated: {', '.join(report.violated())}", report)
    X, Y = _assemble(problem, m, params or FreeParameters())
    return SolverReport(res, True, tol, X, Y, problem.residual(X, Y))


def recover_particular(problem: SylvesterProblem, X0: QuatTensor, Y0: QuatTensor,
                       tol=DEFAULT_TOL, tol_rank=None):
    """Reproduce a known solution from the general formula.

    Uses ``U1 = Y0*Q*Q^+``, ``U2 = Y0*D*D^+``, ``U3 = Y0``,
    ``U4 = X0*B*B^+``, ``U5 = X0``.

    Raises
    ------
    NotASolution
        If ``(X0, Y0)`` does not satisfy the equation within ``tol``.
    """
    if (X0.left, X0.right) != problem.x_shape or (Y0.left, Y0.right) != problem.y_shape:
        raise DimensionMismatch("X0 or Y0 has the wrong shape")
    r = problem.residual(X0, Y0)
    if r > tol:
        raise NotASolution(f"given pair leaves relative residual {r:.3e} > {tol:.3e}")
    m = SolverIntermediates(problem, tol_rank)
    params = FreeParameters(
        U1=Y0 @ m.Q @ m.q.pinv,
        U2=Y0 @ problem.D @ m.d.pinv,
        U3=Y0,
        U4=X0 @ problem.B @ m.b.pinv,
        U5=X0,
    )
    return _assemble(problem, m, params)


# -- special cases ---------------------------------------------------------

def solve_AXB(A, B, E, U=None, V=None, tol=DEFAULT_TOL, tol_rank=None) -> SolverReport:
    """``A*X*B = E``: ``X = A^+ E B^+ + L_A U + V R_B``.

    Solvable iff ``R_A E = 0`` and ``E L_B = 0``.  ``U`` and ``V`` have the
    shape of ``X`` (``A.right | B.left``) and default to zero.
    """
    if A.left != E.left or B.right != E.right:
        raise DimensionMismatch("A*X*B = E: shapes are not conformable")
    xs = (A.right, B.left)
    for name, u in (("U", U), ("V", V)):
        if u is not None and (u.left, u.right) != xs:
            raise DimensionMismatch(f"{name} must be {xs[0]}|{xs[1]}")
    a = _Inverse(A, tol_rank=tol_rank)
    b = _Inverse(B, tol_rank=tol_rank)
    s = _scale(E)
    res = {"R_A*E": frobenius_norm(a.R @ E) / s, "E*L_B": frobenius_norm(E @ b.L) / s}
    if not all(v <= tol for v in res.values()):
        report = SolverReport(res, False, tol)
        raise Inconsistent(f"conditions violated: {', '.join(report.violated())}", report)
    X = a.pinv @ E @ b.pinv
    if U is not None:
        X = X + a.L @ U
    if V is not None:
        X = X + V @ b.R
    eq = frobenius_norm(A @ X @ B - E) / s
    return SolverReport(res, True, tol, X, None, eq)


def solve_AX_YD(A, D, E, U1=None, U2=None, U3=None, tol=DEFAULT_TOL, tol_rank=None) -> SolverReport:
    """``A*X + Y*D = E``.

    Solvable iff ``R_A E L_D = 0``; then
    ``X = A^+ E - U1 D + L_A U2`` and ``Y = R_A E D^+ + A U1 + U3 R_D``
    with ``U1: J|H``, ``U2: J|L``, ``U3: I|H`` (all zero by default).
    """
    if A.left != E.left or D.right != E.right:
        raise DimensionMismatch("A*X + Y*D = E: shapes are not conformable")
    shapes = {"U1": (A.right, D.left), "U2": (A.right, E.right), "U3": (E.left, D.left)}
    given = {"U1": U1, "U2": U2, "U3": U3}
    for name, u in given.items():
        if u is not None and (u.left, u.right) != shapes[name]:
            raise DimensionMismatch(f"{name} must be {shapes[name][0]}|{shapes[name][1]}")
    a = _Inverse(A, tol_rank=tol_rank)
    d = _Inverse(D, tol_rank=tol_rank)
    s = _scale(E)
    res = {"R_A*E*L_D": frobenius_norm(a.R @ E @ d.L) / s}
    if res["R_A*E*L_D"] > tol:
        raise Inconsistent("condition violated: R_A*E*L_D", SolverReport(res, False, tol))
    X = a.pinv @ E
    Y = a.R @ E @ d.pinv
    if U1 is not None:
        X = X - U1 @ D
        Y = Y + A @ U1
    if U2 is not None:
        X = X + a.L @ U2
    if U3 is not None:
        Y = Y + U3 @ d.R
    eq = frobenius_norm(A @ X + Y @ D - E) / s
    return SolverReport(res, True, tol, X, Y, eq)


def _eta_symmetric_input(E, eta, tol):
    if not E.is_square:
        raise DimensionMismatch(f"E must be square, got {E.left}|{E.right}")
    Eh = eta_conj_transpose(E, eta)
    asym = frobenius_norm(E - Eh) / _scale(E)
    if asym > tol:
        raise NotEtaHermitian(f"E is not {eta}-Hermitian: relative asymmetry {asym:.3e}")
    if asym == 0.0:
        return E
    return (E + Eh) * 0.5


def _eta_symmetrize(T, eta):
    return (T + eta_conj_transpose(T, eta)) * 0.5


def solve_eta(A, C, E, eta, params: FreeParameters | None = None, tol=DEFAULT_TOL,
              tol_rank=None) -> SolverReport:
    """eta-Hermitian ``X``, ``Y`` with ``A*X*A^{eta*} + C*Y*C^{eta*} = E``.

    The general solver is applied with ``B = A^{eta*}`` and ``D = C^{eta*}``
    and its output ``(X^, Y^)`` symmetrized as ``(T + T^{eta*}) / 2``.  For
    an eta-Hermitian ``E`` the four general conditions collapse to
    ``R_P R_A E = 0`` and ``R_A E (R_C)^{eta*} = 0`` (the other two are
    their eta-conjugates); all four are reported under their specialized
    names.

    Raises
    ------
    NotEtaHermitian
        If ``||E - E^{eta*}||_F / max(1, ||E||_F) > tol``.  A smaller
        nonzero asymmetry is removed by symmetrizing ``E`` first.
    Inconsistent
    """
    eta = check_eta(eta)
    E = _eta_symmetric_input(E, eta, tol)
    problem = SylvesterProblem(A, eta_conj_transpose(A, eta), C, eta_conj_transpose(C, eta), E)
    m = SolverIntermediates(problem, tol_rank)
    general = _conditions(problem, m)
    res = {
        "R_P*R_A*E": general[COND_RP_RA_E],
        "E*(R_A)^eta**(R_P)^eta*": general[COND_E_LB_LQ],
        "R_A*E*(R_C)^eta*": general[COND_RA_E_LD],
        "R_C*E*(R_A)^eta*": general[COND_RC_E_LB],
    }
    if not all(v <= tol for v in res.values()):
        report = SolverReport(res, False, tol)
        raise Inconsistent(f"conditions violated: {', '.join(report.violated())}", report)
    Xh, Yh = _assemble(problem, m, params or FreeParameters())
    X = _eta_symmetrize(Xh, eta)
    Y = _eta_symmetrize(Yh, eta)
    extra = {
        "X_eta_asymmetry": frobenius_norm(X - eta_conj_transpose(X, eta)) / max(1.0, frobenius_norm(X)),
        "Y_eta_asymmetry": frobenius_norm(Y - eta_conj_transpose(Y, eta)) / max(1.0, frobenius_norm(Y)),
    }
    return SolverReport(res, True, tol, X, Y, problem.residual(X, Y), extra)


def solve_eta_single(A, E, eta, U=None, tol=DEFAULT_TOL, tol_rank=None) -> SolverReport:
    """eta-Hermitian ``X`` with ``A*X*A^{eta*} = E``.

    Solvable iff ``R_A E = 0``; then
    ``X = A^+ E (A^+)^{eta*} + L_A U + U^{eta*} (L_A)^{eta*}`` for any
    ``U`` of shape ``A.right | A.right``.
    """
    eta = check_eta(eta)
    if A.left != E.left:
        raise DimensionMismatch("A*X*A^{eta*} = E: shapes are not conformable")
    E = _eta_symmetric_input(E, eta, tol)
    if U is not None and (U.left, U.right) != (A.right, A.right):
        raise DimensionMismatch(f"U must be {A.right}|{A.right}")
    a = _Inverse(A, tol_rank=tol_rank)
    s = _scale(E)
    res = {"R_A*E": frobenius_norm(a.R @ E) / s}
    if res["R_A*E"] > tol:
        raise Inconsistent("condition violated: R_A*E", SolverReport(res, False, tol))
    X = a.pinv @ E @ eta_conj_transpose(a.pinv, eta)
    if U is not None:
        LU = a.L @ U
        X = X + LU + eta_conj_transpose(LU, eta)
    eq = frobenius_norm(A @ X @ eta_conj_transpose(A, eta) - E) / s
    extra = {"X_eta_asymmetry": frobenius_norm(X - eta_conj_transpose(X, eta)) / max(1.0, frobenius_norm(X))}
    return SolverReport(res, True, tol, X, None, eq, extra)
