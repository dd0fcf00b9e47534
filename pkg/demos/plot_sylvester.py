"""
Two-sided Sylvester tensor equation
===================================

Solve ``A * X * B + C * Y * D = E`` for quaternion tensors ``X`` and ``Y``.
The right-hand side is planted from a known pair, so the equation is
consistent; a perturbation outside the range of ``R_P * R_A`` breaks it.
"""

import numpy as np

from qtensor import Inconsistent, QuatTensor
from qtensor.sylvester import (
    FreeParameters,
    SolverIntermediates,
    SylvesterProblem,
    recover_particular,
    solve,
    solve_eta,
)

rng = np.random.default_rng(1)


def low_rank(left, right, r):
    return QuatTensor.random(left, (r,), rng) @ QuatTensor.random((r,), right, rng)


A, C = low_rank((2, 2), (3,), 1), low_rank((2, 2), (2,), 1)
B, D = low_rank((2,), (3, 2), 1), low_rank((2, 2), (3, 2), 2)
X0 = QuatTensor.random((3,), (2,), rng)
Y0 = QuatTensor.random((2,), (2, 2), rng)
problem = SylvesterProblem(A, B, C, D, A @ X0 @ B + C @ Y0 @ D)

rep = solve(problem)
print("conditions:", {k: f"{v:.1e}" for k, v in rep.residuals.items()})
print("equation residual:", rep.equation_residual)

################################################
# Free parameters
# ---------------
# Any ``U1..U5`` give another solution.

m = SolverIntermediates(problem)
for _ in range(3):
    u = FreeParameters.random(problem, rng, -10.0, 10.0)
    print("  residual with random U:", solve(problem, u, intermediates=m).equation_residual)

X, Y = recover_particular(problem, X0, Y0)
print("planted pair recovered:", (X - X0).norm(), (Y - Y0).norm())

################################################
# An inconsistent right-hand side
# -------------------------------

W = m.p.R @ m.a.R @ QuatTensor.random((2, 2), (3, 2), rng)
bad = SylvesterProblem(A, B, C, D, problem.E + W)
try:
    solve(bad)
except Inconsistent as exc:
    print("rejected:", exc)

################################################
# eta-Hermitian solutions
# -----------------------

X0 = QuatTensor.random((3,), (3,), rng)
Y0 = QuatTensor.random((2,), (2,), rng)
X0, Y0 = (X0 + X0.eta_H("i")) * 0.5, (Y0 + Y0.eta_H("i")) * 0.5
E = A @ X0 @ A.eta_H("i") + C @ Y0 @ C.eta_H("i")
rep = solve_eta(A, C, E, "i")
print("equation residual:", rep.equation_residual)
print("X i-Hermitian:", (rep.X - rep.X.eta_H("i")).norm() == 0.0)
