"""Command-line front end: ``qtensor <command> ...``.

Every command reads and writes QTEN files (see :mod:`qtensor.qten`) and
writes a JSON report next to its primary output, named
``<primary output>.report``.

Exit codes::

    0  success
    1  usage error
    2  equation inconsistent (report lists the condition residuals)
    3  malformed or unreadable input file
    4  dimension mismatch
    5  structural precondition failed (input not eta-Hermitian)
    6  iteration cap hit in a factorization kernel

The tolerance for condition and structure checks defaults to 1e-10, or
to ``$QTENSOR_TOL`` when set; ``--tol`` overrides both.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from math import prod

import numpy as np

from . import qten
from . import quat_tensor as qt
from . import sylvester as syl
from .errors import (
    ConvergenceFailure,
    DimensionMismatch,
    FormatError,
    Inconsistent,
    IndexOutOfRange,
    NotEtaHermitian,
    QTensorError,
)
from .quat_matrix import QuatMatrix, matmul
from .tensor_index import as_shape, flatten, unflatten

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONSISTENT = 2
EXIT_FORMAT = 3
EXIT_DIMENSION = 4
EXIT_STRUCTURE = 5
EXIT_CONVERGENCE = 6

DEFAULT_TOL = 1e-10
PRNG_NAME = "pcg64-v1"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _shape_arg(text):
    try:
        return tuple(int(p) for p in text.replace("x", ",").split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad shape {text!r}; use e.g. 2,3") from None


def _resolve_tol(args):
    if args.tol is not None:
        return args.tol
    env = os.environ.get("QTENSOR_TOL")
    if env:
        try:
            return float(env)
        except ValueError:
            raise _UsageError(f"QTENSOR_TOL is not a number: {env!r}") from None
    return DEFAULT_TOL


def _describe(path, t):
    return {"path": path, "left_shape": list(t.left), "right_shape": list(t.right)}


def _positions(pos):
    return [[list(p), list(q)] for p, q in pos]


def _write_report(path, report, started, args):
    if args.timings:
        report["timings"] = {"total_seconds": time.perf_counter() - started}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")


def _rel(x, ref):
    return qt.frobenius_norm(x) / max(1.0, qt.frobenius_norm(ref))


# -- random instances ------------------------------------------------------

def generate(left, right, seed, rank=None, eta=None) -> qt.QuatTensor:
    """Seeded random tensor.

    Components come from ``numpy.random.Generator(PCG64(seed))`` uniform on
    ``[-1, 1)``.  Without ``rank`` the draws fill a ``(n_entries, 4)`` block
    in QTEN file order.  With ``rank`` a ``(prod(left), rank)`` factor and a
    ``(rank, prod(right))`` factor are drawn in that order (each row-major,
    components last) and multiplied.  With ``eta`` the result is replaced by
    ``(T + T^{eta*}) / 2``.
    """
    left, right = as_shape(left), as_shape(right)
    rng = np.random.Generator(np.random.PCG64(seed))
    rows, cols = prod(left), prod(right)
    if rank is None:
        flat = rng.uniform(-1.0, 1.0, (rows * cols, 4))
        m = QuatMatrix(np.transpose(flat.reshape(cols, rows, 4), (1, 0, 2)))
    else:
        if rank < 0:
            raise DimensionMismatch("rank must be nonnegative")
        g = QuatMatrix(rng.uniform(-1.0, 1.0, (rows, rank, 4))) if rank else QuatMatrix.zeros(rows, 1)
        h = QuatMatrix(rng.uniform(-1.0, 1.0, (rank, cols, 4))) if rank else QuatMatrix.zeros(1, cols)
        m = matmul(g, h)
    t = unflatten(m, left, right)
    if eta is not None:
        if left != right:
            raise DimensionMismatch("--eta-hermitian needs equal left and right shapes")
        t = (t + qt.eta_conj_transpose(t, eta)) * 0.5
    return t


# -- commands --------------------------------------------------------------

def cmd_flatten(args, started):
    t = qten.read(args.input)
    m = flatten(t)
    out = unflatten(m, (m.rows,), (m.cols,))
    qten.write(args.output, out)
    _write_report(args.output + ".report", {
        "command": "flatten",
        "inputs": {"tensor": _describe(args.input, t)},
        "outputs": {"matrix": args.output},
        "rows": m.rows,
        "cols": m.cols,
    }, started, args)
    return EXIT_OK


def cmd_unflatten(args, started):
    t = qten.read(args.input)
    out = qten.reshape(t, as_shape(args.left), as_shape(args.right))
    qten.write(args.output, out)
    _write_report(args.output + ".report", {
        "command": "unflatten",
        "inputs": {"matrix": _describe(args.input, t)},
        "outputs": {"tensor": args.output},
        "left_shape": list(out.left),
        "right_shape": list(out.right),
    }, started, args)
    return EXIT_OK


def cmd_svd(args, started):
    tol = _resolve_tol(args)
    a = qten.read(args.input)
    f = qt.tensor_svd(a, args.tol_rank, ascending=args.ascending)
    qten.write(args.out_u, f.U)
    qten.write(args.out_b, f.B)
    qten.write(args.out_v, f.V)
    residual = _rel(f.reconstruct() - a, a)
    _write_report(args.out_u + ".report", {
        "command": "svd",
        "inputs": {"A": _describe(args.input, a)},
        "outputs": {"U": args.out_u, "B": args.out_b, "V": args.out_v},
        "tol": tol,
        "rank": f.rank,
        "singvals": f.singvals.tolist(),
        "positions": _positions(f.positions),
        "residuals": {"||A - U*B*V^*||/max(1,||A||)": residual},
        "residual_ok": residual <= tol,
    }, started, args)
    return EXIT_OK


def cmd_pinv(args, started):
    tol = _resolve_tol(args)
    a = qten.read(args.input)
    f = qt.tensor_svd(a, args.tol_rank)
    x = f.pseudo_inverse()
    qten.write(args.output, x)
    scale = max(1.0, qt.frobenius_norm(a), qt.frobenius_norm(x))
    p1, p2, p3, p4 = (v / scale for v in qt.penrose_residuals(a, x))
    _write_report(args.output + ".report", {
        "command": "pinv",
        "inputs": {"A": _describe(args.input, a)},
        "outputs": {"A+": args.output},
        "tol": tol,
        "rank": f.rank,
        "singvals": f.singvals.tolist(),
        "residuals": {
            "||A*X*A - A||/s": p1,
            "||X*A*X - X||/s": p2,
            "||(A*X)^* - A*X||/s": p3,
            "||(X*A)^* - X*A||/s": p4,
        },
        "residual_scale": "s = max(1, ||A||, ||X||)",
        "residual_ok": max(p1, p2, p3, p4) <= tol,
    }, started, args)
    return EXIT_OK


def cmd_rankdec(args, started):
    tol = _resolve_tol(args)
    a = qten.read(args.input)
    d = qt.tensor_rank_decomposition(a, args.tol_rank)
    qten.write(args.out_p, d.P)
    qten.write(args.out_b, d.B)
    qten.write(args.out_q, d.Q)
    residual = _rel(d.P @ d.B @ d.Q - a, a)
    _write_report(args.out_p + ".report", {
        "command": "rankdec",
        "inputs": {"A": _describe(args.input, a)},
        "outputs": {"P": args.out_p, "B": args.out_b, "Q": args.out_q},
        "tol": tol,
        "rank": d.rank,
        "positions": _positions(qt.diagonal_positions(d.rank, a.left, a.right)),
        "residuals": {"||A - P*B*Q||/max(1,||A||)": residual},
        "residual_ok": residual <= tol,
    }, started, args)
    return EXIT_OK


def cmd_etadec(args, started):
    tol = _resolve_tol(args)
    a = qten.read(args.input)
    d = qt.tensor_eta_decomposition(a, args.eta, args.tol_rank, ascending=args.ascending, tol=tol)
    qten.write(args.out_u, d.U)
    qten.write(args.out_b, d.B)
    residual = _rel(d.reconstruct() - a, a)
    _write_report(args.out_u + ".report", {
        "command": "etadec",
        "inputs": {"A": _describe(args.input, a)},
        "outputs": {"U": args.out_u, "B": args.out_b},
        "eta": d.eta,
        "tol": tol,
        "rank": len(d.sigma),
        "sigma": d.sigma.tolist(),
        "positions": _positions(d.positions),
        "residuals": {"||A - U*B*U^{eta*}||/max(1,||A||)": residual},
        "residual_ok": residual <= tol,
    }, started, args)
    return EXIT_OK


def _optional(path):
    return None if path is None else qten.read(path)


def _solve_report(command, inputs, outputs, tol, report):
    out = {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "tol": tol,
        "residuals": dict(report.residuals),
        "violated": report.violated(),
        "solvable": report.solvable,
    }
    if report.equation_residual is not None:
        out["equation_residual"] = report.equation_residual
    out.update(report.extra)
    return out


def cmd_solve(args, started):
    tol = _resolve_tol(args)
    paths = {"A": args.A, "B": args.B, "C": args.C, "D": args.D, "E": args.E}
    ts = {k: qten.read(p) for k, p in paths.items()}
    inputs = {k: _describe(paths[k], ts[k]) for k in paths}
    problem = syl.SylvesterProblem(**ts)
    params = syl.FreeParameters(*(_optional(p) for p in (args.u1, args.u2, args.u3, args.u4, args.u5)))
    outputs = {"X": args.out_x, "Y": args.out_y}
    try:
        report = syl.solve(problem, params, tol, args.tol_rank)
    except Inconsistent as exc:
        _write_report(args.out_x + ".report", _solve_report("solve", inputs, outputs, tol, exc.report),
                      started, args)
        raise
    qten.write(args.out_x, report.X)
    qten.write(args.out_y, report.Y)
    _write_report(args.out_x + ".report", _solve_report("solve", inputs, outputs, tol, report), started, args)
    return EXIT_OK


def cmd_solve_eta(args, started):
    tol = _resolve_tol(args)
    paths = {"A": args.A, "C": args.C, "E": args.E}
    ts = {k: qten.read(p) for k, p in paths.items()}
    inputs = {k: _describe(paths[k], ts[k]) for k in paths}
    outputs = {"X": args.out_x, "Y": args.out_y}
    try:
        report = syl.solve_eta(ts["A"], ts["C"], ts["E"], args.eta, tol=tol, tol_rank=args.tol_rank)
    except Inconsistent as exc:
        _write_report(args.out_x + ".report", _solve_report("solve-eta", inputs, outputs, tol, exc.report),
                      started, args)
        raise
    qten.write(args.out_x, report.X)
    qten.write(args.out_y, report.Y)
    rep = _solve_report("solve-eta", inputs, outputs, tol, report)
    rep["eta"] = args.eta
    _write_report(args.out_x + ".report", rep, started, args)
    return EXIT_OK


def cmd_gen(args, started):
    t = generate(args.left, args.right, args.seed, args.rank, args.eta_hermitian)
    qten.write(args.out, t)
    _write_report(args.out + ".report", {
        "command": "gen",
        "prng": PRNG_NAME,
        "seed": args.seed,
        "left_shape": list(t.left),
        "right_shape": list(t.right),
        "rank": args.rank,
        "eta_hermitian": args.eta_hermitian,
        "outputs": {"tensor": args.out},
    }, started, args)
    return EXIT_OK


# -- parser ----------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="qtensor", description="Quaternion tensor decompositions and Sylvester solvers.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, rank_tol=True):
        p.add_argument("--tol", type=float, default=None,
                       help="tolerance for residual checks (default 1e-10 or $QTENSOR_TOL)")
        if rank_tol:
            p.add_argument("--tol-rank", type=float, default=None,
                           help="relative singular-value cutoff (default 1e-12*max(rows, cols))")
        p.add_argument("--timings", action="store_true", help="add wall-clock timings to the report")

    p = sub.add_parser("flatten", help="write the matrix image of a tensor")
    p.add_argument("input")
    p.add_argument("output")
    common(p, rank_tol=False)
    p.set_defaults(func=cmd_flatten)

    p = sub.add_parser("unflatten", help="reinterpret a matrix file under new left/right shapes")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--left", type=_shape_arg, required=True)
    p.add_argument("--right", type=_shape_arg, required=True)
    common(p, rank_tol=False)
    p.set_defaults(func=cmd_unflatten)

    p = sub.add_parser("svd", help="tensor SVD A = U*B*V^*")
    p.add_argument("input")
    p.add_argument("--out-u", required=True)
    p.add_argument("--out-b", required=True)
    p.add_argument("--out-v", required=True)
    p.add_argument("--ascending", action="store_true", help="list singular values in increasing order")
    common(p)
    p.set_defaults(func=cmd_svd)

    p = sub.add_parser("pinv", help="Moore-Penrose inverse")
    p.add_argument("input")
    p.add_argument("output")
    common(p)
    p.set_defaults(func=cmd_pinv)

    p = sub.add_parser("rankdec", help="rank decomposition A = P*B*Q")
    p.add_argument("input")
    p.add_argument("--out-p", required=True)
    p.add_argument("--out-b", required=True)
    p.add_argument("--out-q", required=True)
    common(p)
    p.set_defaults(func=cmd_rankdec)

    p = sub.add_parser("etadec", help="eta-Hermitian decomposition A = U*B*U^{eta*}")
    p.add_argument("input")
    p.add_argument("--eta", choices=["i", "j", "k"], required=True)
    p.add_argument("--out-u", required=True)
    p.add_argument("--out-b", required=True)
    p.add_argument("--ascending", action="store_true")
    common(p)
    p.set_defaults(func=cmd_etadec)

    p = sub.add_parser("solve", help="solve A*X*B + C*Y*D = E")
    for name in "ABCDE":
        p.add_argument(f"--{name}", required=True, metavar="PATH")
    p.add_argument("--out-x", required=True)
    p.add_argument("--out-y", required=True)
    for i in range(1, 6):
        p.add_argument(f"--u{i}", default=None, metavar="PATH", help=f"free parameter U{i} (default zero)")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("solve-eta", help="eta-Hermitian X, Y with A*X*A^{eta*} + C*Y*C^{eta*} = E")
    for name in "ACE":
        p.add_argument(f"--{name}", required=True, metavar="PATH")
    p.add_argument("--eta", choices=["i", "j", "k"], required=True)
    p.add_argument("--out-x", required=True)
    p.add_argument("--out-y", required=True)
    common(p)
    p.set_defaults(func=cmd_solve_eta)

    p = sub.add_parser("gen", help=f"seeded random tensor ({PRNG_NAME})")
    p.add_argument("--left", type=_shape_arg, required=True)
    p.add_argument("--right", type=_shape_arg, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--eta-hermitian", choices=["i", "j", "k"], default=None, metavar="ETA")
    p.add_argument("--out", required=True)
    p.add_argument("--timings", action="store_true")
    p.set_defaults(func=cmd_gen)
    return parser


_EXIT_FOR = (
    (Inconsistent, EXIT_INCONSISTENT),
    (FormatError, EXIT_FORMAT),
    (DimensionMismatch, EXIT_DIMENSION),
    (IndexOutOfRange, EXIT_DIMENSION),
    (NotEtaHermitian, EXIT_STRUCTURE),
    (ConvergenceFailure, EXIT_CONVERGENCE),
)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        return args.func(args, started)
    except _UsageError as exc:
        print(f"qtensor: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QTensorError as exc:
        for kind, code in _EXIT_FOR:
            if isinstance(exc, kind):
                print(f"qtensor {args.command}: {exc}", file=sys.stderr)
                return code
        print(f"qtensor {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"qtensor {args.command}: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
