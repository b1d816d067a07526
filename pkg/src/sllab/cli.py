"""Command-line surface.

Subcommands:
    verify  -- run the family/viscosity invariant sweep, emit a JSON report
    figure  -- write the four panel grids (v, u, v-u, f) as CSV files
    delta   -- tabulate the comparison-criterion infimum over caps as CSV
    solve   -- run the 2-D finite-difference solver, emit grid CSV + log

Exit codes: 0 success, 1 computational failure or violation found, 2 usage
error.  Identical flags and seed produce byte-identical outputs.
"""
from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import certificate, fdsolve, viscosity
from .family import Family, diff_many, f_many, u_many, v_many
from .slop import Phase


def _fail_usage(parser, msg: str) -> int:
    parser.print_usage(sys.stderr)
    print(f"error: {msg}", file=sys.stderr)
    return 2


def cmd_verify(args, parser) -> int:
    if not (1 <= args.n <= 3):
        return _fail_usage(parser, "--n must be in 1..3")
    if not (0 <= args.k <= args.n):
        return _fail_usage(parser, f"--k must be in 0..{args.n}")
    if not (1.0 < args.p < 2.0):
        return _fail_usage(parser, "--p must be in (1, 2)")
    if args.grid < 3:
        return _fail_usage(parser, "--grid must be >= 3")
    fam = Family(args.n, args.k, args.p)
    report = viscosity.verify_family(fam, grid=args.grid, seed=args.seed)
    text = report.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report.passed else 1


def _figure_grids(fam: Family, grid: int):
    axis = np.linspace(-1.0, 1.0, grid)
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    pts = np.stack([gx.ravel(), gy.ravel()], axis=-1)
    shape = (grid, grid)
    return {
        "vfig.csv": v_many(fam, pts).reshape(shape),
        "ufig.csv": u_many(fam, pts).reshape(shape),
        "vsubufig.csv": diff_many(fam, pts).reshape(shape),
        "phasefig.csv": f_many(fam, pts).reshape(shape),
    }


def cmd_figure(args, parser) -> int:
    if args.grid < 17:
        return _fail_usage(parser, "--grid must be >= 17")
    fam = Family(2, 1, args.p)
    os.makedirs(args.out, exist_ok=True)
    for name, values in _figure_grids(fam, args.grid).items():
        fdsolve.write_grid_csv(os.path.join(args.out, name), values)
    return 0


def cmd_delta(args, parser) -> int:
    if not (1 <= args.n <= 3):
        return _fail_usage(parser, "--n must be in 1..3")
    try:
        theta = Phase(args.theta, args.n)
    except ValueError as exc:
        return _fail_usage(parser, str(exc))
    rows = ["cap,theta,tau,delta"]
    failed = False
    for cap in args.caps:
        try:
            q = certificate.DeltaQuery(args.n, theta, args.tau, cap,
                                       resolution=args.resolution)
            value = "%.12g" % certificate.delta(q)
        except (certificate.InfeasibleQueryError, ValueError):
            value = "infeasible"
            failed = True
        rows.append("%.12g,%.12g,%.12g,%s" % (cap, args.theta, args.tau, value))
    text = "\n".join(rows)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 1 if failed else 0


def _parse_problem(spec: str):
    if spec == "radial32":
        return fdsolve.radial_problem()
    if spec.startswith("constant:"):
        theta = float(spec.split(":", 1)[1])
        if abs(theta) >= math.pi:
            raise ValueError("constant phase must lie in (-pi, pi)")
        return fdsolve.constant_problem(theta)
    if spec.startswith("counterexample:"):
        k = int(spec.split(":", 1)[1])
        if not 0 <= k <= 2:
            raise ValueError("counterexample index must be in 0..2")
        return fdsolve.counterexample_problem(k)
    raise ValueError(f"unknown problem {spec!r}")


def cmd_solve(args, parser) -> int:
    try:
        prob = _parse_problem(args.problem)
    except ValueError as exc:
        return _fail_usage(parser, str(exc))
    if args.m < 5 or args.m % 2 == 0:
        return _fail_usage(parser, "--m must be odd and >= 5")
    log_path = os.path.splitext(args.out)[0] + ".log"
    try:
        with open(log_path, "w") as lh:
            result = fdsolve.solve(prob, args.m, tol=args.tol,
                                   max_iters=args.max_iters,
                                   log=lambda it, r: lh.write("%d,%.17g\n" % (it, r)))
    except fdsolve.SolverFailureError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 1
    fdsolve.write_grid_csv(args.out, result.grid.values)
    status = "converged" if result.converged else "max-iters"
    print(f"{status} iterations={result.iterations} "
          f"residual={result.achieved_residual:.6e}")
    if prob.exact is not None:
        x, y = result.grid.meshgrid()
        err = float(np.max(np.abs(result.grid.values - prob.exact(x, y))))
        print(f"sup-error vs exact solution: {err:.6e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sllab",
                                     description="arctan-eigenvalue equation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run the invariant sweep for one family")
    pv.add_argument("--n", type=int, required=True)
    pv.add_argument("--k", type=int, required=True)
    pv.add_argument("--p", type=float, default=1.5)
    pv.add_argument("--grid", type=int, default=41)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--out", default=None)

    pf = sub.add_parser("figure", help="write the four panel grids as CSV")
    pf.add_argument("--grid", type=int, default=33)
    pf.add_argument("--p", type=float, default=1.5)
    pf.add_argument("--out", required=True)

    pd = sub.add_parser("delta", help="tabulate the comparison infimum per cap")
    pd.add_argument("--n", type=int, default=2)
    pd.add_argument("--theta", type=float, required=True)
    pd.add_argument("--tau", type=float, default=1.0)
    pd.add_argument("--caps", type=lambda s: [float(c) for c in s.split(",")],
                    default=[10.0, 100.0, 1000.0, 10000.0])
    pd.add_argument("--resolution", type=int, default=2000)
    pd.add_argument("--out", default=None)

    ps = sub.add_parser("solve", help="run the 2-D finite-difference solver")
    ps.add_argument("--problem", required=True,
                    help="radial32 | constant:<theta> | counterexample:<k>")
    ps.add_argument("--m", type=int, default=33)
    ps.add_argument("--tol", type=float, default=1e-6)
    ps.add_argument("--max-iters", type=int, default=200_000)
    ps.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"verify": cmd_verify, "figure": cmd_figure,
                "delta": cmd_delta, "solve": cmd_solve}
    return handlers[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
