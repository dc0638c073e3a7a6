"""Command-line entry point: ``matpoafd solve|pinv|bench|compare``.

Exit codes: 0 success, 2 usage error, 3 input error, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bench import ExperimentRecord, emit_records, preset_config, run_experiment, summary_table
from .csvio import read_matrix, write_matrix
from .exceptions import (
    DimensionError,
    InputError,
    MatpoafdError,
    NumericalError,
    PreconditionError,
    SizeLimitError,
)
from .methods import INNER_SOLVERS, METHODS, make_ls_solver, run_method
from .pinv import pinv_one_step, pinv_svd, pinv_two_step
from .poafd import SolveConfig

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3, 4

SOLVE_METHODS = ("poafd", "lsqr", "cgls", "ridge", "pcr", "lasso")
PINV_METHODS = {"two-step": pinv_two_step, "one-step": pinv_one_step, "svd": pinv_svd}
PRESETS = ("fig1", "fig2", "fig3", "fig4-tall", "fig4-flat")


class UsageError(Exception):
    pass


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be a non-negative integer")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _nonneg_float(text):
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matpoafd",
        description="Matrix-POAFD least-squares and pseudo-inverse solvers over CSV files.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="{solve,pinv,bench,compare}")
    sub.required = True

    def io_args(p, out_help):
        p.add_argument("--matrix", required=True, type=Path, help="CSV file holding X (m x n)")
        p.add_argument("--rhs", required=True, type=Path,
                       help="CSV file holding y (m x 1; extra columns are solved one by one)")
        p.add_argument("--out", required=True, type=Path, help=out_help)

    p = sub.add_parser("solve", help="least-squares solve of X w = y",
                       description="Least-squares solve of X w = y; writes w as a CSV column.")
    io_args(p, "output CSV for w")
    p.add_argument("--method", choices=SOLVE_METHODS, default="poafd", help="solver (default: poafd)")
    p.add_argument("--tol", type=_positive_float,
                   help="poafd: zero-column and selection tolerance; lsqr/cgls: stopping tolerance")
    p.add_argument("--max-select", type=_positive_int, help="poafd: cap on selected columns")
    p.add_argument("--lambda", dest="lam", type=_nonneg_float,
                   help="ridge/lasso penalty (ridge default 1e-6 trace(X^T X)/n; lasso default hold-out grid)")
    p.add_argument("--k", type=_nonneg_int, help="pcr: number of components (default: rank)")

    p = sub.add_parser("pinv", help="minimum-norm least-squares solution",
                       description="Minimum-norm least-squares (pseudo-inverse) solution of X w = y.")
    io_args(p, "output CSV for the pseudo-inverse solution")
    p.add_argument("--method", required=True, choices=tuple(PINV_METHODS), help="algorithm")
    p.add_argument("--inner", choices=INNER_SOLVERS, default="poafd",
                   help="LS solver for two-step/one-step (default: poafd)")

    p = sub.add_parser("bench", help="run a benchmark preset",
                       description="Run a benchmark preset and write one CSV row per measurement.")
    p.add_argument("--preset", required=True, choices=PRESETS, help="experiment preset")
    p.add_argument("--seed", type=int, default=0, help="base seed; trial t uses seed + t (default: 0)")
    p.add_argument("--trials", type=_positive_int, help="number of trials (default: preset's)")
    p.add_argument("--out", required=True, type=Path, help="output CSV of records")
    p.add_argument("--summary", action="store_true",
                   help="also print a median table and write it to <out>.summary.txt")
    p.add_argument("--scale", type=_positive_float, default=1.0,
                   help="shrink factor for the long matrix dimension (default: 1.0)")
    p.add_argument("--workers", type=_positive_int, default=1, help="parallel trials (default: 1)")

    p = sub.add_parser("compare", help="run several methods on one problem",
                       description="Run several methods on one problem and write benchmark-format records.")
    io_args(p, "output CSV of records")
    p.add_argument("--methods", required=True,
                   help=f"comma-separated method tags from: {', '.join(METHODS)}")
    return parser


def _load_system(args) -> tuple[np.ndarray, np.ndarray]:
    x = read_matrix(args.matrix)
    ys = read_matrix(args.rhs)
    if ys.shape[0] != x.shape[0]:
        raise InputError(
            f"has {ys.shape[0]} rows but {args.matrix} has {x.shape[0]}",
            path=args.rhs, row=min(ys.shape[0], x.shape[0]) + 1,
        )
    return x, ys


def _cmd_solve(args) -> int:
    x, ys = _load_system(args)
    cfg = SolveConfig()
    if args.tol is not None and args.method == "poafd":
        cfg = SolveConfig(zero_col_tol=args.tol, sel_tol=args.tol)
    if args.max_select is not None:
        cfg = SolveConfig(zero_col_tol=cfg.zero_col_tol, sel_tol=cfg.sel_tol, max_select=args.max_select)
    if args.method == "lasso" and args.lam == 0:
        raise UsageError("--lambda must be positive for lasso")
    ws = []
    for j in range(ys.shape[1]):
        sol = run_method(args.method, x, ys[:, j], cfg=cfg, lam=args.lam, k=args.k,
                         tol=args.tol if args.method in ("lsqr", "cgls") else None)
        ws.append(sol.w)
        print(f"column {j + 1}: method={sol.method} residual={sol.residual_norm:.17g} "
              f"norm={sol.solution_norm:.17g} steps={sol.iterations} converged={str(sol.converged).lower()} "
              f"time_s={sol.wall_time:.6f}")
    write_matrix(args.out, np.column_stack(ws))
    return EXIT_OK


def _cmd_pinv(args) -> int:
    x, ys = _load_system(args)
    fn = PINV_METHODS[args.method]
    ws = []
    for j in range(ys.shape[1]):
        if fn is pinv_svd:
            res = fn(x, ys[:, j])
        else:
            res = fn(x, ys[:, j], make_ls_solver(args.inner))
        ws.append(res.w_dagger)
        print(f"column {j + 1}: method={res.method} residual={res.residual_norm:.17g} "
              f"norm={res.solution_norm:.17g} time_s={res.wall_time:.6f}")
    write_matrix(args.out, np.column_stack(ws))
    return EXIT_OK


def _cmd_bench(args) -> int:
    cfg = preset_config(args.preset, seed=args.seed, trials=args.trials, scale=args.scale)
    if args.workers > 1:
        from dataclasses import replace
        cfg = replace(cfg, workers=args.workers)
    print(f"running {cfg.preset}: {cfg.m}x{cfg.n}, {cfg.trials} trial(s), methods {','.join(cfg.methods)}",
          file=sys.stderr)
    records = run_experiment(cfg)
    emit_records(records, args.out, "csv")
    if args.summary:
        summary_path = args.out.with_name(args.out.name + ".summary.txt")
        emit_records(records, summary_path, "summary")
        print(summary_table(records), end="")
    print(f"wrote {len(records)} records to {args.out}")
    return EXIT_OK


def _cmd_compare(args) -> int:
    names = [s.strip().replace("-", "_") for s in args.methods.split(",") if s.strip()]
    unknown = [s for s in names if s not in METHODS]
    if not names or unknown:
        raise UsageError(f"--methods: unknown or empty method list {unknown or args.methods!r}")
    x, ys = _load_system(args)
    if ys.shape[1] != 1:
        raise InputError(f"compare needs a single rhs column, found {ys.shape[1]}", path=args.rhs, row=1)
    y = ys[:, 0]
    records = []
    for name in names:
        try:
            sol = run_method(name, x, y)
            err, nrm, wall, ok = sol.residual_norm, sol.solution_norm, sol.wall_time, sol.converged
        except NumericalError as exc:
            print(f"{name}: failed ({exc})", file=sys.stderr)
            err, nrm, wall, ok = math.nan, math.nan, 0.0, False
        records.append(ExperimentRecord("compare", name, 0, 0, x.shape[0], x.shape[1], math.nan,
                                        None, err, nrm, wall, ok))
        print(f"{name}: residual={err:.17g} norm={nrm:.17g} time_s={wall:.6f}")
    emit_records(sorted(records, key=ExperimentRecord.sort_key), args.out, "csv")
    return EXIT_OK


COMMANDS = {"solve": _cmd_solve, "pinv": _cmd_pinv, "bench": _cmd_bench, "compare": _cmd_compare}


def run(argv: list[str] | None = None) -> int:
    """Parse ``argv`` and execute; returns the exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"matpoafd {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputError, DimensionError) as exc:
        print(f"matpoafd {args.command}: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalError, SizeLimitError) as exc:
        print(f"matpoafd {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except PreconditionError as exc:
        print(f"matpoafd {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MatpoafdError as exc:
        print(f"matpoafd {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main(argv: list[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
