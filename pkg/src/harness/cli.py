"""
Command line entry point.

    gpdd sweep --config <file> --out <csv> [--plot <svg>]
    gpdd compare --config <file> --out <csv>
    gpdd label-variance --config <file> --out <csv>
    gpdd limits --kernel <id> --c-min <f> --c-max <f> --points <k> --gamma <f>
                (--lambda <f> | --optimal-lambda) --out <csv>
    gpdd optimal (gamma|lambda) --kernel <id> --c <f> (--mu <f> | --gamma <f>)
    gpdd whiten --input <csv> --label <col> --output <csv>
    gpdd augment --input <csv> --mode <mode> --target-d <k> --seed <u64> --output <csv>
    gpdd validate [--suite <name>] [--quick]
    gpdd cvcheck --n <k<=6> --kernel <id> --seed <u64>

Exit codes: 0 success, 1 validation failure, 2 usage or config error,
3 numerical failure.
"""
import argparse
import logging
from dataclasses import asdict
from typing import List, Optional

import numpy as np

from src.config.config import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION_FAILED
from src.data import AUGMENT_MODES, LABEL_NAME, augment, load_csv, save_csv, synth_gaussian, whiten
from src.gp import HyperParams, cv_score, free_energy
from src.harness.config import load_config
from src.harness.emit import emit, write_table
from src.harness.limits import empirical_vs_limit, label_variance_check, limit_curve, max_deviation
from src.harness.sweep import run_sweep
from src.harness.validate import SUITES, run_validation
from src.kernels import LAMBDA_POLICIES, coefficients, gram, kernel_from_lambda_policy, parse_kernel_id
from src.rmt import RmtContext, optimal_gamma
from src.utils.errors import FactorizationFailure, GpddError, GridPointError, NoOptimalLambda
from src.utils.logging_config import setup_logging
from src.utils.utils import format_error

logger = logging.getLogger("gpdd.cli")

CV_MAX_N = 6
CV_TOLERANCE = 1e-8


class UsageError(GpddError, ValueError):
    """Arguments that parse but do not make sense together."""


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not np.isfinite(value) or value <= 0.0:
        raise argparse.ArgumentTypeError(f"must be finite and > 0, got {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be in [0, 2^64), got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpdd",
        description="Gaussian process free energy, predictive losses and their random-matrix limits.",
    )
    parser.add_argument("--workers", type=_positive_int, default=None,
                        help="Worker processes for sweeps (default: GPDD_THREADS or CPU count)")
    parser.add_argument("--log-level", default=None, help="Logging level for the log file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="Monte Carlo sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="CSV output")
    p.add_argument("--plot", default=None, help="SVG output")
    p.add_argument("--x", choices=("d", "c"), default="d", help="Horizontal axis of the plot")

    p = sub.add_parser("compare", help="Empirical free energy next to its limit")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("label-variance", help="Recombine the free energy at other label variances")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--variances", type=_positive_float, nargs="+", default=[0.1, 10.0])

    p = sub.add_parser("limits", help="Limiting free energy along c")
    p.add_argument("--kernel", required=True, type=parse_kernel_id)
    p.add_argument("--c-min", required=True, type=_positive_float)
    p.add_argument("--c-max", required=True, type=_positive_float)
    p.add_argument("--points", required=True, type=_positive_int)
    p.add_argument("--gamma", required=True, type=_positive_float)
    lam = p.add_mutually_exclusive_group(required=True)
    lam.add_argument("--lambda", dest="lam", type=_positive_float)
    lam.add_argument("--optimal-lambda", action="store_true")
    p.add_argument("--policy", choices=LAMBDA_POLICIES, default="plug-in")
    p.add_argument("--out", required=True)

    p = sub.add_parser("optimal", help="Closed-form optimal gamma or lambda")
    p.add_argument("which", choices=("gamma", "lambda"))
    p.add_argument("--kernel", required=True, type=parse_kernel_id)
    p.add_argument("--c", required=True, type=_positive_float)
    given = p.add_mutually_exclusive_group(required=True)
    given.add_argument("--mu", type=_positive_float)
    given.add_argument("--gamma", type=_positive_float)
    p.add_argument("--policy", choices=LAMBDA_POLICIES, default="plug-in")

    p = sub.add_parser("whiten", help="Whiten a CSV dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--label", required=True)
    p.add_argument("--output", required=True)

    p = sub.add_parser("augment", help="Append synthetic columns to a CSV dataset")
    p.add_argument("--input", required=True)
    p.add_argument("--label", default=LABEL_NAME)
    p.add_argument("--mode", required=True, choices=AUGMENT_MODES)
    p.add_argument("--target-d", required=True, type=_positive_int)
    p.add_argument("--seed", required=True, type=_seed)
    p.add_argument("--output", required=True)

    p = sub.add_parser("validate", help="Run the self-check suites")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--quick", action="store_true", help="Skip the Monte Carlo checks")

    p = sub.add_parser("cvcheck", help="Brute-force check that leave-k-out scores sum to the free energy")
    p.add_argument("--n", required=True, type=_positive_int)
    p.add_argument("--kernel", required=True, type=parse_kernel_id)
    p.add_argument("--seed", required=True, type=_seed)
    p.add_argument("--d", type=_positive_int, default=3)
    p.add_argument("--lambda", dest="lam", type=_positive_float, default=1.0)
    p.add_argument("--gamma", type=_positive_float, default=1.0)
    return parser


def _rows(items) -> List[dict]:
    rows = []
    for item in items:
        row = asdict(item)
        if "lam" in row:
            row["lambda"] = row.pop("lam")
        rows.append(row)
    return rows


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    records = run_sweep(cfg, workers=args.workers)
    emit(records, args.out, args.plot, x=args.x)
    failed = sum(1 for r in records if r.error)
    print(f"{len(records)} grid point(s) written to {args.out}" + (f" ({failed} with errors)" if failed else ""))
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = load_config(args.config)
    rows = empirical_vs_limit(cfg, workers=args.workers)
    columns = ["n", "d", "c", "gamma", "lambda", "empirical", "ci_half_width", "limit", "abs_dev"]
    table = _rows(rows)
    for row, item in zip(table, rows):
        row["abs_dev"] = item.abs_dev
    write_table(table, columns, args.out)
    print(f"max |empirical - limit| = {max_deviation(rows):.6g}")
    return EXIT_OK


def cmd_label_variance(args) -> int:
    cfg = load_config(args.config)
    rows = label_variance_check(cfg, variances=args.variances, workers=args.workers)
    columns = ["sigma2", "n", "d", "gamma", "lambda", "empirical", "ci_half_width", "recombined", "within_ci"]
    table = _rows(rows)
    for row, item in zip(table, rows):
        row["within_ci"] = item.within_ci
    write_table(table, columns, args.out)
    outside = sum(1 for r in rows if not r.within_ci)
    print(f"{len(rows) - outside}/{len(rows)} recombined values within 2 CI half-widths")
    return EXIT_OK


def cmd_limits(args) -> int:
    if args.c_max < args.c_min:
        raise UsageError(f"--c-max {args.c_max:g} is below --c-min {args.c_min:g}")
    c_values = np.linspace(args.c_min, args.c_max, args.points)
    lam = None if args.optimal_lambda else args.lam
    curve = limit_curve(args.kernel, c_values, args.gamma, lam=lam, policy=args.policy)
    write_table(_rows(curve), ["c", "gamma", "lambda", "alpha", "beta", "free_energy", "error"], args.out)
    print(f"{len(curve)} point(s) written to {args.out}")
    return EXIT_OK


def cmd_optimal(args) -> int:
    if args.which == "gamma":
        if args.mu is None:
            raise UsageError("optimal gamma needs --mu")
        alpha, beta = coefficients(args.kernel, 1.0)
        value = optimal_gamma(args.mu, RmtContext(alpha=alpha, c=args.c, beta=beta))
    else:
        if args.gamma is None:
            raise UsageError("optimal lambda needs --gamma")
        pk = kernel_from_lambda_policy(args.kernel, args.policy)
        value = pk.optimal_lambda(args.gamma, args.c)
    print(f"{value:.17g}")
    return EXIT_OK


def cmd_whiten(args) -> int:
    raw = load_csv(args.input, args.label)
    ds = whiten(raw.X, raw.Y, feature_names=raw.meta.feature_names, label_name=raw.meta.label_name)
    save_csv(ds, args.output)
    print(f"{ds.n} rows x {ds.d} whitened feature(s) written to {args.output}")
    return EXIT_OK


def cmd_augment(args) -> int:
    ds = augment(load_csv(args.input, args.label), args.mode, args.target_d, seed=args.seed)
    save_csv(ds, args.output)
    print(f"{ds.n} rows x {ds.d} feature(s) written to {args.output}")
    return EXIT_OK


def cmd_validate(args) -> int:
    report = run_validation(args.suite, quick=args.quick)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_VALIDATION_FAILED


def cmd_cvcheck(args) -> int:
    if args.n > CV_MAX_N:
        raise UsageError(f"cvcheck enumerates every subset; --n must be <= {CV_MAX_N}, got {args.n}")
    ds = synth_gaussian(args.n, args.d, seed=args.seed)
    hp = HyperParams(lam=args.lam, gamma=args.gamma)
    scores = [cv_score(ds.X, ds.Y, k, args.kernel, hp) for k in range(1, args.n + 1)]
    target = free_energy(gram(args.kernel, ds.X), ds.Y, hp)
    for k, s in enumerate(scores, start=1):
        print(f"S_{k} = {s:.17g}")
    total = float(np.sum(scores))
    diff = abs(total - target)
    print(f"sum S_k = {total:.17g}")
    print(f"F_n     = {target:.17g}")
    print(f"|diff|  = {diff:.3e}")
    return EXIT_OK if diff <= CV_TOLERANCE else EXIT_VALIDATION_FAILED


COMMANDS = {
    "sweep": cmd_sweep,
    "compare": cmd_compare,
    "label-variance": cmd_label_variance,
    "limits": cmd_limits,
    "optimal": cmd_optimal,
    "whiten": cmd_whiten,
    "augment": cmd_augment,
    "validate": cmd_validate,
    "cvcheck": cmd_cvcheck,
}


def exit_code_for(e: Exception) -> int:
    # NoOptimalLambda is a DomainError but counts as numerical
    if isinstance(e, (NoOptimalLambda, FactorizationFailure, GridPointError, ArithmeticError)):
        return EXIT_NUMERICAL
    if isinstance(e, (ValueError, OSError)):
        return EXIT_USAGE
    return EXIT_NUMERICAL


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    setup_logging(level=args.log_level)
    logger.info(f"gpdd {args.command}")
    try:
        return COMMANDS[args.command](args)
    except (GpddError, ValueError, ArithmeticError, OSError) as e:
        code = exit_code_for(e)
        logger.error(f"{args.command} failed: {e}")
        print(f"error: {format_error(e)}")
        return code
