"""Command-line front end.

Exit codes: 0 success, 1 an identity check failed, 2 bad input or
configuration, 3 an estimator could not be computed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import estimators as est
from .core import JumpTable, StepFunction, build_jump_table
from .csvio import format_number, read_sample, write_sample
from .errors import EstimationError, ValidationError
from .identities import evaluation_grid, verify_all
from .simulate import SimConfig, generate

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_COMPUTE = 3


def _sc(jt, tol, max_iter):
    return est.self_consistent(jt, tol=tol, max_iter=max_iter).estimate


ESTIMATORS = {
    "naive": lambda jt, tol, it: est.naive_survival(jt),
    "pl": lambda jt, tol, it: est.product_limit_failure(jt),
    "sc": _sc,
    "ipcw-cdf": lambda jt, tol, it: est.ipcw_cdf(jt, est.product_limit_censoring_dagger(jt)),
    "ipcw-surv": lambda jt, tol, it: est.ipcw_survival_tilde(jt, est.product_limit_censoring_dagger(jt)),
    "rttr": lambda jt, tol, it: est.rttr(jt).estimate,
    "censor-pl": lambda jt, tol, it: est.product_limit_censoring_dagger(jt),
    "censor-naive": lambda jt, tol, it: est.product_limit_censoring_naive(jt),
}


def compute_estimator(name: str, jt: JumpTable, tol=est.DEFAULT_TOL, max_iter=est.DEFAULT_MAX_ITER) -> StepFunction:
    return ESTIMATORS[name](jt, tol, max_iter)


def tabulate(f: StepFunction, points) -> list[tuple[float, float, float | None]]:
    """(t, f(t), f(t-)) rows; the left limit is None at t = 0."""
    rows = []
    for t in points:
        t = float(t)
        rows.append((t, float(f.eval(t)), float(f.left_limit(t)) if t > 0 else None))
    return rows


def render_table(rows, fmt: str, estimator: str) -> str:
    if fmt == "json":
        points = [{"t": t, "value": v, "left_limit": ll} for t, v, ll in rows]
        return json.dumps({"estimator": estimator, "points": points}, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("t", "value", "left_limit"))
    for t, v, ll in rows:
        writer.writerow((format_number(t), format_number(v), "" if ll is None else format_number(ll)))
    return buf.getvalue()


def _parse_points(text: str) -> list[float]:
    try:
        points = [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ValidationError(f"--eval-at expects comma-separated numbers, got {text!r}") from None
    if any(not np.isfinite(p) or p < 0 for p in points):
        raise ValidationError("--eval-at points must be finite and >= 0")
    return points


def _error(msg: str) -> None:
    print(f"rcsurv: error: {msg}", file=sys.stderr)


def cmd_estimate(args) -> int:
    try:
        jt = build_jump_table(read_sample(args.input))
        points = _parse_points(args.eval_at) if args.eval_at else evaluation_grid(jt)
    except (OSError, ValidationError) as exc:
        _error(str(exc))
        return EXIT_INPUT
    try:
        f = compute_estimator(args.estimator, jt, args.tol, args.max_iter)
        rows = tabulate(f, points)
    except EstimationError as exc:
        _error(str(exc))
        return EXIT_COMPUTE
    sys.stdout.write(render_table(rows, args.format, args.estimator))
    return EXIT_OK


def _render_report(report, fmt: str) -> str:
    if fmt == "json":
        return report.to_json(indent=2) + "\n"
    lines = []
    for c in report.checks:
        cond = "" if c.condition_holds is None else f" condition={'yes' if c.condition_holds else 'no'}"
        lines.append(f"{'PASS' if c.passed else 'FAIL'} {c.name} residual={c.max_residual:.3e}{cond}")
    lines.append(f"{sum(c.passed for c in report.checks)}/{len(report.checks)} checks passed")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    try:
        jt = build_jump_table(read_sample(args.input))
    except (OSError, ValidationError) as exc:
        _error(str(exc))
        return EXIT_INPUT
    try:
        report = verify_all(jt, tol=args.tol, max_iter=args.max_iter)
    except EstimationError as exc:
        _error(str(exc))
        return EXIT_COMPUTE
    sys.stdout.write(_render_report(report, args.format))
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def replicate_path(out: str, k: int) -> Path:
    base = out[:-4] if out.endswith(".csv") else out
    return Path(f"{base}_r{k}.csv")


def cmd_simulate(args) -> int:
    if args.reps < 1:
        _error("--reps must be a positive integer")
        return EXIT_INPUT
    try:
        config = SimConfig.from_json(Path(args.config).read_text())
    except (OSError, ValueError) as exc:
        _error(f"cannot read config {args.config}: {exc}")
        return EXIT_INPUT
    if config.seed + args.seed_offset < 0:
        _error("--seed-offset would make the seed negative")
        return EXIT_INPUT

    files, failed = [], []
    ties = censored_last = passed = 0
    for k in range(args.reps):
        sample = generate(config.with_seed(config.seed + args.seed_offset + k))
        path = replicate_path(args.out, k)
        path.parent.mkdir(parents=True, exist_ok=True)
        write_sample(sample, path)
        files.append(str(path))
        if args.verify:
            jt = build_jump_table(sample)
            report = verify_all(jt, tol=args.tol, max_iter=args.max_iter)
            passed += report.passed
            ties += jt.common_discontinuity_before_last
            censored_last += not jt.all_failures_at_last
            if not report.passed:
                failed.append(k)

    summary = {"reps": args.reps, "files": files}
    if args.verify:
        summary["verify"] = {
            "passed": passed,
            "failedReplicates": failed,
            "commonDiscontinuityBeforeLast": ties,
            "censoredAtLast": censored_last,
        }
    sys.stdout.write(json.dumps(summary, indent=2) + "\n")
    if args.verify:
        print(f"{passed}/{args.reps} replicates passed all checks", file=sys.stderr)
        return EXIT_OK if not failed else EXIT_CHECK_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rcsurv", description="Survival estimators for right-censored data with ties."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_numeric(p):
        p.add_argument("--tol", type=float, default=est.DEFAULT_TOL, help="tolerance (default 1e-12)")
        p.add_argument("--max-iter", type=int, default=est.DEFAULT_MAX_ITER, help="self-consistency sweep limit")

    p = sub.add_parser("estimate", help="evaluate one estimator on a time,status CSV")
    p.add_argument("input")
    p.add_argument("--estimator", choices=sorted(ESTIMATORS), default="pl")
    p.add_argument("--eval-at", help="comma-separated evaluation points (default: 0, all times, last time + 1)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    add_numeric(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("verify", help="run every identity check on a time,status CSV")
    p.add_argument("input")
    p.add_argument("--format", choices=("json", "text"), default="json")
    add_numeric(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="write simulated samples from a JSON config")
    p.add_argument("config")
    p.add_argument("out", help="output prefix; replicate k goes to <out>_r<k>.csv")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed-offset", type=int, default=0)
    p.add_argument("--verify", action="store_true", help="run the identity checks on each replicate")
    add_numeric(p)
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "tol", 1.0) <= 0 or getattr(args, "max_iter", 1) < 1:
        _error("--tol must be positive and --max-iter at least 1")
        return EXIT_INPUT
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
