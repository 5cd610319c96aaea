"""Command-line entry point: ``sisbarrier {evaluate,curve,sweep,validate}``.

Exit codes: 0 success, 1 validation check failed, 2 configuration error,
3 numerical or oracle error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import report
from .config import load_config
from .errors import ConfigError, DomainError, OracleError, QuadratureError, SingularityError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4


class OutputError(Exception):
    pass


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _emit(args, text: str, payload) -> None:
    """Print text (or JSON with --json); --output receives the same document."""
    body = json.dumps(payload, indent=2) + "\n" if args.json else text
    if args.output:
        _write(args.output, body)
    else:
        sys.stdout.write(body)


def cmd_evaluate(args) -> int:
    job = load_config(args.config)
    result = report.evaluate_report(job)
    _emit(args, report.evaluate_text(result), result)
    return EXIT_OK


def cmd_curve(args) -> int:
    job = load_config(args.config)
    if args.samples < 2:
        raise ConfigError("--samples must be at least 2")
    text = report.curve_csv(job, args.samples)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sweep(args) -> int:
    job = load_config(args.config)
    if job.sweep is None:
        raise ConfigError("sweep command needs a 'sweep' block in the config")
    rows, summary = report.sweep_rows(job)
    if args.json:
        _emit(args, "", {"rows": rows, "summary": summary})
    elif args.output:
        _write(args.output, report.sweep_csv(rows))
        sys.stdout.write(report.sweep_text(rows, summary))
    else:
        sys.stdout.write(report.sweep_text(rows, summary))
    return EXIT_OK


def cmd_validate(args) -> int:
    job = load_config(args.config)
    if job.simulation is None:
        raise ConfigError("validate command needs a 'simulation' block in the config")
    checks = report.validation_checks(job)
    passed = all(c["pass"] for c in checks)
    _emit(args, report.validation_text(checks), {"checks": checks, "passed": passed})
    return EXIT_OK if passed else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sisbarrier",
        description="PFD/PFH and SIL verification for MooN safety barriers with proof tests",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="JSON job configuration")
        p.add_argument("--output", help="write the result to this file instead of stdout")
        p.add_argument("--json", action="store_true", help="machine-readable JSON output")

    p = sub.add_parser("evaluate", help="exact and approximate PFD/PFH with SIL verdicts")
    common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("curve", help="PFD(t) traces as CSV")
    common(p)
    p.add_argument("--samples", type=int, default=25, help="samples per inter-test interval (default 25)")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("sweep", help="tabulate PFD, PFH and SIL over one parameter")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="compare analytic results with the Monte Carlo oracle")
    common(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, matching the config-error code
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, SingularityError, OracleError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OutputError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
