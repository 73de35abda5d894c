"""Command line interface.

Exit codes: 0 success, 1 check failure, 2 config error, 3 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .config import ConfigError, parse_config
from .environment import ConfigurationError
from .runner import run_experiment, validate_suite


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="layerwalk")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run an experiment config")
    run.add_argument("config", type=Path)
    validate = sub.add_parser("validate", help="run the fast validation checks")
    validate.add_argument("--seed", type=int, default=0)
    sub.add_parser("version", help="print the version")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "version":
        print(__version__)
        return 0
    if args.command == "validate":
        report = validate_suite(args.seed)
        failed = False
        for name, ok, detail in report.checks:
            print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
            failed = failed or not ok
        return 1 if failed else 0
    try:
        text = args.config.read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        config = parse_config(text)
    except (ConfigError, ConfigurationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        report = run_experiment(config)
    except Exception as exc:  # noqa: BLE001 - map to documented exit code
        print(f"runtime error: {exc}", file=sys.stderr)
        return 3
    for path in report.files:
        print(path)
    if not report.passed:
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
