"""Command line front end: one subcommand per experiment.

Exit codes: 0 on success, 2 for configuration problems (unreadable config
file included), 3 when precision exhaustion exceeded the failure budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .experiments import RUNNERS, ConfigError, PrecisionBudgetError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dioflow",
        description="certified continued fraction and lattice flow experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in RUNNERS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", required=True, help="path to a JSON config")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--jobs", type=int, default=1, help="worker processes")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            config = json.load(fh)
        if not isinstance(config, dict):
            raise ConfigError("config root must be a JSON object")
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        config["seed"] = args.seed
    runner = RUNNERS[args.command]
    try:
        report = runner(config, jobs=args.jobs, out_dir=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except PrecisionBudgetError as exc:
        print(f"precision exhaustion: {exc}", file=sys.stderr)
        return 3
    os.makedirs(args.out, exist_ok=True)
    report_path = os.path.join(args.out, "report.json")
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(report_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
