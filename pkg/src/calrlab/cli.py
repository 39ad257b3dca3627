"""Command-line experiment runner.

Subcommands: `run CONFIG`, `validate-config CONFIG`, `list-scenarios`.
The config is a JSON file {"scenario": NAME, "out": DIR, "params": {...}}.
Exit codes: 0 success, 2 config error, 3 assertion failure, 4 numerical
guard tripped.  Thread count for the per-mode solves comes from the
CALRLAB_THREADS environment variable (reduction order is fixed either way,
so output bytes do not depend on it).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .layered_maxwell.solver import NearSingularMode
from .scenarios import SCENARIOS, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ASSERTION = 3
EXIT_NUMERICAL = 4


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(config, dict):
        raise ValueError("config must be a JSON object")
    if config.get("scenario") not in SCENARIOS:
        raise ValueError(
            f"config needs a 'scenario' among {sorted(SCENARIOS)}")
    params = config.get("params", {})
    if not isinstance(params, dict):
        raise ValueError("'params' must be an object")
    deltas = params.get("deltas")
    if deltas is not None and any(d <= 0 for d in deltas):
        raise ValueError("all loss values must be strictly positive")
    for key in ("radii", "annulus", "radius_grid"):
        vals = params.get(key)
        if vals is not None and list(vals) != sorted(vals):
            raise ValueError(f"'{key}' must be increasing")
    return config


def cmd_run(args) -> int:
    try:
        config = load_config(args.config)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    outdir = Path(config.get("out", "out"))
    try:
        results = run_scenario(config["scenario"], config.get("params", {}),
                               outdir)
    except NearSingularMode as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except RuntimeError as exc:
        print(f"numerical guard: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    failed = [a for a in results.get("assertions", []) if not a[1]]
    for name, passed, detail in results.get("assertions", []):
        print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    print(f"reports written to {outdir}")
    return EXIT_ASSERTION if failed else EXIT_OK


def cmd_validate(args) -> int:
    try:
        config = load_config(args.config)
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print(f"config ok: scenario {config['scenario']}")
    return EXIT_OK


def cmd_list(_args) -> int:
    for name in sorted(SCENARIOS):
        doc = (SCENARIOS[name].__doc__ or "").strip().splitlines()
        print(f"{name:24s} {doc[0] if doc else ''}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="calrlab",
                                     description="reproducible experiment runner")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run a scenario from a JSON config")
    p_run.add_argument("config")
    p_run.set_defaults(fn=cmd_run)
    p_val = sub.add_parser("validate-config", help="schema-check a config file")
    p_val.add_argument("config")
    p_val.set_defaults(fn=cmd_validate)
    p_list = sub.add_parser("list-scenarios", help="list the named experiments")
    p_list.set_defaults(fn=cmd_list)
    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
