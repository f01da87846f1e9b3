"""Command line entry point.

Subcommands::

    channel          single-point channel JSON
    sweep            grid sweep, CSV rows
    measure          measurement-scenario JSON report
    oracle-check     analytic channel vs truncated-Fock tomography
    validate-config  parse and echo the normalized configuration

Flags may also come from ``TWOATOM_CONFIG``, ``TWOATOM_OUT``,
``TWOATOM_TOL``, ``TWOATOM_SEED``, ``TWOATOM_JOBS``; explicit flags win.
Exit codes: 0 success, 2 configuration or domain error, 3 accuracy
error, 4 internal consistency error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from .config import ExperimentConfig, load_config
from .errors import (
    AccuracyError,
    DomainError,
    InternalConsistencyError,
    TwoAtomError,
)
from .harness import format_csv, run_measure, run_oracle_check, run_point, run_sweep

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ACCURACY = 3
EXIT_INCONSISTENT = 4

_COMMANDS = ("channel", "sweep", "measure", "oracle-check", "validate-config")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twoatom",
        description="Relativistic two-detector channel experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", help="experiment config path")
        cmd.add_argument("--out", help="output path (default: stdout)")
        cmd.add_argument(
            "--tol",
            type=float,
            help="override tolerance.quadrature (oracle-check: oracle.tolerance)",
        )
        cmd.add_argument("--seed", type=int, help="override the config seed")
        cmd.add_argument(
            "--jobs", type=int, help="parallel workers for sweep grids"
        )
    return parser


def _setting(flag_value, env_name: str, cast):
    if flag_value is not None:
        return flag_value
    raw = os.environ.get(env_name)
    if raw is None:
        return None
    try:
        return cast(raw)
    except ValueError as exc:
        raise DomainError(f"bad {env_name} value {raw!r}") from exc


def _apply_overrides(cfg: ExperimentConfig, command: str, tol, seed):
    if tol is not None:
        if tol <= 0:
            raise DomainError("tolerance override must be positive")
        if command == "oracle-check":
            if cfg.oracle is None:
                raise DomainError("config has no oracle block")
            cfg = dataclasses.replace(
                cfg, oracle=dataclasses.replace(cfg.oracle, tolerance=tol)
            )
        else:
            cfg = dataclasses.replace(cfg, quadrature_tol=tol)
    if seed is not None:
        cfg = dataclasses.replace(cfg, seed=seed)
    return cfg


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)


def _json_text(payload: dict, seed) -> str:
    if seed is not None:
        payload = {**payload, "seed": seed}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _sweep_exit_code(rows: list[dict]) -> int:
    errors = [row["error"] for row in rows if row["error"]]
    if not errors:
        return EXIT_OK
    if all(message.startswith("AccuracyError") for message in errors):
        return EXIT_ACCURACY
    return EXIT_CONFIG


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config_path = _setting(args.config, "TWOATOM_CONFIG", str)
        if config_path is None:
            raise DomainError("no config given: use --config or TWOATOM_CONFIG")
        out_path = _setting(args.out, "TWOATOM_OUT", str)
        tol = _setting(args.tol, "TWOATOM_TOL", float)
        seed = _setting(args.seed, "TWOATOM_SEED", int)
        jobs = _setting(args.jobs, "TWOATOM_JOBS", int) or 1
        if jobs < 1:
            raise DomainError("--jobs must be at least 1")

        cfg = _apply_overrides(load_config(config_path), args.command, tol, seed)

        if args.command == "validate-config":
            _emit(cfg.to_json() + "\n", out_path)
            return EXIT_OK
        if args.command == "channel":
            _emit(_json_text(run_point(cfg).to_payload(), cfg.seed), out_path)
            return EXIT_OK
        if args.command == "sweep":
            rows = run_sweep(cfg, jobs=jobs)
            _emit(format_csv(rows), out_path)
            return _sweep_exit_code(rows)
        if args.command == "measure":
            _emit(_json_text(run_measure(cfg), cfg.seed), out_path)
            return EXIT_OK
        _emit(_json_text(run_oracle_check(cfg), cfg.seed), out_path)
        return EXIT_OK
    except AccuracyError as exc:
        print(f"accuracy error: {exc}", file=sys.stderr)
        return EXIT_ACCURACY
    except InternalConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except TwoAtomError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
