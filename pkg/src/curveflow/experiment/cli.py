"""Command-line entry point: ``curveflow run``, ``curveflow preset``, ``curveflow presets``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..errors import CurveFlowError
from .config import CONFIG_KEYS, ExperimentConfig, load_config, parse_value
from .output import write_rows
from .presets import PRESETS, get_preset
from .runner import format_table, run_experiment, run_refinement_study, table_csv_rows

logger = logging.getLogger("curveflow")

_BOOL_KEYS = {"svg", "csv"}
_HIDDEN_KEYS = {"notes"}


def _add_config_flags(parser):
    group = parser.add_argument_group("run parameters (override the config file)")
    for key in CONFIG_KEYS:
        if key in _HIDDEN_KEYS:
            continue
        flag = "--" + key.replace("_", "-")
        if key in _BOOL_KEYS:
            group.add_argument(flag, dest=key, action=argparse.BooleanOptionalAction, default=None)
        else:
            group.add_argument(flag, dest=key, metavar=key.upper(), default=None)


def _overrides(args) -> dict:
    values = {}
    for key in CONFIG_KEYS:
        raw = getattr(args, key, None)
        if raw is None:
            continue
        if isinstance(raw, bool):
            values[key] = raw
        else:
            values.update([parse_value(key, raw)])
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curveflow", description="Lagrangian plane-curve evolution experiments.")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one configured simulation")
    run.add_argument("--config", type=Path, help="key = value configuration file")
    _add_config_flags(run)

    preset = sub.add_parser("preset", help="run a named experiment preset")
    preset.add_argument("preset", choices=sorted(PRESETS), metavar="NAME")
    preset.add_argument("--scale", type=float, default=1.0, help="run this fraction of the preset's steps")
    preset.add_argument("--jobs", type=int, default=1, help="parallel rows for table presets")
    preset.add_argument("--out", default=None, help="output root (default $CURVEFLOW_OUT or ./curveflow_out)")
    preset.add_argument("--svg", action=argparse.BooleanOptionalAction, default=None)

    sub.add_parser("presets", help="list presets")
    return parser


def _run_single(config: ExperimentConfig, out_dir=None) -> int:
    try:
        result = run_experiment(config, out_dir=out_dir)
    except CurveFlowError as exc:
        partial = getattr(exc, "partial", None)
        where = f" (partial output in {partial.out_dir})" if partial is not None and partial.out_dir else ""
        print(f"{config.name}: aborted: {exc}{where}", file=sys.stderr)
        return 1
    last = result.metrics.records[-1]
    print(
        f"{config.name}: {config.steps} steps, t = {last.t:.6g}, L = {last.L:.6g}, A = {last.A:.6g}, "
        f"uniformity = {last.uniformity:.3g}, cpu = {result.cpu_seconds:.2f} s -> {result.out_dir}"
    )
    return 0


def _run_preset(args) -> int:
    preset = get_preset(args.preset)
    if args.scale != 1.0:
        preset = preset.scaled(args.scale)
    overrides = {}
    if args.out is not None:
        overrides["out"] = args.out
    if args.svg is not None:
        overrides["svg"] = args.svg
    if overrides:
        preset = preset.with_overrides(**overrides)
    root = preset.configs[0].output_dir() / preset.name

    if preset.table:
        rows = run_refinement_study(preset.configs, preset.exact_area, jobs=args.jobs, out_dir=root)
        print(preset.description)
        print(format_table(rows))
        write_rows(root / "table.csv", ("n", "tau", "steps", "area_error", "eoc", "cpu_seconds"), table_csv_rows(rows))
        return 1 if any(row.error for row in rows) else 0

    status = 0
    for config in preset.configs:
        out_dir = root if len(preset.configs) == 1 else root / config.name
        status = max(status, _run_single(config, out_dir))
    return status


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * args.verbose, format="%(levelname)s %(name)s: %(message)s")

    if args.command == "presets":
        for name, preset in PRESETS.items():
            print(f"{name:18s} {preset.description}")
        return 0
    try:
        if args.command == "preset":
            return _run_preset(args)
        values = load_config(args.config) if args.config else {}
        values.update(_overrides(args))
        config = ExperimentConfig(**values)
    except (KeyError, ValueError) as exc:
        parser.error(str(exc))
    return _run_single(config)


if __name__ == "__main__":
    sys.exit(main())
