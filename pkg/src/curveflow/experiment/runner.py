"""Drive a simulation from an :class:`ExperimentConfig` and collect its outputs."""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from ..errors import CurveFlowError
from ..flows import eval_beta
from ..geometry import Curve, compute_geometry, polygon_area
from ..metrics import RunMetrics, StepRecord, eoc, theta_max, uniformity_deviation
from ..redistribution import curve_average_kbeta
from ..stepper import StepStats, step
from .config import ExperimentConfig
from .initial_curves import INITIAL_CURVES
from .output import emit_csv, emit_svg

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    config: ExperimentConfig
    metrics: RunMetrics
    snapshots: list = field(default_factory=list)
    final: Curve | None = None
    cpu_seconds: float = 0.0
    max_alpha_closure: float = 0.0
    max_relative_residual: float = 0.0
    max_dominance_violations: int = 0
    retried_steps: int = 0
    error: str | None = None
    out_dir: Path | None = None

    @property
    def completed(self) -> bool:
        return self.error is None and len(self.metrics) == self.config.steps + 1

    def snapshot(self, j: int) -> Curve:
        for jj, curve in self.snapshots:
            if jj == j:
                return curve
        raise KeyError(f"no snapshot at step {j}")


def initial_curve(config: ExperimentConfig) -> Curve:
    return INITIAL_CURVES[config.curve](config)


def _record(j, t, curve, flow, sor_iters):
    geom = compute_geometry(curve)
    B = curve_average_kbeta(geom, eval_beta(geom, flow, curve))
    return StepRecord(
        j=j,
        t=t,
        L=geom.L,
        A=polygon_area(curve),
        B=B,
        uniformity=uniformity_deviation(geom),
        theta_max=theta_max(geom),
        sor_iters=sor_iters,
    )


def write_outputs(result: RunResult, out_dir) -> Path:
    cfg = result.config
    out_dir = Path(out_dir)
    if cfg.csv:
        emit_csv(result.metrics, result.snapshots, out_dir)
    else:
        out_dir.mkdir(parents=True, exist_ok=True)
    if cfg.svg and result.snapshots:
        markers = [j for j, _ in result.snapshots if cfg.has_markers(j)]
        emit_svg(result.snapshots, out_dir / "curves.svg", markers=markers)
    (out_dir / "config.txt").write_text(cfg.to_text())
    result.out_dir = out_dir
    return out_dir


def run_experiment(
    config: ExperimentConfig,
    out_dir=None,
    write: bool = True,
    observer: Callable[[int, Curve, StepStats], None] | None = None,
) -> RunResult:
    """Evolve the configured initial curve for ``config.steps`` steps.

    Outputs go to ``out_dir`` (default ``<config.output_dir()>/<config.name>``).
    On a solver or geometry failure the partial outputs are written first and
    the exception is re-raised with the partial :class:`RunResult` attached
    as ``exc.partial``.
    """
    flow, redist, sp = config.flow(), config.redist(), config.step_params()
    curve = initial_curve(config)
    metrics = RunMetrics(tau=config.tau)
    result = RunResult(config=config, metrics=metrics)
    metrics.append(_record(0, 0.0, curve, flow, 0))
    if config.is_snapshot(0):
        result.snapshots.append((0, curve))

    start = time.process_time()
    try:
        for j in range(1, config.steps + 1):
            curve, stats = step(curve, flow, redist, sp)
            metrics.append(_record(j, j * config.tau, curve, flow, stats.sor_iterations))
            result.max_alpha_closure = max(result.max_alpha_closure, stats.alpha_closure)
            result.max_relative_residual = max(result.max_relative_residual, stats.relative_residual)
            result.max_dominance_violations = max(result.max_dominance_violations, stats.dominance_violations)
            result.retried_steps += stats.retried
            if config.is_snapshot(j):
                result.snapshots.append((j, curve))
            if observer is not None:
                observer(j, curve, stats)
    except CurveFlowError as exc:
        result.error = f"{type(exc).__name__} at step {len(metrics)}: {exc}"
        logger.error("run %s aborted: %s", config.name, result.error)
        result.cpu_seconds = time.process_time() - start
        result.final = curve
        if result.snapshots[-1][0] != len(metrics) - 1:
            result.snapshots.append((len(metrics) - 1, curve))
        if write:
            write_outputs(result, out_dir or config.output_dir() / config.name)
        exc.partial = result
        raise
    result.cpu_seconds = time.process_time() - start
    result.final = curve
    if write:
        write_outputs(result, out_dir or config.output_dir() / config.name)
    return result


@dataclass
class TableRow:
    n: int
    tau: float
    steps: int
    area_error: float
    eoc: float | None
    cpu_seconds: float
    error: str | None = None
    max_alpha_closure: float = 0.0
    max_relative_residual: float = 0.0


def run_refinement_study(configs, exact_area: float, jobs: int = 1, out_dir=None) -> list[TableRow]:
    """Run a refinement sequence and tabulate area errors and convergence orders.

    Rows are independent simulations; ``jobs > 1`` runs them in worker
    processes. A row that aborts keeps the error measured up to the abort.
    """
    configs = list(configs)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_study_row, configs))
    else:
        results = [_run_study_row(cfg) for cfg in configs]
    rows = []
    for cfg, result in zip(configs, results):
        err = result.metrics.area_error(exact_area)
        order = eoc(rows[-1].area_error, err) if rows else None
        rows.append(TableRow(
            cfg.n, cfg.tau, cfg.steps, err, order, result.cpu_seconds, result.error,
            result.max_alpha_closure, result.max_relative_residual,
        ))
        if out_dir is not None:
            write_outputs(result, Path(out_dir) / cfg.name)
    return rows


def _run_study_row(config) -> RunResult:
    try:
        return run_experiment(config, write=False)
    except CurveFlowError as exc:
        return exc.partial


def format_table(rows: list[TableRow]) -> str:
    lines = [f"{'n':>5} | {'tau':>9} | {'# of steps':>10} | {'area error':>10} | {'EOC':>5} | {'CPU (sec)':>9}"]
    lines.append("-" * len(lines[0]))
    for row in rows:
        order = "" if row.eoc is None else f"{row.eoc:.2f}"
        line = f"{row.n:>5} | {row.tau:>9.6g} | {row.steps:>10} | {row.area_error:>10.4f} | {order:>5} | {row.cpu_seconds:>9.2f}"
        if row.error:
            line += f"  [{row.error}]"
        lines.append(line)
    return "\n".join(lines)


def table_csv_rows(rows: list[TableRow]):
    return [
        (row.n, row.tau, row.steps, row.area_error, np.nan if row.eoc is None else row.eoc, row.cpu_seconds)
        for row in rows
    ]
