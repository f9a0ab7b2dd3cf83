"""Run diagnostics: area conservation error, convergence order, grid uniformity."""

from __future__ import annotations

import math
from dataclasses import astuple, dataclass, field, fields

import numpy as np

from .errors import NonPositiveError
from .geometry import GeometryCache


@dataclass(frozen=True)
class StepRecord:
    j: int
    t: float
    L: float
    A: float
    B: float
    uniformity: float
    theta_max: float
    sor_iters: int


METRIC_COLUMNS = tuple(f.name for f in fields(StepRecord))


@dataclass
class RunMetrics:
    """Append-only per-step series of one simulation."""

    tau: float
    records: list[StepRecord] = field(default_factory=list)

    def append(self, record: StepRecord) -> None:
        if self.records and record.j <= self.records[-1].j:
            raise ValueError(f"step {record.j} recorded after step {self.records[-1].j}")
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(rec, name) for rec in self.records])

    def rows(self):
        return [astuple(rec) for rec in self.records]

    @property
    def areas(self) -> np.ndarray:
        return self.column("A")

    def area_error(self, exact_area: float | None = None) -> float:
        """Area error over steps j >= 1; defaults to the initial polygon's area."""
        areas = self.areas
        if exact_area is None:
            exact_area = areas[0]
        return area_error_norm(areas[1:], exact_area, self.tau)


def area_error_norm(areas, A_e: float, tau: float) -> float:
    """sqrt(sum_j (A^j - A_e)^2 tau) over the supplied steps."""
    areas = np.asarray(areas, dtype=float)
    if areas.size == 0:
        raise ValueError("need at least one step")
    return math.sqrt(float(np.sum((areas - A_e) ** 2)) * tau)


def eoc(coarse_error: float, fine_error: float) -> float:
    """Experimental order of convergence log2(coarse / fine) for n -> 2n."""
    if coarse_error <= 0 or fine_error <= 0:
        raise NonPositiveError(f"errors must be positive, got {coarse_error}, {fine_error}")
    return math.log2(coarse_error / fine_error)


def uniformity_deviation(geom: GeometryCache) -> float:
    """max_i |n r_i / L - 1|; zero exactly when all segments are equal."""
    return float(np.max(np.abs(geom.n * geom.r / geom.L - 1.0)))


def theta_max(geom: GeometryCache) -> float:
    """max_i |ln(n r_i / L)|, the discrete log of local length over mean length."""
    return float(np.max(np.abs(np.log(geom.n * geom.r / geom.L))))
