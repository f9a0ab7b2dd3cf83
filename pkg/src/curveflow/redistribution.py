"""Tangential velocities that redistribute grid points along the curve.

``autr`` drives the relative segment lengths n r_i / L towards 1 at a rate
set by omega = kappa1 + kappa2 <k beta>; ``rll`` (omega = 0) freezes each
segment's share of the total length; ``none`` moves points along the normal
only.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .geometry import GeometryCache


class RedistMode(str, Enum):
    AUTR = "autr"
    RLL = "rll"
    NONE = "none"


@dataclass(frozen=True)
class RedistParams:
    mode: RedistMode = RedistMode.AUTR
    kappa1: float = 10.0
    kappa2: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "mode", RedistMode(self.mode))
        if self.kappa1 < 0 or self.kappa2 < 0:
            raise ValueError("kappa1 and kappa2 must be non-negative")
        if self.mode is RedistMode.AUTR and self.kappa1 + self.kappa2 <= 0:
            raise ValueError("autr redistribution needs kappa1 + kappa2 > 0")

    def omega(self, kbeta_mean: float) -> float:
        if self.mode is RedistMode.AUTR:
            return self.kappa1 + self.kappa2 * kbeta_mean
        return 0.0


def curve_average_kbeta(geom: GeometryCache, beta: np.ndarray) -> float:
    """Length-weighted mean of k * beta over the polygon."""
    return float(np.sum(geom.r * geom.k * beta)) / geom.L


def alpha_update(geom: GeometryCache, beta: np.ndarray, B: float, params: RedistParams) -> np.ndarray:
    """Tangential velocities alpha_0..alpha_n (length n + 1) with alpha_0 = 0.

    alpha_n is zero up to rounding: the increments telescope to
    L B - L B + (L - L) omega.
    """
    n = geom.n
    alpha = np.zeros(n + 1)
    if params.mode is RedistMode.NONE:
        return alpha
    r = geom.r
    increments = r * (geom.k * beta - B) + (geom.L / n - r) * params.omega(B)
    alpha[1:] = np.cumsum(increments)
    return alpha


def closure_defect(geom: GeometryCache, beta: np.ndarray, B: float, params: RedistParams, alpha: np.ndarray) -> float:
    """|alpha_n| relative to the summed magnitudes of the terms that cancel in it (0 for mode none)."""
    if params.mode is RedistMode.NONE:
        return 0.0
    r = geom.r
    omega = abs(params.omega(B))
    scale = float(np.sum(r * np.abs(geom.k * beta) + r * abs(B) + (geom.L / geom.n + r) * omega))
    return abs(float(alpha[-1])) / scale if scale > 0 else abs(float(alpha[-1]))
