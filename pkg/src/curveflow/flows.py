"""Normal-velocity models beta = -delta d_ss k + b(k, nu) + F(x)."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import UnknownModel
from .geometry import Curve, GeometryCache, cyclic

logger = logging.getLogger(__name__)

ScalarField = Callable[[np.ndarray, np.ndarray], np.ndarray]
ForceField = Callable[[np.ndarray], np.ndarray]

AFFINE_EPS = 1e-6


def zero_force(points):
    return np.zeros(len(points))


def constant_force(value: float) -> ForceField:
    value = float(value)
    if value == 0.0:
        return zero_force

    def force(points):
        return np.full(len(points), value)

    return force


@dataclass(frozen=True)
class FlowSpec:
    """Parameters of a normal-velocity model.

    ``b`` and ``c`` take arrays ``(k, nu)``; ``c`` must equal ``b / k`` and is
    supplied in closed form so that k = 0 never divides. ``F`` takes an
    ``(n, 2)`` array of points and returns ``n`` values.
    """

    name: str
    delta: float
    b: ScalarField
    c: ScalarField
    F: ForceField = zero_force
    k_range: tuple[float, float] = (-10.0, 10.0)
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.delta < 0:
            raise ValueError(f"delta must be >= 0, got {self.delta}")
        probe = np.array([0.0, 0.5 * np.pi, np.pi, 1.5 * np.pi])
        b0 = np.asarray(self.b(np.zeros_like(probe), probe), dtype=float)
        if np.any(np.abs(b0) > 1e-12):
            raise ValueError(f"flow {self.name!r}: b(0, nu) must vanish, got {b0}")
        if self.delta == 0 and not self.is_monotone():
            logger.warning("flow %r has delta=0 but b is not strictly increasing in k", self.name)

    def is_monotone(self, samples: int = 401) -> bool:
        """Sampled check that b is strictly increasing in k over ``k_range``."""
        k = np.linspace(*self.k_range, samples)
        for nu in np.linspace(0.0, 2 * np.pi, 9):
            vals = self.b(k, np.full_like(k, nu))
            if np.any(np.diff(vals) <= 0):
                return False
        return True


def _mean_curvature(params):
    return FlowSpec(
        name="mean_curvature",
        delta=0.0,
        b=lambda k, nu: k * 1.0,
        c=lambda k, nu: np.ones_like(k, dtype=float),
        F=constant_force(params.get("force", 0.0)),
        params=dict(params),
    )


def _affine(params):
    eps = float(params.get("eps", AFFINE_EPS))

    # (k^2 + eps^2)^(-1/3) replaces |k|^(-2/3); b = c k is the odd cube root.
    def c(k, nu):
        return (k * k + eps * eps) ** (-1.0 / 3.0)

    def b(k, nu):
        return c(k, nu) * k

    return FlowSpec(
        name="affine",
        delta=0.0,
        b=b,
        c=c,
        F=constant_force(params.get("force", 0.0)),
        params=dict(params, eps=eps),
    )


def _anisotropic(params):
    strength = float(params.get("strength", 0.9))
    fold = float(params.get("fold", 4.0))
    phase = float(params.get("phase", np.pi))

    def c(k, nu):
        return 1.0 - strength * np.cos(fold * nu - phase) + 0.0 * k

    return FlowSpec(
        name="anisotropic",
        delta=0.0,
        b=lambda k, nu: c(k, nu) * k,
        c=c,
        F=constant_force(params.get("force", 0.0)),
        params=dict(params, strength=strength, fold=fold, phase=phase),
    )


def _surface_diffusion(params):
    return FlowSpec(
        name="surface_diffusion",
        delta=float(params.get("delta", 1.0)),
        b=lambda k, nu: np.zeros_like(k, dtype=float),
        c=lambda k, nu: np.zeros_like(k, dtype=float),
        F=constant_force(params.get("force", 0.0)),
        params=dict(params),
    )


def _willmore_backward(params):
    delta = float(params.get("delta", 1.0))

    return FlowSpec(
        name="willmore_backward",
        delta=delta,
        b=lambda k, nu: -k - 0.5 * delta * k**3,
        c=lambda k, nu: -1.0 - 0.5 * delta * k**2,
        F=constant_force(params.get("force", -1.0)),
        params=dict(params, delta=delta),
    )


BUILTIN_FLOWS = {
    "mean_curvature": _mean_curvature,
    "affine": _affine,
    "anisotropic": _anisotropic,
    "surface_diffusion": _surface_diffusion,
    "willmore_backward": _willmore_backward,
}


def builtin_flow(name: str, params: dict | None = None) -> FlowSpec:
    """Look up a catalog model.

    Recognised parameters: ``force`` (constant F) for every model, ``delta``
    for ``willmore_backward`` and ``surface_diffusion``, ``eps`` for
    ``affine``, and ``strength``/``fold``/``phase`` for ``anisotropic``.
    """
    try:
        factory = BUILTIN_FLOWS[name]
    except KeyError:
        raise UnknownModel(f"unknown flow model {name!r}; choose from {sorted(BUILTIN_FLOWS)}") from None
    return factory(params or {})


def normal_vector(nu):
    """Inward unit normal (-sin nu, cos nu); vectorized over ``nu``."""
    nu = np.asarray(nu, dtype=float)
    return np.stack((-np.sin(nu), np.cos(nu)), axis=-1)


def eval_beta(geom: GeometryCache, flow: FlowSpec, prev_points: Curve) -> np.ndarray:
    """Discrete normal velocity on each flowing finite volume."""
    k, r, q = geom.k, geom.r, geom.q
    beta = flow.b(k, geom.nu)
    if flow.delta:
        km, kp, qm = cyclic(k, 1), cyclic(k, -1), cyclic(q, 1)
        beta = beta + flow.delta / r * ((k - km) / qm - (kp - k) / q)
    if flow.F is not zero_force:
        Fx = flow.F(prev_points.points)
        beta = beta + 0.5 * (Fx + cyclic(Fx, 1))
    return np.asarray(beta, dtype=float)


def eval_phi(geom: GeometryCache, flow: FlowSpec) -> np.ndarray:
    """Diffusivity phi_i = -delta k_i^2 + c(k_i, nu_i), i = 1..n.

    phi_{n+1} is obtained cyclically: c is 2 pi-periodic in nu.
    """
    k = geom.k
    return np.asarray(-flow.delta * k * k + flow.c(k, geom.nu), dtype=float)
