"""Initial curves sampled uniformly in the parameter u = i / n, i = 1..n."""

import numpy as np

from ..geometry import Curve


def _params(n):
    return 2.0 * np.pi * np.arange(1, n + 1) / n


def make_ellipse(a: float, b: float, n: int) -> Curve:
    """Counter-clockwise ellipse with half-axes ``a`` (along x) and ``b``."""
    if a <= 0 or b <= 0:
        raise ValueError("half-axes must be positive")
    u = _params(n)
    return Curve(np.column_stack((a * np.cos(u), b * np.sin(u))))


def make_circle(radius: float, n: int, center=(0.0, 0.0)) -> Curve:
    if radius <= 0:
        raise ValueError("radius must be positive")
    u = _params(n)
    return Curve(np.column_stack((center[0] + radius * np.cos(u), center[1] + radius * np.sin(u))))


def spiral_point(u):
    """Point(s) of the spiral test curve at parameter ``u`` in [0, 1]."""
    u = np.asarray(u, dtype=float)
    s, c = np.sin(2 * np.pi * u), np.cos(2 * np.pi * u)
    radius = 0.5 * np.exp(-1.0 - 0.5 * s) - 0.025 * c
    angle = 10.0 * np.arctan(1.0 + 0.5 * s)
    return np.stack((radius * np.cos(angle), radius * np.sin(angle)), axis=-1)


def make_spiral(n: int) -> Curve:
    """Spiral sampled at u = i / n, stored counter-clockwise.

    The parameterization runs clockwise, so the samples are reversed; the
    point set is unchanged.
    """
    if n < 25:
        raise ValueError("the spiral needs n >= 25 to be resolved")
    return Curve(spiral_point(np.arange(1, n + 1) / n)[::-1])


INITIAL_CURVES = {
    "ellipse": lambda cfg: make_ellipse(cfg.ellipse_a, cfg.ellipse_b, cfg.n),
    "circle": lambda cfg: make_circle(cfg.radius, cfg.n),
    "spiral": lambda cfg: make_spiral(cfg.n),
}
