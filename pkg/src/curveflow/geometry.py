"""Closed polygonal curves and their discrete geometric quantities.

Grid points are stored 0-based: ``points[p]`` is the logical point x_{p+1},
p = 0..n-1. Every per-volume array (r, k, nu, ...) uses the same offset, so
``r[p]`` is the length of the segment [x_p, x_{p+1}] in 0-based terms, i.e.
the flowing finite volume that ends at ``points[p]``. Ghost points are never
materialized; neighbours are reached with ``cyclic``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZeroSegment

TWO_PI = 2.0 * np.pi


def _det(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]



def cyclic(a: np.ndarray, shift: int) -> np.ndarray:
    """``np.roll(a, shift, axis=0)`` without its generic-axis overhead."""
    shift %= len(a)
    if shift == 0:
        return a.copy()
    return np.concatenate((a[-shift:], a[:-shift]))

class Curve:
    """Immutable closed plane polygon with ``n >= 5`` distinct consecutive points.

    Parameters
    ----------
    points : array_like, shape (n, 2)
        Grid points in traversal order. Counter-clockwise order gives a
        positive area and an inward normal N = (-sin nu, cos nu).
    """

    __slots__ = ("_points",)

    MIN_POINTS = 5

    def __init__(self, points):
        pts = np.array(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"points must have shape (n, 2), got {pts.shape}")
        if pts.shape[0] < self.MIN_POINTS:
            raise ValueError(f"a curve needs at least {self.MIN_POINTS} points, got {pts.shape[0]}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain non-finite values")
        seg = pts - cyclic(pts, 1)
        zero = np.flatnonzero((seg[:, 0] == 0.0) & (seg[:, 1] == 0.0))
        if zero.size:
            raise ZeroSegment(int(zero[0]))
        pts.flags.writeable = False
        self._points = pts

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def n(self) -> int:
        return self._points.shape[0]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Curve):
            return NotImplemented
        return np.array_equal(self._points, other._points)

    __hash__ = None

    def __repr__(self):
        return f"Curve(n={self.n})"


@dataclass(frozen=True)
class GeometryCache:
    """Discrete geometry of one time level.

    Attributes
    ----------
    r : segment lengths r_i = |x_i - x_{i-1}|
    q : dual-volume lengths q_i = (r_i + r_{i+1}) / 2
    k : curvatures k_i
    nu : tangent angles nu_i, accumulated from ``nu0``
    nu0 : angle of the closing segment x_n - x_{n-1}
    L : total length
    """

    r: np.ndarray
    q: np.ndarray
    k: np.ndarray
    nu: np.ndarray
    nu0: float
    L: float

    @property
    def n(self) -> int:
        return self.r.shape[0]

    @property
    def nu_next(self) -> np.ndarray:
        """nu_{i+1} for i = 1..n, with nu_{n+1} = nu_1 + 2 pi."""
        return np.append(self.nu[1:], self.nu[0] + TWO_PI)

    @property
    def tangent(self) -> np.ndarray:
        return np.column_stack((np.cos(self.nu), np.sin(self.nu)))

    @property
    def turning(self) -> float:
        """Sum of r_i k_i; equals 2 pi for a convex counter-clockwise polygon."""
        return float(np.sum(self.r * self.k))


def compute_geometry(curve: Curve) -> GeometryCache:
    """Segment lengths, dual lengths, curvature, tangent angle and length of ``curve``.

    The curvature of volume i is half the signed angle between its two
    neighbouring segments R_{i-1} and R_{i+1}, divided by r_i.
    """
    pts = curve.points
    R = pts - cyclic(pts, 1)
    r = np.hypot(R[:, 0], R[:, 1])
    if np.any(r == 0.0):
        raise ZeroSegment(int(np.flatnonzero(r == 0.0)[0]))
    q = 0.5 * (r + cyclic(r, -1))

    Rm, Rp = cyclic(R, 1), cyclic(R, -1)
    rm, rp = cyclic(r, 1), cyclic(r, -1)
    cos_angle = np.clip(np.einsum("ij,ij->i", Rp, Rm) / (rp * rm), -1.0, 1.0)
    k = np.sign(_det(Rm, Rp)) * np.arccos(cos_angle) / (2.0 * r)

    # R_0 is the closing segment x_n - x_{n-1}, stored last.
    c0 = np.clip(R[-1, 0] / r[-1], -1.0, 1.0)
    nu0 = float(np.arccos(c0)) if R[-1, 1] >= 0.0 else TWO_PI - float(np.arccos(c0))
    nu = nu0 + np.cumsum(r * k)

    return GeometryCache(r=r, q=q, k=k, nu=nu, nu0=nu0, L=float(np.sum(r)))


def polygon_area(curve: Curve) -> float:
    """Signed shoelace area, positive for counter-clockwise orientation."""
    x = curve.points
    return 0.5 * float(np.sum(_det(x, x - cyclic(x, 1))))
