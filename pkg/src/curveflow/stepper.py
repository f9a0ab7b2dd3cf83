"""One semi-implicit time step of the flowing finite-volume scheme.

Geometry, normal velocity, tangential velocity and the system coefficients
are all taken from the previous time level; only the new positions are
implicit. Advection uses central differences.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .bandsolver import BandSystem, sor_solve
from .errors import MaxItersExceeded, SolverDiverged
from .flows import FlowSpec, eval_beta, eval_phi, normal_vector, zero_force
from .geometry import Curve, GeometryCache, compute_geometry, cyclic
from .redistribution import RedistParams, alpha_update, closure_defect, curve_average_kbeta

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepParams:
    tau: float
    sor_relax: float = 1.6
    tol: float = 1e-10
    max_iters: int | None = None  # defaults to 10 n
    divergence_factor: float = 1e3

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError(f"tau must be positive, got {self.tau}")
        if not 0 < self.sor_relax < 2:
            raise ValueError(f"sor_relax must lie in (0, 2), got {self.sor_relax}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")

    def iteration_cap(self, n: int) -> int:
        return self.max_iters if self.max_iters is not None else 10 * n


@dataclass
class StepStats:
    sor_iterations: int = 0
    residual: float = 0.0
    relative_residual: float = 0.0
    dominance_violations: int = 0
    kbeta_mean: float = 0.0
    alpha_closure: float = 0.0  # |alpha_n| relative to its cancelling terms
    retried: bool = False

    def merge(self, other: "StepStats") -> "StepStats":
        return StepStats(
            sor_iterations=self.sor_iterations + other.sor_iterations,
            residual=max(self.residual, other.residual),
            relative_residual=max(self.relative_residual, other.relative_residual),
            dominance_violations=max(self.dominance_violations, other.dominance_violations),
            kbeta_mean=other.kbeta_mean,
            alpha_closure=max(self.alpha_closure, other.alpha_closure),
            retried=True,
        )


def advection_velocity(geom: GeometryCache, phi: np.ndarray, alpha: np.ndarray, delta: float) -> np.ndarray:
    """v_i for i = 1..n; ``alpha`` may carry alpha_0 in front (length n + 1)."""
    n = geom.n
    if len(alpha) == n + 1:
        alpha = alpha[1:]
    k, q = geom.k, geom.q
    kp = cyclic(k, -1)
    v = (cyclic(phi, -1) - phi) / q - alpha
    if delta:
        v = 1.5 * delta * (kp * kp - k * k) / q + v
    return v


def assemble_system(geom: GeometryCache, flow: FlowSpec, v, phi, prev: Curve, tau: float):
    """Diagonals A..E and the two right-hand sides for the new positions."""
    r, q, delta = geom.r, geom.q, flow.delta
    rm, rp, rpp = cyclic(r, 1), cyclic(r, -1), cyclic(r, -2)
    qm, qp = cyclic(q, 1), cyclic(q, -1)
    phip = cyclic(phi, -1)

    if delta:
        A = delta / (r * qm * rm)
        E = delta / (rp * qp * rpp)
        B = -delta * (1 / (r * qm * rm) + 1 / (r * r * qm) + 1 / (r * r * q) + 1 / (r * q * rp)) - phi / r - v / 2
        D = -delta * (1 / (r * q * rp) + 1 / (rp * rp * q) + 1 / (rp * rp * qp) + 1 / (rp * qp * rpp)) - phip / rp + v / 2
    else:
        A = np.zeros_like(r)
        E = np.zeros_like(r)
        B = -phi / r - v / 2
        D = -phip / rp + v / 2
    mass = q / tau
    C = mass - (A + B + D + E)

    rhs = mass[:, None] * prev.points
    if flow.F is not zero_force:
        Fx = flow.F(prev.points)
        N = normal_vector(0.5 * (geom.nu + geom.nu_next))
        rhs = rhs + (q * Fx)[:, None] * N
    system = BandSystem(A, B, C, D, E)
    return system, np.ascontiguousarray(rhs[:, 0]), np.ascontiguousarray(rhs[:, 1])


def _advance(curve: Curve, flow: FlowSpec, redist: RedistParams, sp: StepParams, tau: float, final: bool):
    geom = compute_geometry(curve)
    beta = eval_beta(geom, flow, curve)
    B = curve_average_kbeta(geom, beta)
    alpha = alpha_update(geom, beta, B, redist)
    phi = eval_phi(geom, flow)
    v = advection_velocity(geom, phi, alpha, flow.delta)
    system, rhs_x, rhs_y = assemble_system(geom, flow, v, phi, curve, tau)

    cap = sp.iteration_cap(curve.n)
    new = np.empty_like(curve.points)
    iterations = 0
    for col, rhs in enumerate((rhs_x, rhs_y)):
        try:
            x, its = sor_solve(system, rhs, curve.points[:, col], sp.sor_relax, sp.tol, cap)
        except MaxItersExceeded as exc:
            # On the last attempt a capped iterate is kept if it nearly solves the system.
            if not final or system.residual(exc.x, rhs) > sp.tol * sp.divergence_factor:
                raise
            logger.warning("accepting capped SOR iterate: %s", exc)
            x, its = exc.x, exc.iterations
        new[:, col] = x
        iterations += its

    residual = max(system.residual(new[:, 0], rhs_x), system.residual(new[:, 1], rhs_y))
    scale = max(np.max(np.abs(rhs_x)), np.max(np.abs(rhs_y)))
    stats = StepStats(
        sor_iterations=iterations,
        residual=residual,
        relative_residual=residual / scale if scale > 0 else residual,
        dominance_violations=system.dominance_violations(),
        kbeta_mean=B,
        alpha_closure=closure_defect(geom, beta, B, redist, alpha),
    )
    if stats.dominance_violations:
        logger.debug("%d rows not diagonally dominant", stats.dominance_violations)
    return Curve(new), stats


def step(curve: Curve, flow: FlowSpec, redist: RedistParams, sp: StepParams):
    """Advance ``curve`` by one time step ``sp.tau``.

    If SOR exhausts its iteration cap, the step is redone once as two half
    steps. If that also hits the cap with a residual above
    ``tol * divergence_factor``, :class:`SolverDiverged` is raised.

    Returns
    -------
    curve : Curve
    stats : StepStats
    """
    try:
        return _advance(curve, flow, redist, sp, sp.tau, final=False)
    except MaxItersExceeded as first:
        logger.info("SOR cap hit (%s); retrying with two half steps", first)
    try:
        half, s1 = _advance(curve, flow, redist, sp, 0.5 * sp.tau, final=True)
        out, s2 = _advance(half, flow, redist, sp, 0.5 * sp.tau, final=True)
    except MaxItersExceeded as second:
        raise SolverDiverged(f"time step failed after retry: {second}") from second
    return out, s1.merge(s2)
