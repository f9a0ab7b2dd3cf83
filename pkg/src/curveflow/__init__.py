"""Lagrangian evolution of closed plane curves with tangential redistribution.

The normal velocity has the form beta = -delta d_ss k + b(k, nu) + F(x); each
time step solves a cyclic penta- (or tri-) diagonal system for the new grid
points by SOR.
"""

from .bandsolver import BandSystem, dense_oracle_solve, sor_solve
from .errors import (
    CurveFlowError,
    MaxItersExceeded,
    NonPositiveError,
    SingularMatrix,
    SolverDiverged,
    UnknownModel,
    ZeroDiagonal,
    ZeroSegment,
)
from .flows import FlowSpec, builtin_flow, eval_beta, eval_phi, normal_vector
from .geometry import Curve, GeometryCache, compute_geometry, polygon_area
from .metrics import RunMetrics, StepRecord, area_error_norm, eoc, theta_max, uniformity_deviation
from .redistribution import RedistMode, RedistParams, alpha_update, closure_defect, curve_average_kbeta
from .stepper import StepParams, StepStats, advection_velocity, assemble_system, step

__version__ = "0.1.0"
