"""Exception hierarchy shared by the solver modules."""


class CurveFlowError(Exception):
    """Base class for all errors raised by curveflow."""


class ZeroSegment(CurveFlowError, ValueError):
    """Two consecutive grid points coincide; the polygon is degenerate."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(message or f"zero-length segment ending at grid point {index}")


class UnknownModel(CurveFlowError, KeyError):
    pass


class ZeroDiagonal(CurveFlowError, ZeroDivisionError):
    pass


class SingularMatrix(CurveFlowError, ArithmeticError):
    pass


class MaxItersExceeded(CurveFlowError, RuntimeError):
    """SOR hit its iteration cap. Carries the last iterate."""

    def __init__(self, x, iterations, last_change):
        self.x = x
        self.iterations = iterations
        self.last_change = last_change
        super().__init__(
            f"SOR did not reach tolerance in {iterations} sweeps "
            f"(last iterate change {last_change:.3e})"
        )


class SolverDiverged(CurveFlowError, RuntimeError):
    pass


class NonPositiveError(CurveFlowError, ValueError):
    pass
