"""Cyclic penta-diagonal systems and their SOR solution.

Row i reads ``a[i] x[i-2] + b[i] x[i-1] + c[i] x[i] + d[i] x[i+1] + e[i] x[i+2]``
with indices taken modulo n. A tri-diagonal system is the special case
``a = e = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import MaxItersExceeded, SingularMatrix, ZeroDiagonal
from .geometry import cyclic

DENSE_LIMIT = 2000


@dataclass(frozen=True)
class BandSystem:
    diag_a: np.ndarray
    diag_b: np.ndarray
    diag_c: np.ndarray
    diag_d: np.ndarray
    diag_e: np.ndarray

    def __post_init__(self):
        n = len(self.diag_c)
        if n < 5:
            raise ValueError(f"cyclic band system needs n >= 5, got {n}")
        for name in ("diag_a", "diag_b", "diag_c", "diag_d", "diag_e"):
            arr = np.ascontiguousarray(getattr(self, name), dtype=np.float64)
            if arr.shape != (n,):
                raise ValueError(f"{name} has shape {arr.shape}, expected ({n},)")
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.diag_c.shape[0]

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        return (
            self.diag_a * cyclic(x, 2)
            + self.diag_b * cyclic(x, 1)
            + self.diag_c * x
            + self.diag_d * cyclic(x, -1)
            + self.diag_e * cyclic(x, -2)
        )

    def residual(self, x, rhs) -> float:
        return float(np.max(np.abs(self.matvec(x) - rhs)))

    def dominance_violations(self) -> int:
        off = np.abs(self.diag_a) + np.abs(self.diag_b) + np.abs(self.diag_d) + np.abs(self.diag_e)
        return int(np.count_nonzero(np.abs(self.diag_c) < off))

    def to_dense(self) -> np.ndarray:
        n = self.n
        M = np.zeros((n, n))
        rows = np.arange(n)
        for offset, diag in ((-2, self.diag_a), (-1, self.diag_b), (0, self.diag_c), (1, self.diag_d), (2, self.diag_e)):
            np.add.at(M, (rows, (rows + offset) % n), diag)
        return M


@numba.njit(cache=True)
def _sor_sweeps(a, b, c, d, e, rhs, x, relax, tol, max_iters):
    n = x.shape[0]
    change = np.inf
    for it in range(1, max_iters + 1):
        change = 0.0
        for i in range(n):
            im2 = i - 2 if i >= 2 else i - 2 + n
            im1 = i - 1 if i >= 1 else n - 1
            ip1 = i + 1 if i + 1 < n else 0
            ip2 = i + 2 if i + 2 < n else i + 2 - n
            gs = (rhs[i] - a[i] * x[im2] - b[i] * x[im1] - d[i] * x[ip1] - e[i] * x[ip2]) / c[i]
            new = x[i] + relax * (gs - x[i])
            diff = abs(new - x[i])
            if diff > change:
                change = diff
            x[i] = new
        if change < tol:
            return it, change
    return -1, change


def sor_solve(sys: BandSystem, rhs, x0, relax: float = 1.6, tol: float = 1e-10, max_iters: int | None = None):
    """Solve ``sys @ x = rhs`` by successive over-relaxation.

    Sweeps run in ascending row order, reading wrapped neighbours from the
    current iterate. Iteration stops once the max-norm change between two
    sweeps drops below ``tol``; ``relax = 1`` is plain Gauss-Seidel.

    Returns
    -------
    x : ndarray
    iterations : int

    Raises
    ------
    MaxItersExceeded
        If ``max_iters`` sweeps do not converge; the exception carries the
        last iterate.
    """
    if not 0.0 < relax < 2.0:
        raise ValueError(f"relaxation factor must lie in (0, 2), got {relax}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if np.any(sys.diag_c == 0.0):
        raise ZeroDiagonal(f"zero main diagonal at row {int(np.flatnonzero(sys.diag_c == 0.0)[0])}")
    if max_iters is None:
        max_iters = 10 * sys.n
    rhs = np.ascontiguousarray(rhs, dtype=np.float64)
    x = np.array(x0, dtype=np.float64)
    iterations, change = _sor_sweeps(
        sys.diag_a, sys.diag_b, sys.diag_c, sys.diag_d, sys.diag_e, rhs, x, float(relax), float(tol), int(max_iters)
    )
    if iterations < 0:
        raise MaxItersExceeded(x, max_iters, change)
    return x, iterations


def dense_oracle_solve(sys: BandSystem, rhs) -> np.ndarray:
    """Reference solution through the dense matrix (LU with partial pivoting)."""
    if sys.n > DENSE_LIMIT:
        raise ValueError(f"dense oracle limited to n <= {DENSE_LIMIT}")
    M = sys.to_dense()
    try:
        x = np.linalg.solve(M, np.asarray(rhs, dtype=float))
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularMatrix("dense solve produced non-finite values")
    return x
