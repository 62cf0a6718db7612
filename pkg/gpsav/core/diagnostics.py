"""
Invariant-drift tracking, error norms and convergence rates
"""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from gpsav.core.grid import Field, max_norm, norm
from gpsav.core.models import GpParams, SavState, StepStats
from gpsav.core.operator import GpOperator
from gpsav.core.state import hamiltonian_energy, mass, modified_energy
from gpsav.exceptions import InvalidArgumentError, UndefinedRateError

logger = logging.getLogger(__name__)


@dataclass
class DriftSeries:
    """Per-recorded-step invariants and their drift from step 0"""
    steps: list[int] = field(default_factory=list)
    times: list[float] = field(default_factory=list)
    mass: list[float] = field(default_factory=list)
    mass_err: list[float] = field(default_factory=list)
    energy: list[float] = field(default_factory=list)
    quad_err: list[float] = field(default_factory=list)
    hamiltonian: list[float] = field(default_factory=list)
    ham_err: list[float] = field(default_factory=list)
    q_series: list[float] = field(default_factory=list)
    iterations: list[int] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def rows(self):
        """Yield one tuple per record in diagnostics CSV column order"""
        yield from zip(
            self.steps,
            self.times,
            self.mass,
            self.mass_err,
            self.energy,
            self.quad_err,
            self.hamiltonian,
            self.ham_err,
            self.q_series,
            self.iterations,
            self.residuals,
        )

    @property
    def max_mass_err(self) -> float:
        return max(self.mass_err, default=0.0)

    @property
    def max_quad_err(self) -> float:
        return max(self.quad_err, default=0.0)

    @property
    def max_ham_err(self) -> float:
        return max(self.ham_err, default=0.0)


class DriftTracker:
    """
    Observer for ``SavIntegrator.evolve`` that records e(M), e(E), e(H).

    Call ``start`` with the initial state, then pass the tracker as the
    observer. Every ``stride``-th step is recorded; ``record(..., force=True)``
    records regardless (used for the final step).
    """

    def __init__(
        self,
        params: GpParams,
        operator: GpOperator,
        stride: int = 1,
    ):
        if stride < 1:
            raise InvalidArgumentError(f"stride must be >= 1, got {stride}")
        self.params = params
        self.operator = operator
        self.stride = stride
        self.series = DriftSeries()

        self.start_time: Optional[float] = None
        self._m0 = 0.0
        self._e0 = 0.0
        self._h0 = 0.0
        self._last_step = -1

    def start(self, state: SavState, t0: float = 0.0) -> None:
        self.start_time = time.time()
        self._m0 = mass(state)
        self._e0 = modified_energy(self.params, state, self.operator)
        self._h0 = hamiltonian_energy(self.params, state, self.operator)
        self._append(0, t0, state, StepStats(iterations=0, residual=0.0))

    def __call__(self, index: int, t: float, state: SavState, stats: StepStats) -> None:
        if index % self.stride == 0:
            self._append(index, t, state, stats)

    def record(
        self,
        index: int,
        t: float,
        state: SavState,
        stats: StepStats,
        force: bool = False,
    ) -> None:
        if force or index % self.stride == 0:
            self._append(index, t, state, stats)

    def _append(self, index: int, t: float, state: SavState, stats: StepStats) -> None:
        if index == self._last_step:
            return
        m = mass(state)
        e = modified_energy(self.params, state, self.operator)
        h = hamiltonian_energy(self.params, state, self.operator)
        s = self.series
        s.steps.append(index)
        s.times.append(t)
        s.mass.append(m)
        s.mass_err.append(abs(m - self._m0))
        s.energy.append(e)
        s.quad_err.append(abs(e - self._e0))
        s.hamiltonian.append(h)
        s.ham_err.append(abs(h - self._h0))
        s.q_series.append(state.q)
        s.iterations.append(stats.iterations)
        s.residuals.append(stats.residual)
        self._last_step = index

    @property
    def elapsed(self) -> float:
        if self.start_time is None:
            return 0.0
        return time.time() - self.start_time


def field_error(u: Field, v: Field, norm_kind: str = "inf") -> float:
    """
    Distance between two fields on the same grid.

    Args:
        norm_kind: "inf" for ||u - v||_{inf,h}, "l2" for ||u - v||_h
    """
    if not u.grid.same_as(v.grid):
        raise InvalidArgumentError("fields live on different grids")
    diff = Field(grid=u.grid, data=u.data - v.data)
    if norm_kind == "inf":
        return max_norm(diff)
    if norm_kind == "l2":
        return norm(diff)
    raise InvalidArgumentError(f"unknown norm {norm_kind!r}, expected 'inf' or 'l2'")


def convergence_rate(errors: Sequence[float], steps: Sequence[float]) -> np.ndarray:
    """
    Pairwise observed orders ln(e1/e2) / ln(d1/d2) along a step-size ladder.

    Raises:
        UndefinedRateError: If any error is zero or negative
        InvalidArgumentError: On length mismatch, fewer than 2 entries or
            repeated step sizes
    """
    errors = np.asarray(errors, dtype=float)
    steps = np.asarray(steps, dtype=float)
    if errors.shape != steps.shape or errors.ndim != 1:
        raise InvalidArgumentError("errors and steps must be 1D arrays of equal length")
    if errors.shape[0] < 2:
        raise InvalidArgumentError("need at least two ladder entries for a rate")
    if np.any(errors <= 0) or not np.all(np.isfinite(errors)):
        raise UndefinedRateError("errors must be positive and finite (error floor reached?)")
    if np.any(steps <= 0) or np.any(steps[:-1] == steps[1:]):
        raise InvalidArgumentError("steps must be positive and pairwise distinct")
    return np.log(errors[:-1] / errors[1:]) / np.log(steps[:-1] / steps[1:])


def format_time(seconds: float) -> str:
    """Format seconds to human-readable string"""
    if seconds < 1:
        return f"{seconds * 1000:.0f}ms"
    elif seconds < 60:
        return f"{seconds:.1f}s"
    elif seconds < 3600:
        return f"{seconds // 60:.0f}m {seconds % 60:.0f}s"
    else:
        return f"{seconds // 3600:.0f}h {(seconds % 3600) // 60:.0f}m"


def format_error(value: float) -> str:
    """Scientific notation used in rate tables"""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    return f"{value:.4e}"
