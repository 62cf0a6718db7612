"""
Gauss collocation time stepping of the SAV-reformulated GP equation

One step solves the coupled stage equations

    k_i = -i L_h psi^n - i tau sum_j a_ij L_h k_j - i beta Phi_i Q_i

by fixed-point iteration in which only the Laplacian part of L_h is implicit.
In Fourier space that part is diagonal, so each iteration reduces to an s x s
complex solve per mode:

    (I - (i tau / 2) lambda_j A) khat_j = fhat_j

with lambda_j the total second-derivative eigenvalue of mode j.
"""

import logging
from typing import Callable, Optional

import numpy as np
import scipy.fft

from gpsav.core.grid import Field, fft_workers
from gpsav.core.models import (
    GpParams,
    InitialGuess,
    SavState,
    SolverOptions,
    StageWork,
    StepStats,
)
from gpsav.core.operator import GpOperator
from gpsav.core.tableau import ButcherTableau
from gpsav.exceptions import (
    IntegrationError,
    InvalidArgumentError,
    NumericalBlowupError,
    StepDivergedError,
)

logger = logging.getLogger(__name__)

Observer = Callable[[int, float, SavState, StepStats], None]


class SavIntegrator:
    """
    Fast stage solver for one grid, parameter set and tableau.

    Features:
    - Per-mode s x s solves in Fourier space (Laplacian implicit)
    - Potential and rotation terms lagged in the fixed-point iteration
    - Observer callback after every step of ``evolve``
    """

    def __init__(
        self,
        params: GpParams,
        tableau: ButcherTableau,
        options: Optional[SolverOptions] = None,
        operator: Optional[GpOperator] = None,
        grid=None,
    ):
        if operator is None:
            if grid is None:
                raise InvalidArgumentError("either an operator or a grid is required")
            operator = GpOperator(params, grid)
        self.params = params
        self.tableau = tableau
        self.options = options or SolverOptions()
        self.operator = operator
        self.grid = operator.grid
        self.last_work: Optional[StageWork] = None

        self._mode_tau: Optional[float] = None
        self._mode_matrices: Optional[np.ndarray] = None
        self._previous_k: Optional[np.ndarray] = None

    # Stage algebra (leading axis = stage)

    def _stage_sum(self, coefficients: np.ndarray, stacked: np.ndarray) -> np.ndarray:
        return np.tensordot(coefficients, stacked, axes=(-1, 0))

    def _nonlinear(self, psi_stages: np.ndarray) -> np.ndarray:
        """Phi_i = |Psi_i|^2 Psi_i / sqrt(||Psi_i||_{4,h}^4 + C0)"""
        density = np.abs(psi_stages) ** 2
        axes = tuple(range(1, psi_stages.ndim))
        quartic = self.grid.cell_volume * np.sum(density * density, axis=axes)
        scale = 1.0 / np.sqrt(quartic + self.params.c0)
        return density * psi_stages * self.grid.broadcast_stages(scale)

    def _stage_scalars(self, k: np.ndarray, phi: np.ndarray) -> np.ndarray:
        """l_i = 2 Re <k_i, Phi_i>_h"""
        axes = tuple(range(1, k.ndim))
        return 2.0 * self.grid.cell_volume * np.sum((k * np.conj(phi)).real, axis=axes)

    def _stages(self, psi: np.ndarray, q: float, k: np.ndarray, tau: float):
        psi_stages = psi[None] + tau * self._stage_sum(self.tableau.a, k)
        phi = self._nonlinear(psi_stages)
        l = self._stage_scalars(k, phi)
        q_stages = q + tau * (self.tableau.a @ l)
        return psi_stages, phi, l, q_stages

    def _matrices(self, tau: float) -> np.ndarray:
        if self._mode_tau != tau:
            s = self.tableau.s
            lam = self.grid.laplacian_symbol.reshape(-1)
            self._mode_matrices = (
                np.eye(s)[None, :, :] - (0.5j * tau) * lam[:, None, None] * self.tableau.a[None]
            )
            self._mode_tau = tau
        return self._mode_matrices

    def _solve_modes(self, fhat: np.ndarray, tau: float) -> np.ndarray:
        s = self.tableau.s
        rhs = fhat.reshape(s, -1).T[:, :, None]
        khat = np.linalg.solve(self._matrices(tau), rhs)[:, :, 0]
        return khat.T.reshape(fhat.shape)

    def _initial_slopes(self, psi: np.ndarray, q: float, linear_psi: np.ndarray) -> np.ndarray:
        s = self.tableau.s
        guess = self.options.initial_guess
        if guess is InitialGuess.PREVIOUS_STEP and self._previous_k is not None:
            return self._previous_k.copy()
        phi0 = self._nonlinear(psi[None])[0]
        slope = -1j * (linear_psi + self.params.beta * q * phi0)
        return np.repeat(slope[None], s, axis=0)

    def step(self, state: SavState, tau: float) -> tuple[SavState, StepStats]:
        """
        Advance (psi, q) by one step of size tau.

        Raises:
            StepDivergedError: If the slopes do not settle within max_iter
            NumericalBlowupError: If an iterate contains NaN or Inf
        """
        if not tau > 0:
            raise InvalidArgumentError(f"tau must be positive, got {tau}")
        if not state.grid.same_as(self.grid):
            raise InvalidArgumentError("state and integrator live on different grids")

        beta = self.params.beta
        tab = self.tableau
        axes = tuple(range(1, self.grid.dim + 1))
        workers = fft_workers()

        psi = state.psi.values
        q = state.q
        linear_psi = self.operator.apply(psi)
        k = self._initial_slopes(psi, q, linear_psi)

        residual = np.inf
        iterations = 0
        fhat = None
        for iterations in range(1, self.options.max_iter + 1):
            _, phi, _, q_stages = self._stages(psi, q, k, tau)
            lagged = self._stage_sum(tab.a, self.operator.nonstiff(k))
            f = (
                -1j * linear_psi[None]
                - 1j * tau * lagged
                - 1j * beta * phi * self.grid.broadcast_stages(q_stages)
            )
            fhat = scipy.fft.fftn(f, axes=axes, workers=workers)
            k_next = scipy.fft.ifftn(self._solve_modes(fhat, tau), axes=axes, workers=workers)
            if not np.all(np.isfinite(k_next)):
                raise NumericalBlowupError(
                    f"non-finite stage slopes at iteration {iterations}"
                )
            residual = float(np.max(np.abs(k_next - k)))
            k = k_next
            threshold = self.options.tol * max(1.0, float(np.max(np.abs(k))))
            if residual < threshold:
                break
        else:
            raise StepDivergedError(
                f"fixed point did not converge in {self.options.max_iter} iterations "
                f"(residual {residual:.3e})",
                residual=residual,
                iterations=self.options.max_iter,
            )

        psi_stages, phi, l, q_stages = self._stages(psi, q, k, tau)
        psi_next = psi + tau * self._stage_sum(tab.b, k)
        q_next = q + tau * float(tab.b @ l)
        if not (np.all(np.isfinite(psi_next)) and np.isfinite(q_next)):
            raise NumericalBlowupError("non-finite state after update")

        self._previous_k = k
        self.last_work = StageWork(
            k=k, l=l, psi_stages=psi_stages, q_stages=q_stages, phi=phi, fhat=fhat
        )
        stats = StepStats(iterations=iterations, residual=residual)
        logger.debug("step converged in %d iterations, residual %.3e", iterations, residual)
        return SavState(psi=Field.from_array(self.grid, psi_next), q=q_next), stats

    def evolve(
        self,
        state0: SavState,
        tau: float,
        n_steps: int,
        observer: Optional[Observer] = None,
        t0: float = 0.0,
    ) -> SavState:
        """
        Apply ``step`` n_steps times, calling observer(index, time, state, stats)
        after each one. Step errors are re-raised with the step index attached.
        """
        if n_steps < 0:
            raise InvalidArgumentError(f"n_steps must be >= 0, got {n_steps}")
        state = state0
        for index in range(1, n_steps + 1):
            try:
                state, stats = self.step(state, tau)
            except IntegrationError as e:
                raise e.at_step(index)
            if observer:
                observer(index, t0 + index * tau, state, stats)
        return state


def step(
    params: GpParams,
    tab: ButcherTableau,
    opts: SolverOptions,
    state: SavState,
    tau: float,
) -> tuple[SavState, StepStats]:
    """Convenience function: one step with a freshly prepared integrator"""
    return SavIntegrator(params, tab, opts, grid=state.grid).step(state, tau)


def evolve(
    params: GpParams,
    tab: ButcherTableau,
    opts: SolverOptions,
    state0: SavState,
    tau: float,
    n_steps: int,
    observer: Optional[Observer] = None,
) -> SavState:
    """Convenience function: n_steps steps with a freshly prepared integrator"""
    integrator = SavIntegrator(params, tab, opts, grid=state0.grid)
    return integrator.evolve(state0, tau, n_steps, observer)
