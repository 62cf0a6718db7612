"""
Dense reference operators and stage solver for tiny grids

Everything here is materialised: per-axis derivative matrices are built as
F^{-1} diag(Lambda) F from explicit DFT matrices and combined with Kronecker
products in (z, y, x) order, which matches the x-fastest flat storage of
Field. Used only to check the FFT path.
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from gpsav.core.grid import Field, Grid
from gpsav.core.models import GpParams, SavState, SolverOptions, StepStats
from gpsav.core.operator import evaluate_potential
from gpsav.core.tableau import ButcherTableau
from gpsav.exceptions import (
    InvalidArgumentError,
    NumericalBlowupError,
    OracleSizeError,
    StepDivergedError,
    UnsupportedOperationError,
)

logger = logging.getLogger(__name__)

MAX_DENSE_POINTS = 4096


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """Materialised n x n matrix acting on flat fields of one grid"""
    grid: Grid
    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def hermitian_residual(self) -> float:
        """max |M - M^H| entrywise"""
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def apply(self, field: Field) -> Field:
        if not field.grid.same_as(self.grid):
            raise InvalidArgumentError("field and dense operator live on different grids")
        return Field(grid=self.grid, data=self.matrix @ field.data)


def _check_size(grid: Grid) -> None:
    if grid.npoints > MAX_DENSE_POINTS:
        raise OracleSizeError(
            f"dense oracle limited to {MAX_DENSE_POINTS} points, grid has {grid.npoints}"
        )


def dft_matrix(n: int) -> np.ndarray:
    """F[p, j] = exp(-2 pi i p j / n), the unnormalised forward DFT"""
    p = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(p, p) / n)


def derivative_matrix(grid: Grid, axis: int, order: int) -> np.ndarray:
    """Per-axis D_1 or D_2 as F^{-1} diag(Lambda) F"""
    if order not in (1, 2):
        raise InvalidArgumentError(f"derivative order must be 1 or 2, got {order}")
    grid.axis_of(axis)
    n = grid.sizes[axis]
    f = dft_matrix(n)
    symbol = grid.eig1[axis] if order == 1 else grid.eig2[axis]
    return (f.conj().T @ np.diag(symbol) @ f) / n


def _embed(grid: Grid, axis: int, block: np.ndarray) -> np.ndarray:
    """Kronecker-embed a per-axis matrix; slowest axis (z) leftmost"""
    result = np.eye(1)
    for w in reversed(range(grid.dim)):
        factor = block if w == axis else np.eye(grid.sizes[w])
        result = np.kron(result, factor)
    return result


def dense_derivative(grid: Grid, axis: int, order: int) -> np.ndarray:
    _check_size(grid)
    return _embed(grid, axis, derivative_matrix(grid, axis, order))


def dense_laplacian(grid: Grid) -> np.ndarray:
    _check_size(grid)
    return sum(dense_derivative(grid, axis, 2) for axis in range(grid.dim))


def dense_lz(grid: Grid) -> np.ndarray:
    """-i (diag(x) D_y - diag(y) D_x)"""
    if grid.dim < 2:
        raise UnsupportedOperationError("L_z needs dim >= 2")
    _check_size(grid)
    x = _embed(grid, 0, np.diag(grid.coords[0]))
    y = _embed(grid, 1, np.diag(grid.coords[1]))
    return -1j * (x @ dense_derivative(grid, 1, 1) - y @ dense_derivative(grid, 0, 1))


def assemble_dense(params: GpParams, grid: Grid) -> DenseOperator:
    """
    Dense L_h = -1/2 Delta_h + diag(V) - Omega L_z^h.

    Raises:
        OracleSizeError: If the grid has more than 4096 points
    """
    _check_size(grid)
    if params.omega != 0.0 and grid.dim < 2:
        raise UnsupportedOperationError("rotation term needs dim >= 2")
    potential = evaluate_potential(params.potential, grid).reshape(-1)
    matrix = -0.5 * dense_laplacian(grid) + np.diag(potential).astype(complex)
    if params.omega != 0.0:
        matrix = matrix - params.omega * dense_lz(grid)
    logger.debug("assembled dense operator of size %d", grid.npoints)
    return DenseOperator(grid=grid, matrix=matrix)


def _stage_nonlinear(psi_stages: np.ndarray, cell_volume: float, c0: float) -> np.ndarray:
    density = np.abs(psi_stages) ** 2
    quartic = cell_volume * np.sum(density * density, axis=1)
    return density * psi_stages / np.sqrt(quartic + c0)[:, None]


def dense_step(
    params: GpParams,
    tab: ButcherTableau,
    opts: SolverOptions,
    state: SavState,
    tau: float,
    operator: Optional[DenseOperator] = None,
) -> SavState:
    """
    One step of the same stage equations with the full L_h implicit.

    Each iteration solves the (s n) x (s n) block system
    (I + i tau A kron L_h) k = -i (1 kron L_h psi) - i beta Phi Q
    with an LU factorisation computed once per call.
    """
    grid = state.grid
    if tau < 0:
        raise InvalidArgumentError(f"tau must be non-negative, got {tau}")
    if tau == 0:
        return state
    if operator is None:
        operator = assemble_dense(params, grid)

    s = tab.s
    n = grid.npoints
    h = grid.cell_volume
    beta = params.beta
    matrix = operator.matrix
    psi = state.psi.data
    q = state.q

    block = np.eye(s * n, dtype=complex) + 1j * tau * np.kron(tab.a, matrix)
    lu = scipy.linalg.lu_factor(block)
    linear_psi = matrix @ psi

    def stages(k):
        psi_stages = psi[None, :] + tau * (tab.a @ k)
        phi = _stage_nonlinear(psi_stages, h, params.c0)
        l = 2.0 * h * np.sum((k * np.conj(phi)).real, axis=1)
        return psi_stages, phi, l, q + tau * (tab.a @ l)

    phi0 = _stage_nonlinear(psi[None, :], h, params.c0)[0]
    k = np.repeat((-1j * (linear_psi + beta * q * phi0))[None, :], s, axis=0)

    residual = np.inf
    for iteration in range(1, opts.max_iter + 1):
        _, phi, _, q_stages = stages(k)
        rhs = -1j * linear_psi[None, :] - 1j * beta * phi * q_stages[:, None]
        k_next = scipy.linalg.lu_solve(lu, rhs.reshape(-1)).reshape(s, n)
        if not np.all(np.isfinite(k_next)):
            raise NumericalBlowupError(f"non-finite dense stage slopes at iteration {iteration}")
        residual = float(np.max(np.abs(k_next - k)))
        k = k_next
        if residual < opts.tol * max(1.0, float(np.max(np.abs(k)))):
            break
    else:
        raise StepDivergedError(
            f"dense fixed point did not converge in {opts.max_iter} iterations",
            residual=residual,
            iterations=opts.max_iter,
        )

    _, _, l, _ = stages(k)
    psi_next = psi + tau * (tab.b @ k)
    q_next = q + tau * float(tab.b @ l)
    logger.debug("dense step: %s", StepStats(iterations=iteration, residual=residual))
    return SavState(psi=Field(grid=grid, data=psi_next), q=q_next)


def pade_coefficients(s: int) -> np.ndarray:
    """Numerator coefficients of the (s, s) Pade approximant of exp(z)"""
    return np.array(
        [
            math.factorial(2 * s - k) * math.factorial(s)
            / (math.factorial(2 * s) * math.factorial(k) * math.factorial(s - k))
            for k in range(s + 1)
        ]
    )


def pade_propagator(operator: DenseOperator, tau: float, s: int) -> np.ndarray:
    """
    R(-i tau L_h) with R = P(z) / P(-z), the stability function of the
    s-stage Gauss method. Equals one linear (beta = 0) step as a matrix.
    """
    coefficients = pade_coefficients(s)
    z = -1j * tau * operator.matrix
    eye = np.eye(operator.n, dtype=complex)
    numerator = np.zeros_like(eye)
    denominator = np.zeros_like(eye)
    power = eye
    for k, coefficient in enumerate(coefficients):
        numerator = numerator + coefficient * power
        denominator = denominator + coefficient * (-1) ** k * power
        power = power @ z
    return np.linalg.solve(denominator, numerator)
