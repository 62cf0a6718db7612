"""
Discrete linear GP operator L_h u = -1/2 Delta_h u + V u - Omega L_z^h u
"""

import logging

import numpy as np

from gpsav.core.grid import Field, Grid, spectral_derivative, spectral_laplacian
from gpsav.core.models import GpParams, PotentialKind, PotentialSpec
from gpsav.exceptions import InvalidArgumentError, UnsupportedOperationError

logger = logging.getLogger(__name__)


def evaluate_potential(spec: PotentialSpec, grid: Grid) -> np.ndarray:
    """
    Sample V on the grid.

    Harmonic: V = scale * sum_w gamma_w^2 x_w^2 / 2 over the grid's axes.
    From file: real part of a snapshot on the same grid, times ``scale``.
    """
    if spec.kind is PotentialKind.HARMONIC:
        if len(spec.gammas) < grid.dim:
            raise InvalidArgumentError(
                f"harmonic potential needs {grid.dim} trap frequencies, got {len(spec.gammas)}"
            )
        potential = np.zeros(grid.shape)
        for axis in range(grid.dim):
            gamma = spec.gammas[axis]
            potential = potential + 0.5 * gamma**2 * grid.coordinate(axis) ** 2
        potential = spec.scale * potential
    else:
        from gpsav.storage.snapshot import read_snapshot

        snapshot = read_snapshot(spec.path)
        if not snapshot.grid.same_as(grid):
            raise InvalidArgumentError(
                f"potential file {spec.path} is on grid {snapshot.grid.sizes}, "
                f"expected {grid.sizes}"
            )
        potential = spec.scale * snapshot.psi.values.real.copy()
        logger.info("loaded potential from %s", spec.path)

    potential.setflags(write=False)
    return potential


def _rotation(values: np.ndarray, grid: Grid) -> np.ndarray:
    x = grid.coordinate(0)
    y = grid.coordinate(1)
    dx = spectral_derivative(values, grid, 0, 1)
    dy = spectral_derivative(values, grid, 1, 1)
    return -1j * (x * dy - y * dx)


class GpOperator:
    """
    Prepared linear operator on a fixed grid.

    V is sampled once at construction; build a new operator when the grid or
    potential changes. Array methods accept any leading batch axes.
    """

    def __init__(self, params: GpParams, grid: Grid):
        if params.omega != 0.0 and grid.dim < 2:
            raise UnsupportedOperationError("rotation term needs dim >= 2")
        self.params = params
        self.grid = grid
        self.potential = evaluate_potential(params.potential, grid)

    def rotation(self, values: np.ndarray) -> np.ndarray:
        """L_z^h applied to an array"""
        return _rotation(values, self.grid)

    def nonstiff(self, values: np.ndarray) -> np.ndarray:
        """The non-Laplacian part V u - Omega L_z^h u"""
        result = self.potential * values
        if self.params.omega != 0.0:
            result = result - self.params.omega * self.rotation(values)
        return result

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Full L_h applied to an array"""
        return -0.5 * spectral_laplacian(values, self.grid) + self.nonstiff(values)

    def apply_linear(self, field: Field) -> Field:
        return Field.from_array(self.grid, self.apply(field.values))


def apply_lz(field: Field) -> Field:
    """
    Discrete angular momentum L_z^h u = -i (x D_y u - y D_x u).

    Uses physical coordinates including the domain offset.

    Raises:
        UnsupportedOperationError: On a 1D grid
    """
    if field.grid.dim < 2:
        raise UnsupportedOperationError("L_z needs dim >= 2")
    return Field.from_array(field.grid, _rotation(field.values, field.grid))


def apply_linear(params: GpParams, field: Field) -> Field:
    """Apply L_h once, preparing the operator on the fly"""
    return GpOperator(params, field.grid).apply_linear(field)
