"""
Normalised Gaussian ground-state surrogate psi_0 = c_d e^{-V}
"""

import numpy as np

from gpsav.core.grid import Field, Grid
from gpsav.exceptions import InvalidArgumentError
from gpsav.initial.base import InitialCondition, InitialSpec


def gaussian_values(grid: Grid, gammas) -> np.ndarray:
    """
    (prod gamma)^{1/4} / (2^{(d-1)/2} pi^{d/4}) * exp(-sum gamma_w^2 x_w^2 / 2)

    In 3D this is (gx gy gz)^{1/4} / (2 pi^{3/4}) e^{-V} with mass 1/4.
    """
    d = grid.dim
    if len(gammas) < d:
        raise InvalidArgumentError(f"gaussian needs {d} gammas, got {len(gammas)}")
    gammas = np.asarray(gammas[:d], dtype=float)
    if np.any(gammas <= 0):
        raise InvalidArgumentError(f"gaussian gammas must be positive, got {gammas.tolist()}")
    exponent = np.zeros(grid.shape)
    for axis in range(d):
        exponent = exponent + 0.5 * gammas[axis] ** 2 * grid.coordinate(axis) ** 2
    scale = np.prod(gammas) ** 0.25 / (2.0 ** ((d - 1) / 2) * np.pi ** (d / 4))
    return scale * np.exp(-exponent)


class GaussianInitial(InitialCondition):
    name = "gaussian"
    description = "Normalised Gaussian e^{-V} with per-axis trap frequencies"

    def build(self, spec: InitialSpec, grid: Grid) -> Field:
        return Field.from_array(grid, gaussian_values(grid, spec.gammas).astype(complex))
