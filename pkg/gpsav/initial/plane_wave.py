"""
Plane wave A e^{i sum k_w mu_w x_w}
"""

import numpy as np

from gpsav.core.grid import Field, Grid
from gpsav.exceptions import InvalidArgumentError
from gpsav.initial.base import InitialCondition, InitialSpec


def plane_wave_values(grid: Grid, wavenumber, amplitude: complex) -> np.ndarray:
    if len(wavenumber) < grid.dim:
        raise InvalidArgumentError(
            f"plane wave needs {grid.dim} wavenumbers, got {len(wavenumber)}"
        )
    phase = np.zeros(grid.shape)
    for axis in range(grid.dim):
        k = wavenumber[axis]
        if abs(k) >= grid.sizes[axis] // 2:
            raise InvalidArgumentError(
                f"axis {axis}: wavenumber {k} not below Nyquist ({grid.sizes[axis] // 2})"
            )
        phase = phase + k * grid.mu[axis] * grid.coordinate(axis)
    return amplitude * np.exp(1j * phase)


def plane_wave_frequency(grid: Grid, wavenumber, amplitude: complex, beta: float) -> float:
    """Angular frequency of the exact solution psi(t) = psi_0 e^{-i w t} for V = 0, Omega = 0"""
    kinetic = sum((wavenumber[axis] * grid.mu[axis]) ** 2 for axis in range(grid.dim))
    return 0.5 * kinetic + beta * abs(amplitude) ** 2


class PlaneWaveInitial(InitialCondition):
    name = "plane_wave"
    description = "Constant-modulus plane wave with integer wavenumbers"

    def build(self, spec: InitialSpec, grid: Grid) -> Field:
        return Field.from_array(grid, plane_wave_values(grid, spec.wavenumber, spec.amplitude))
