"""
High-resolution periodic trapezoid quadrature for a fixed catalog of integrands
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from gpsav.core.grid import Field, Grid, deriv, make_grid
from gpsav.exceptions import InvalidArgumentError, UnknownIntegrandError
from gpsav.initial.gaussian import gaussian_values
from gpsav.initial.plane_wave import plane_wave_values


@dataclass(frozen=True)
class IntegrandSpec:
    """
    Catalog entry id plus its parameters.

    ``lower``/``upper`` default to the unit box for "unit" and to [-8, 8]^d
    otherwise.
    """
    name: str
    dim: int = 3
    gammas: tuple[float, ...] = (1.0, 1.0, 1.0)
    lower: Optional[tuple[float, ...]] = None
    upper: Optional[tuple[float, ...]] = None
    wavenumber: tuple[int, ...] = (1, 0, 0)
    amplitude: complex = 1.0
    beta: float = 0.0


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    closed_form: Optional[float] = None

    @property
    def discrepancy(self) -> Optional[float]:
        if self.closed_form is None:
            return None
        return abs(self.value - self.closed_form)


def _box(spec: IntegrandSpec) -> tuple[tuple[float, ...], tuple[float, ...]]:
    if spec.name == "unit":
        default_lower, default_upper = 0.0, 1.0
    else:
        default_lower, default_upper = -8.0, 8.0
    lower = spec.lower if spec.lower is not None else (default_lower,) * spec.dim
    upper = spec.upper if spec.upper is not None else (default_upper,) * spec.dim
    return tuple(lower), tuple(upper)


def _unit(spec: IntegrandSpec, grid: Grid):
    values = np.ones(grid.shape)
    volume = float(np.prod(np.subtract(grid.upper, grid.lower)))
    return values, volume


def _gaussian_mass(spec: IntegrandSpec, grid: Grid):
    psi = gaussian_values(grid, spec.gammas)
    d = spec.dim
    closed = 1.0 / (2.0 ** (d - 1) * np.sqrt(np.prod(spec.gammas[:d])))
    return np.abs(psi) ** 2, float(closed)


def _gaussian_quartic(spec: IntegrandSpec, grid: Grid):
    psi = gaussian_values(grid, spec.gammas)
    d = spec.dim
    closed = 2.0 ** (-2 * (d - 1) - d / 2) * np.pi ** (-d / 2)
    return np.abs(psi) ** 4, float(closed)


def _plane_wave_energy(spec: IntegrandSpec, grid: Grid):
    """Density 1/2 |grad psi|^2 + beta/2 |psi|^4 of a plane wave"""
    psi = Field.from_array(grid, plane_wave_values(grid, spec.wavenumber, spec.amplitude))
    gradient = sum(np.abs(deriv(psi, axis, 1).values) ** 2 for axis in range(grid.dim))
    density = 0.5 * gradient + 0.5 * spec.beta * np.abs(psi.values) ** 4
    volume = float(np.prod(np.subtract(grid.upper, grid.lower)))
    kinetic = sum((spec.wavenumber[w] * grid.mu[w]) ** 2 for w in range(grid.dim))
    a2 = abs(spec.amplitude) ** 2
    closed = volume * (0.5 * a2 * kinetic + 0.5 * spec.beta * a2 * a2)
    return density, float(closed)


CATALOG: dict[str, Callable] = {
    "unit": _unit,
    "gaussian_mass": _gaussian_mass,
    "gaussian_quartic": _gaussian_quartic,
    "plane_wave_energy": _plane_wave_energy,
}


def quadrature_oracle(integrand_spec: IntegrandSpec, resolution: int) -> QuadratureResult:
    """
    Integrate a catalog integrand with the periodic trapezoid rule on a
    ``resolution``-point-per-axis grid. Pick ``resolution`` at least four
    times the working resolution of the run being checked.

    Raises:
        UnknownIntegrandError: If the name is not in the catalog
    """
    try:
        integrand = CATALOG[integrand_spec.name]
    except KeyError:
        raise UnknownIntegrandError(
            f"unknown integrand {integrand_spec.name!r}; available: {', '.join(CATALOG)}"
        )
    if resolution < 4 or resolution % 2:
        raise InvalidArgumentError(f"resolution must be even and >= 4, got {resolution}")
    lower, upper = _box(integrand_spec)
    grid = make_grid(integrand_spec.dim, [resolution] * integrand_spec.dim, lower, upper)
    values, closed = integrand(integrand_spec, grid)
    return QuadratureResult(value=float(grid.cell_volume * np.sum(values)), closed_form=closed)
