"""
Shared fixtures: seeded random numbers, small grids and a random-field factory
"""

import numpy as np
import pytest

from gpsav.core.grid import Field, Grid, make_grid


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def grid_1d() -> Grid:
    return make_grid(1, [8], [-np.pi], [np.pi])


@pytest.fixture
def grid_2d() -> Grid:
    return make_grid(2, [8, 8], [-np.pi, -np.pi], [np.pi, np.pi])


@pytest.fixture
def grid_3d() -> Grid:
    return make_grid(3, [8, 6, 4], [0.0, -1.0, -2.0], [2 * np.pi, 1.0, 2.0])


@pytest.fixture
def random_field(rng):
    """random_field(grid, scale=1.0) -> complex Field with max modulus about ``scale``"""

    def make(grid: Grid, scale: float = 1.0) -> Field:
        values = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
        values = scale * values / np.max(np.abs(values))
        return Field.from_array(grid, values)

    return make
