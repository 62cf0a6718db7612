"""
Tests for periodic grids and spectral differentiation
"""

import numpy as np
import pytest
import scipy.fft

from gpsav.core.grid import (
    Field,
    deriv,
    fft_workers,
    inner,
    laplacian,
    lp_norm,
    make_grid,
    max_norm,
    norm,
)
from gpsav.exceptions import ConfigError, InvalidArgumentError, NumericalBlowupError
from gpsav.initial.gaussian import gaussian_values
from gpsav.oracle.dense import dense_laplacian


class TestMakeGrid:
    def test_symbols_on_2pi(self):
        grid = make_grid(1, [4], [0.0], [2 * np.pi])
        np.testing.assert_allclose(grid.eig1[0], 1j * np.array([0, 1, 0, -1]), atol=1e-15)
        np.testing.assert_allclose(grid.eig2[0], -np.array([0, 1, 4, 1]), atol=1e-15)

    def test_symbols_scale_with_mu(self):
        grid = make_grid(1, [4], [0.0], [np.pi])
        assert grid.mu[0] == pytest.approx(2.0)
        np.testing.assert_allclose(grid.eig2[0], -np.array([0, 4, 16, 4]), atol=1e-14)

    def test_coordinates_with_offset(self):
        grid = make_grid(2, [8, 8], [-8, -8], [8, 8])
        assert grid.spacing == (2.0, 2.0)
        assert grid.coords[0][0] == -8.0
        assert grid.coords[0][7] == 6.0
        assert grid.shape == (8, 8)
        assert grid.npoints == 64

    def test_symbol_invariants(self):
        grid = make_grid(3, [8, 6, 4], [0, 0, 0], [1, 2, 3])
        for axis in range(3):
            n = grid.sizes[axis]
            assert np.all(grid.eig1[axis].real == 0)
            assert grid.eig1[axis][n // 2] == 0
            assert np.all(grid.eig2[axis] <= 0)
            assert grid.eig2[axis][0] == 0

    def test_shape_is_slowest_first(self):
        grid = make_grid(3, [8, 6, 4], [0, 0, 0], [1, 1, 1])
        assert grid.shape == (4, 6, 8)
        assert grid.laplacian_symbol.shape == (4, 6, 8)

    def test_arrays_are_read_only(self):
        grid = make_grid(1, [4], [0], [1])
        with pytest.raises(ValueError):
            grid.coords[0][0] = 1.0

    @pytest.mark.parametrize(
        ("dim", "sizes", "lower", "upper"),
        [
            (1, [5], [0], [1]),
            (1, [2], [0], [1]),
            (1, [8], [1], [1]),
            (1, [8], [2], [1]),
            (4, [4] * 4, [0] * 4, [1] * 4),
            (2, [8], [0], [1]),
        ],
    )
    def test_invalid_arguments(self, dim, sizes, lower, upper):
        with pytest.raises(InvalidArgumentError):
            make_grid(dim, sizes, lower, upper)


class TestField:
    def test_flat_storage_is_x_fastest(self):
        grid = make_grid(2, [4, 6], [0, 0], [1, 1])
        x = grid.coordinate(0) + 0 * grid.coordinate(1)
        field = Field.from_array(grid, x)
        np.testing.assert_allclose(field.data[:4].real, grid.coords[0])

    def test_wrong_length(self, grid_1d):
        with pytest.raises(InvalidArgumentError):
            Field(grid=grid_1d, data=np.zeros(7))

    def test_non_finite(self, grid_1d):
        data = np.zeros(8, dtype=complex)
        data[3] = np.nan
        with pytest.raises(NumericalBlowupError):
            Field(grid=grid_1d, data=data)

    def test_data_is_copied_and_frozen(self, grid_1d):
        source = np.ones(8, dtype=complex)
        field = Field(grid=grid_1d, data=source)
        source[0] = 5.0
        assert field.data[0] == 1.0
        with pytest.raises(ValueError):
            field.data[0] = 2.0


class TestDerivatives:
    def test_first_derivative_of_exponential(self):
        grid = make_grid(1, [8], [0], [2 * np.pi])
        x = grid.coords[0]
        result = deriv(Field(grid=grid, data=np.exp(1j * x)), 0, 1)
        np.testing.assert_allclose(result.data, 1j * np.exp(1j * x), atol=1e-13)

    def test_constant_has_zero_derivative(self, grid_2d):
        field = Field(grid=grid_2d, data=np.full(64, 3.0 + 1j))
        for axis in range(2):
            assert max_norm(deriv(field, axis, 1)) <= 1e-13

    def test_second_derivative_of_sine(self):
        grid = make_grid(1, [16], [0], [np.pi])
        mu = grid.mu[0]
        x = grid.coords[0]
        result = deriv(Field(grid=grid, data=np.sin(2 * mu * x)), 0, 2)
        np.testing.assert_allclose(result.data, -4 * mu**2 * np.sin(2 * mu * x), atol=1e-12)

    @pytest.mark.parametrize("axis", [0, 1, 2])
    def test_axis_selection_3d(self, grid_3d, axis):
        mu = grid_3d.mu[axis]
        coordinate = grid_3d.coordinate(axis) + np.zeros(grid_3d.shape)
        values = np.exp(1j * mu * coordinate)
        result = deriv(Field.from_array(grid_3d, values), axis, 1)
        np.testing.assert_allclose(result.values, 1j * mu * values, atol=1e-12)
        for other in {0, 1, 2} - {axis}:
            assert max_norm(deriv(Field.from_array(grid_3d, values), other, 1)) <= 1e-12

    def test_exact_on_sub_nyquist_monomials(self):
        n = 16
        grid = make_grid(1, [n], [-1.0], [3.0])
        mu = grid.mu[0]
        x = grid.coords[0]
        for k in range(-n // 2 + 1, n // 2):
            f = np.exp(1j * k * mu * x)
            field = Field(grid=grid, data=f)
            np.testing.assert_allclose(deriv(field, 0, 1).data, 1j * k * mu * f, atol=1e-12)
            np.testing.assert_allclose(deriv(field, 0, 2).data, -((k * mu) ** 2) * f, atol=1e-12)

    def test_nyquist_mode(self):
        grid = make_grid(1, [8], [0], [2 * np.pi])
        f = Field(grid=grid, data=np.cos(4 * grid.coords[0]))
        assert max_norm(deriv(f, 0, 1)) <= 1e-13
        np.testing.assert_allclose(deriv(f, 0, 2).data, -16 * f.data, atol=1e-12)

    def test_invalid_axis_and_order(self, grid_1d):
        field = Field.zeros(grid_1d)
        with pytest.raises(InvalidArgumentError):
            deriv(field, 1, 1)
        with pytest.raises(InvalidArgumentError):
            deriv(field, 0, 3)

    def test_laplacian_of_plane_wave(self):
        grid = make_grid(2, [8, 8], [0, 0], [2 * np.pi, 2 * np.pi])
        f = np.exp(1j * (grid.coordinate(0) + grid.coordinate(1)))
        result = laplacian(Field.from_array(grid, f))
        np.testing.assert_allclose(result.values, -2 * f, atol=1e-12)

    def test_laplacian_of_constant(self, grid_3d):
        assert max_norm(laplacian(Field(grid=grid_3d, data=np.ones(grid_3d.npoints)))) <= 1e-12

    def test_laplacian_matches_dense_matrix(self, random_field):
        grid = make_grid(1, [8], [0], [1])
        u = random_field(grid)
        expected = dense_laplacian(grid) @ u.data
        np.testing.assert_allclose(laplacian(u).data, expected, atol=1e-12 * np.max(np.abs(expected)))

    def test_fft_round_trip(self, grid_3d, random_field):
        u = random_field(grid_3d)
        back = scipy.fft.ifftn(scipy.fft.fftn(u.values))
        assert np.max(np.abs(back - u.values)) <= 1e-13 * max_norm(u)


class TestInnerProduct:
    def test_constant_on_unit_interval(self):
        grid = make_grid(1, [8], [0], [1])
        one = Field(grid=grid, data=np.ones(8))
        assert inner(one, one) == pytest.approx(1.0)

    def test_conjugates_second_argument(self):
        grid = make_grid(1, [8], [0], [1])
        one = Field(grid=grid, data=np.ones(8))
        i = Field(grid=grid, data=np.full(8, 1j))
        assert inner(one, i) == pytest.approx(-1j)

    def test_grid_mismatch(self, grid_1d):
        other = make_grid(1, [8], [0], [1])
        with pytest.raises(InvalidArgumentError):
            inner(Field.zeros(grid_1d), Field.zeros(other))

    def test_gaussian_mass_3d(self):
        grid = make_grid(3, [32, 32, 32], [-8] * 3, [8] * 3)
        psi = Field.from_array(grid, gaussian_values(grid, (1.0, 1.0, 1.0)))
        assert norm(psi) ** 2 == pytest.approx(0.25, abs=1e-8)

    def test_norms(self):
        grid = make_grid(1, [4], [0], [2])
        u = Field(grid=grid, data=[1, -2, 0, 1j])
        assert max_norm(u) == pytest.approx(2.0)
        assert norm(u) == pytest.approx(np.sqrt(0.5 * 6))
        assert lp_norm(u, 4) == pytest.approx((0.5 * 18) ** 0.25)
        with pytest.raises(InvalidArgumentError):
            lp_norm(u, 0)


class TestOperatorIdentities:
    @pytest.mark.parametrize("fixture", ["grid_1d", "grid_2d", "grid_3d"])
    def test_first_derivative_is_skew(self, fixture, request, random_field):
        grid = request.getfixturevalue(fixture)
        for _ in range(100):
            u = random_field(grid)
            for axis in range(grid.dim):
                value = inner(deriv(u, axis, 1), u).real
                assert abs(value) <= 1e-12 * norm(u) ** 2

    @pytest.mark.parametrize("fixture", ["grid_1d", "grid_2d", "grid_3d"])
    def test_laplacian_is_symmetric(self, fixture, request, random_field):
        grid = request.getfixturevalue(fixture)
        for _ in range(100):
            u = random_field(grid)
            v = random_field(grid)
            residual = abs(inner(laplacian(u), v) - inner(u, laplacian(v)))
            assert residual <= 1e-12 * norm(u) * norm(v)


class TestThreads:
    def test_default_is_single_thread(self, monkeypatch):
        monkeypatch.delenv("GPSAV_THREADS", raising=False)
        assert fft_workers() == 1

    def test_env_var(self, monkeypatch):
        monkeypatch.setenv("GPSAV_THREADS", "4")
        assert fft_workers() == 4

    @pytest.mark.parametrize("value", ["0", "-2", "many"])
    def test_invalid_env_var(self, monkeypatch, value):
        monkeypatch.setenv("GPSAV_THREADS", value)
        with pytest.raises(ConfigError):
            fft_workers()
