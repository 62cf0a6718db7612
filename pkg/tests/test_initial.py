"""
Tests for initial-data builders and their registry
"""

import numpy as np
import pytest

from gpsav.core.grid import Field, make_grid, max_norm, norm
from gpsav.exceptions import ConfigError, InvalidArgumentError
from gpsav.initial import InitialCondition, InitialRegistry, InitialSpec, get_registry
from gpsav.initial.gaussian import gaussian_values
from gpsav.initial.plane_wave import plane_wave_frequency
from gpsav.storage import write_snapshot


class TestGaussian:
    @pytest.mark.parametrize(("dim", "expected_mass"), [(1, 1.0), (2, 0.5), (3, 0.25)])
    def test_normalisation(self, dim, expected_mass):
        grid = make_grid(dim, [32] * dim, [-8] * dim, [8] * dim)
        psi = get_registry().build(InitialSpec(kind="gaussian"), grid)
        assert norm(psi) ** 2 == pytest.approx(expected_mass, abs=1e-8)

    def test_peak_value_3d(self):
        grid = make_grid(3, [8, 8, 8], [-4] * 3, [4] * 3)
        values = gaussian_values(grid, (1.0, 1.0, 1.0))
        assert np.max(values) == pytest.approx(1.0 / (2.0 * np.pi**0.75))

    def test_rejects_bad_gammas(self, grid_2d):
        with pytest.raises(InvalidArgumentError):
            gaussian_values(grid_2d, (1.0,))
        with pytest.raises(InvalidArgumentError):
            gaussian_values(grid_2d, (1.0, -1.0))


class TestPlaneWave:
    def test_constant_modulus(self, grid_2d):
        spec = InitialSpec(kind="plane_wave", wavenumber=(1, -2), amplitude=0.3 + 0.4j)
        psi = get_registry().build(spec, grid_2d)
        np.testing.assert_allclose(np.abs(psi.data), 0.5)

    def test_nyquist_rejected(self, grid_2d):
        spec = InitialSpec(kind="plane_wave", wavenumber=(4, 0))
        with pytest.raises(InvalidArgumentError):
            get_registry().build(spec, grid_2d)

    def test_frequency(self):
        grid = make_grid(2, [8, 8], [0, 0], [np.pi, 2 * np.pi])
        # mu = (2, 1)
        omega = plane_wave_frequency(grid, (1, 3), 0.5, beta=4.0)
        assert omega == pytest.approx(0.5 * (4 + 9) + 4.0 * 0.25)


class TestFromFile:
    def test_round_trip(self, tmp_path, grid_2d, random_field):
        field = random_field(grid_2d)
        path = write_snapshot(tmp_path / "ground.gpf", field, 12.0, 3.0)
        psi = get_registry().build(InitialSpec(kind="from_file", path=path), grid_2d)
        np.testing.assert_array_equal(psi.data, field.data)

    def test_grid_mismatch(self, tmp_path, grid_2d):
        other = make_grid(2, [16, 16], [-np.pi, -np.pi], [np.pi, np.pi])
        path = write_snapshot(tmp_path / "ground.gpf", Field.zeros(other), 0.0, 1.0)
        with pytest.raises(InvalidArgumentError, match="does not match"):
            get_registry().build(InitialSpec(kind="from_file", path=path), grid_2d)

    def test_requires_path(self, grid_2d):
        with pytest.raises(ConfigError):
            get_registry().build(InitialSpec(kind="from_file"), grid_2d)


class TestRegistry:
    def test_builtin_names(self):
        assert set(get_registry().names) >= {"gaussian", "plane_wave", "from_file"}
        descriptions = {info["name"]: info["description"] for info in get_registry().list_builders()}
        assert all(descriptions.values())

    def test_unknown_kind(self, grid_1d):
        with pytest.raises(ConfigError, match="unknown initial.kind"):
            get_registry().build(InitialSpec(kind="vortex"), grid_1d)

    def test_custom_builder(self, grid_1d):
        class Constant(InitialCondition):
            name = "constant"
            description = "Constant field"

            def build(self, spec, grid):
                return Field(grid=grid, data=np.full(grid.npoints, spec.amplitude))

        registry = InitialRegistry()
        registry.register(Constant)
        psi = registry.build(InitialSpec(kind="constant", amplitude=2.0), grid_1d)
        assert max_norm(psi) == 2.0
        assert registry.get("constant") is registry.get("constant")
        assert repr(registry.get("constant")) == "<Constant: constant>"
        registry.unregister("constant")
        assert registry.get("constant") is None
