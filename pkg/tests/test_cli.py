"""
Tests for the command-line interface
"""

import struct

import numpy as np
import pytest
from click.testing import CliRunner

from gpsav.cli.main import cli, exit_code_for
from gpsav.exceptions import (
    ConfigError,
    IntegrationError,
    NumericalBlowupError,
    SnapshotFormatError,
    StepDivergedError,
)
from gpsav.storage import read_manifest
from gpsav.storage.snapshot import MAGIC

PLANE_WAVE = [
    "grid.dim=1",
    "grid.sizes=8",
    "grid.lower=0",
    f"grid.upper={2 * np.pi!r}",
    "time.t_final=0.1",
    "model.beta=1",
    "model.omega=0",
    "potential.gammas=0",
    "initial.kind=plane_wave",
    "initial.wavenumber=1",
    "initial.amplitude=0.5",
]


def overrides(*pairs):
    args = []
    for pair in PLANE_WAVE + list(pairs):
        args.extend(["-O", pair])
    return args


@pytest.fixture
def runner():
    return CliRunner()


class TestInfoCommands:
    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "gpsav" in result.output

    def test_presets_list(self, runner):
        result = runner.invoke(cli, ["presets"])
        assert result.exit_code == 0
        assert "example-3d" in result.output

    def test_preset_text(self, runner):
        result = runner.invoke(cli, ["presets", "example-2d"])
        assert result.exit_code == 0
        assert "grid.dim = 2" in result.output

    def test_unknown_preset(self, runner):
        assert runner.invoke(cli, ["presets", "nope"]).exit_code == 3

    def test_initials(self, runner):
        result = runner.invoke(cli, ["initials"])
        assert result.exit_code == 0
        assert "plane_wave" in result.output


class TestRunCommand:
    def test_run(self, runner, tmp_path):
        result = runner.invoke(cli, ["run", "-q", "-o", str(tmp_path), *overrides()])
        assert result.exit_code == 0, result.output
        assert read_manifest(tmp_path / "manifest.json")["n_steps"] == 10

    def test_run_with_progress(self, runner, tmp_path):
        result = runner.invoke(cli, ["run", "-o", str(tmp_path), *overrides()])
        assert result.exit_code == 0, result.output
        assert "Run complete" in result.output

    def test_config_file(self, runner, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("\n".join(line.replace("=", " = ", 1) for line in PLANE_WAVE) + "\n")
        result = runner.invoke(cli, ["run", "-q", "-c", str(config), "-o", str(tmp_path / "out")])
        assert result.exit_code == 0, result.output
        assert (tmp_path / "out" / "final.gpf").exists()

    def test_unknown_key(self, runner, tmp_path):
        result = runner.invoke(cli, ["run", "-q", "-o", str(tmp_path), *overrides("model.gamma=1")])
        assert result.exit_code == 3

    def test_missing_config_file(self, runner, tmp_path):
        result = runner.invoke(cli, ["run", "-q", "-c", str(tmp_path / "missing.cfg")])
        assert result.exit_code == 3

    def test_config_and_preset_conflict(self, runner, tmp_path):
        config = tmp_path / "run.cfg"
        config.write_text("")
        result = runner.invoke(cli, ["run", "-c", str(config), "-p", "example-2d"])
        assert result.exit_code == 2

    def test_diverged(self, runner, tmp_path):
        result = runner.invoke(
            cli, ["run", "-q", "-o", str(tmp_path), *overrides("solver.max_iter=1", "model.beta=50")]
        )
        assert result.exit_code == 5
        assert read_manifest(tmp_path / "manifest.json")["status"] == "failed"


class TestInspect:
    def test_inspect_snapshot(self, runner, tmp_path):
        runner.invoke(cli, ["run", "-q", "-o", str(tmp_path), *overrides()])
        result = runner.invoke(cli, ["inspect", str(tmp_path / "final.gpf")])
        assert result.exit_code == 0, result.output
        assert "mass" in result.output

    def test_missing_file(self, runner, tmp_path):
        assert runner.invoke(cli, ["inspect", str(tmp_path / "missing.gpf")]).exit_code == 4

    def test_bad_file(self, runner, tmp_path):
        path = tmp_path / "bad.gpf"
        path.write_bytes(b"not a snapshot")
        assert runner.invoke(cli, ["inspect", str(path)]).exit_code == 4

    def test_oversized_header(self, runner, tmp_path):
        path = tmp_path / "huge.gpf"
        header = struct.pack("<4I6d2d", 3, 2**20, 2**20, 2**20, 0, 0, 0, 1, 1, 1, 0.0, 1.0)
        path.write_bytes(MAGIC + header)
        assert runner.invoke(cli, ["inspect", str(path)]).exit_code == 4


class TestConverge:
    def test_converge(self, runner, tmp_path):
        result = runner.invoke(
            cli,
            ["converge", "-l", "0.05,0.025,0.0125", "-o", str(tmp_path), *overrides("time.t_final=0.5")],
        )
        assert result.exit_code == 0, result.output
        assert (tmp_path / "convergence.csv").exists()
        assert "rate" in result.output

    def test_bad_ladder(self, runner, tmp_path):
        result = runner.invoke(cli, ["converge", "-l", "0.1,fast", *overrides()])
        assert result.exit_code == 2

    def test_ladder_must_decrease(self, runner, tmp_path):
        result = runner.invoke(
            cli, ["converge", "-l", "0.01,0.02,0.005", "-o", str(tmp_path), *overrides()]
        )
        assert result.exit_code == 2


class TestExitCodes:
    @pytest.mark.parametrize(
        ("error", "code"),
        [
            (ConfigError("x"), 3),
            (SnapshotFormatError("x"), 4),
            (FileNotFoundError("x"), 4),
            (StepDivergedError("x", residual=1.0, iterations=3), 5),
            (NumericalBlowupError("x"), 6),
            (IntegrationError("x"), 7),
        ],
    )
    def test_mapping(self, error, code):
        assert exit_code_for(error) == code
