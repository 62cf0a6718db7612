"""
Tests for snapshot files, diagnostics CSV and manifests
"""

import struct

import numpy as np
import pytest

from gpsav.core.diagnostics import DriftSeries
from gpsav.core.grid import Field, make_grid
from gpsav.exceptions import SnapshotFormatError
from gpsav.storage import (
    DIAGNOSTICS_COLUMNS,
    read_diagnostics,
    read_manifest,
    read_snapshot,
    write_diagnostics,
    write_manifest,
    write_snapshot,
)
from gpsav.storage.snapshot import HEADER_SIZE, MAGIC, decode_snapshot, encode_snapshot


class TestSnapshot:
    def test_round_trip_is_bit_exact(self, tmp_path, grid_3d, random_field):
        psi = random_field(grid_3d)
        path = write_snapshot(tmp_path / "nested" / "psi.gpf", psi, 0.375, 1.0625)
        snapshot = read_snapshot(path)
        assert snapshot.grid.same_as(grid_3d)
        assert snapshot.time == 0.375
        assert snapshot.q == 1.0625
        np.testing.assert_array_equal(snapshot.psi.data, psi.data)

    def test_header_layout(self, grid_2d, random_field):
        payload = encode_snapshot(random_field(grid_2d), 2.0, 3.0)
        assert HEADER_SIZE == 96
        assert payload[:16] == MAGIC
        assert payload[:8] == b"GPSAVFLD"
        assert len(payload) == HEADER_SIZE + 64 * 16
        dim, nx, ny, nz = struct.unpack_from("<4I", payload, 16)
        assert (dim, nx, ny, nz) == (2, 8, 8, 1)

    def test_1d_padding(self, grid_1d, random_field):
        payload = encode_snapshot(random_field(grid_1d), 0.0, 1.0)
        fields = struct.unpack_from("<4I6d2d", payload, 16)
        assert fields[:4] == (1, 8, 1, 1)
        assert fields[5:7] == (0.0, 0.0)
        assert fields[8:10] == (1.0, 1.0)
        assert decode_snapshot(payload).grid.dim == 1

    def test_x_is_fastest_on_disk(self, tmp_path):
        grid = make_grid(2, [4, 6], [0, 0], [1, 1])
        values = grid.coordinate(0) + 10 * grid.coordinate(1)
        payload = encode_snapshot(Field.from_array(grid, values), 0.0, 1.0)
        data = np.frombuffer(payload[HEADER_SIZE:], dtype="<c16")
        np.testing.assert_allclose(data[:4].real, grid.coords[0])

    def test_bad_magic(self, grid_1d, random_field):
        payload = bytearray(encode_snapshot(random_field(grid_1d), 0.0, 1.0))
        payload[0:8] = b"NOTAFILE"
        with pytest.raises(SnapshotFormatError, match="magic"):
            decode_snapshot(bytes(payload))

    def test_truncated_header(self):
        with pytest.raises(SnapshotFormatError, match="truncated"):
            decode_snapshot(MAGIC + b"\x00" * 10)

    def test_wrong_payload_length(self, grid_1d, random_field):
        payload = encode_snapshot(random_field(grid_1d), 0.0, 1.0)
        with pytest.raises(SnapshotFormatError):
            decode_snapshot(payload[:-16])
        with pytest.raises(SnapshotFormatError):
            decode_snapshot(payload + b"\x00" * 16)

    def test_invalid_header_grid(self, grid_1d, random_field):
        payload = bytearray(encode_snapshot(random_field(grid_1d), 0.0, 1.0))
        struct.pack_into("<I", payload, 20, 7)
        with pytest.raises(SnapshotFormatError):
            decode_snapshot(bytes(payload))

    @pytest.mark.parametrize("sizes", [(2**24, 1, 1), (2**31, 2**31, 2**31)])
    def test_oversized_header_rejected_before_grid_built(self, monkeypatch, sizes):
        def fail(*args, **kwargs):
            raise AssertionError("grid built from an unchecked header")

        monkeypatch.setattr("gpsav.storage.snapshot.make_grid", fail)
        header = struct.pack("<4I6d2d", 3 if sizes[1] > 1 else 1, *sizes, 0, 0, 0, 1, 1, 1, 0.0, 1.0)
        with pytest.raises(SnapshotFormatError, match="data bytes"):
            decode_snapshot(MAGIC + header)

    @pytest.mark.parametrize("size", [0, 2, 7])
    def test_invalid_header_size(self, size):
        header = struct.pack("<4I6d2d", 1, size, 1, 1, 0, 0, 0, 1, 1, 1, 0.0, 1.0)
        with pytest.raises(SnapshotFormatError, match="invalid size"):
            decode_snapshot(MAGIC + header + b"\x00" * 16 * size)

    def test_missing_file(self, tmp_path):
        with pytest.raises(SnapshotFormatError):
            read_snapshot(tmp_path / "missing.gpf")


class TestRecords:
    def test_diagnostics_csv(self, tmp_path):
        series = DriftSeries(
            steps=[0, 10],
            times=[0.0, 0.1],
            mass=[0.25, 0.25],
            mass_err=[0.0, 1e-16],
            energy=[1.5, 1.5],
            quad_err=[0.0, 2e-15],
            hamiltonian=[1.4, 1.4000001],
            ham_err=[0.0, 1e-7],
            q_series=[1.002, 1.002],
            iterations=[0, 12],
            residuals=[0.0, 3.2e-15],
        )
        path = write_diagnostics(tmp_path / "diagnostics.csv", series)
        header = path.read_text().splitlines()[0]
        assert header == ",".join(DIAGNOSTICS_COLUMNS)
        rows = read_diagnostics(path)
        assert len(rows) == 2
        assert rows[1]["step"] == 10
        assert rows[1]["fp_iters"] == 12
        assert rows[1]["H_h"] == 1.4000001
        assert rows[1]["ham_err"] == 1e-7

    def test_manifest(self, tmp_path):
        manifest = {"status": "ok", "n_steps": 3, "warnings": []}
        path = write_manifest(tmp_path / "out" / "manifest.json", manifest)
        assert read_manifest(path) == manifest
        assert path.read_text().endswith("\n")
