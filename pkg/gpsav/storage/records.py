"""
Text artifacts of a run: diagnostics CSV, rate table CSV and JSON manifest
"""

import csv
import json
import logging
from pathlib import Path
from typing import Iterable, Sequence

from gpsav.core.diagnostics import DriftSeries

logger = logging.getLogger(__name__)

DIAGNOSTICS_COLUMNS = (
    "step",
    "t",
    "mass",
    "mass_err",
    "E_h",
    "quad_err",
    "H_h",
    "ham_err",
    "q",
    "fp_iters",
    "fp_residual",
)


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])
    logger.debug("wrote %s", path)
    return path


def write_diagnostics(path: Path, series: DriftSeries) -> Path:
    return write_csv(path, DIAGNOSTICS_COLUMNS, series.rows())


def read_diagnostics(path: Path) -> list[dict]:
    """Parse a diagnostics CSV back into dicts of floats (ints for step/fp_iters)"""
    with open(path, newline="") as f:
        rows = []
        for raw in csv.DictReader(f):
            row = {key: float(value) for key, value in raw.items()}
            row["step"] = int(row["step"])
            row["fp_iters"] = int(row["fp_iters"])
            rows.append(row)
    return rows


def write_manifest(path: Path, manifest: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def read_manifest(path: Path) -> dict:
    with open(path) as f:
        return json.load(f)
