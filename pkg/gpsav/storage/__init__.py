"""
Run artifacts: field snapshots, diagnostics tables and manifests
"""

from gpsav.storage.records import (
    DIAGNOSTICS_COLUMNS,
    read_diagnostics,
    read_manifest,
    write_csv,
    write_diagnostics,
    write_manifest,
)
from gpsav.storage.snapshot import Snapshot, read_snapshot, write_snapshot

__all__ = [
    "DIAGNOSTICS_COLUMNS",
    "Snapshot",
    "read_diagnostics",
    "read_manifest",
    "read_snapshot",
    "write_csv",
    "write_diagnostics",
    "write_manifest",
    "write_snapshot",
]
