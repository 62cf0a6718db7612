"""
Initial data read from a snapshot file (e.g. an externally computed ground state)
"""

import logging

from gpsav.core.grid import Field, Grid
from gpsav.exceptions import ConfigError, InvalidArgumentError
from gpsav.initial.base import InitialCondition, InitialSpec
from gpsav.storage.snapshot import read_snapshot

logger = logging.getLogger(__name__)


class FromFileInitial(InitialCondition):
    name = "from_file"
    description = "Complex field loaded from a GPSAVFLD snapshot on the same grid"

    def build(self, spec: InitialSpec, grid: Grid) -> Field:
        if spec.path is None:
            raise ConfigError("initial.kind = from_file needs initial.path")
        snapshot = read_snapshot(spec.path)
        if not snapshot.grid.same_as(grid):
            raise InvalidArgumentError(
                f"{spec.path}: snapshot grid {snapshot.grid.sizes} on "
                f"{snapshot.grid.lower}..{snapshot.grid.upper} does not match the run grid"
            )
        logger.info("initial data loaded from %s (t=%g)", spec.path, snapshot.time)
        return Field(grid=grid, data=snapshot.psi.data)
