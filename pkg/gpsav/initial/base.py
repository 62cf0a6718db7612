"""
Base class for initial-data builders
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from gpsav.core.grid import Field, Grid


@dataclass(frozen=True)
class InitialSpec:
    """Parameters of the initial wave function; which fields apply depends on ``kind``"""
    kind: str = "gaussian"
    gammas: tuple[float, ...] = (1.0, 1.0, 1.0)  # gaussian
    wavenumber: tuple[int, ...] = (1, 0, 0)  # plane_wave, in units of mu_w
    amplitude: complex = 1.0  # plane_wave
    path: Optional[Path] = None  # from_file


class InitialCondition(ABC):
    """
    Abstract base class for initial-data builders.

    To add a new kind of initial data:
    1. Subclass InitialCondition
    2. Set `name` and `description`
    3. Implement `build()`
    4. Register it in the initial-data registry
    """

    name: str = "base"
    description: str = "Base initial condition"

    @abstractmethod
    def build(self, spec: InitialSpec, grid: Grid) -> Field:
        """
        Sample psi_0 on the grid.

        Raises:
            InvalidArgumentError: If ``spec`` does not fit the grid
        """
        pass

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__}: {self.name}>"
