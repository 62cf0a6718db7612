"""
Data models for the SAV solver
"""

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Optional

import numpy as np

from gpsav.core.grid import Field
from gpsav.exceptions import InvalidArgumentError


class PotentialKind(Enum):
    """How the trap potential V is obtained"""
    HARMONIC = "harmonic"
    FROM_FILE = "from_file"


class InitialGuess(Enum):
    """Starting slopes k_i^(0) for the stage fixed point"""
    EXPLICIT_RHS = "explicit_rhs"  # right-hand side evaluated at psi^n
    PREVIOUS_STEP = "previous_step"  # converged slopes of the last step


@dataclass(frozen=True)
class PotentialSpec:
    """Trap potential description, evaluated on a grid by the operator"""
    kind: PotentialKind = PotentialKind.HARMONIC
    gammas: tuple[float, ...] = (1.0, 1.0, 1.0)  # per-axis trap frequencies
    scale: float = 1.0
    path: Optional[Path] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", PotentialKind(self.kind))
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        if self.path is not None:
            object.__setattr__(self, "path", Path(self.path))
        if self.kind is PotentialKind.FROM_FILE and self.path is None:
            raise InvalidArgumentError("from_file potential needs a path")

    @classmethod
    def zero(cls) -> "PotentialSpec":
        return cls(kind=PotentialKind.HARMONIC, gammas=(0.0, 0.0, 0.0))


@dataclass(frozen=True)
class GpParams:
    """Model coefficients of the rotating GP equation"""
    beta: float = 0.0  # interaction strength
    omega: float = 0.0  # rotation speed about z
    potential: PotentialSpec = field(default_factory=PotentialSpec)
    c0: float = 1.0  # SAV shift constant

    def __post_init__(self):
        if not self.c0 > 0:
            raise InvalidArgumentError(f"c0 must be positive, got {self.c0}")


@dataclass(frozen=True)
class SavState:
    """Wave function psi and scalar auxiliary variable q, evolved together"""
    psi: Field
    q: float

    def __post_init__(self):
        if not np.isfinite(self.q):
            raise InvalidArgumentError(f"q must be finite, got {self.q}")
        object.__setattr__(self, "q", float(self.q))

    @property
    def grid(self):
        return self.psi.grid


@dataclass(frozen=True)
class SolverOptions:
    """Stopping rule and start of the stage fixed-point iteration"""
    tol: float = 1e-14
    max_iter: int = 200
    initial_guess: InitialGuess = InitialGuess.EXPLICIT_RHS

    def __post_init__(self):
        if not self.tol > 0:
            raise InvalidArgumentError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise InvalidArgumentError(f"max_iter must be >= 1, got {self.max_iter}")
        object.__setattr__(self, "initial_guess", InitialGuess(self.initial_guess))


@dataclass(frozen=True)
class StepStats:
    """Fixed-point outcome of one time step"""
    iterations: int
    residual: float


@dataclass
class StageWork:
    """
    Per-step workspace of the stage solve.

    Arrays carry a leading stage axis of length s followed by the grid shape.
    ``fhat`` holds the transformed right-hand sides of the last iteration.
    """
    k: np.ndarray
    l: np.ndarray
    psi_stages: np.ndarray
    q_stages: np.ndarray
    phi: np.ndarray
    fhat: np.ndarray

    @property
    def stages(self) -> int:
        return self.k.shape[0]
