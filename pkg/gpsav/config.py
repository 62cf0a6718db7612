"""
Experiment configuration for gpsav runs

Files are flat ``section.key = value`` lines; ``#`` starts a comment and lists
are comma-separated:

    grid.dim = 2
    grid.sizes = 32, 32
    model.beta = 20
"""

import logging
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

from gpsav.core.grid import Grid, make_grid
from gpsav.core.models import (
    GpParams,
    InitialGuess,
    PotentialKind,
    PotentialSpec,
    SolverOptions,
)
from gpsav.core.tableau import MAX_STAGES, ButcherTableau, gauss_tableau
from gpsav.exceptions import ConfigError, GpSavError
from gpsav.initial.base import InitialSpec

logger = logging.getLogger(__name__)

STEP_TOLERANCE = 1e-9


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(item) for item in text.split(",") if item.strip())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(item) for item in text.split(",") if item.strip())


def _optional_path(text: str) -> Optional[str]:
    return text or None


def _fmt_list(values) -> str:
    return ", ".join(repr(v) if isinstance(v, float) else str(v) for v in values)


def _fmt_complex(value: complex) -> str:
    value = complex(value)
    if value.imag == 0:
        return repr(value.real)
    return str(value).strip("()")


# key -> (attribute, parser, formatter)
KEYS: dict[str, tuple[str, Callable, Callable]] = {
    "grid.dim": ("dim", int, str),
    "grid.sizes": ("sizes", _ints, _fmt_list),
    "grid.lower": ("lower", _floats, _fmt_list),
    "grid.upper": ("upper", _floats, _fmt_list),
    "time.tau": ("tau", float, repr),
    "time.t_final": ("t_final", float, repr),
    "scheme.stages": ("stages", int, str),
    "model.beta": ("beta", float, repr),
    "model.omega": ("omega", float, repr),
    "model.c0": ("c0", float, repr),
    "potential.kind": ("potential_kind", str, str),
    "potential.gammas": ("potential_gammas", _floats, _fmt_list),
    "potential.scale": ("potential_scale", float, repr),
    "potential.path": ("potential_path", _optional_path, lambda v: v or ""),
    "initial.kind": ("initial_kind", str, str),
    "initial.gammas": ("initial_gammas", _floats, _fmt_list),
    "initial.wavenumber": ("initial_wavenumber", _ints, _fmt_list),
    "initial.amplitude": ("initial_amplitude", lambda t: complex(t.replace(" ", "")), _fmt_complex),
    "initial.path": ("initial_path", _optional_path, lambda v: v or ""),
    "output.dir": ("output_dir", str, str),
    "output.snapshot_times": ("snapshot_times", _floats, _fmt_list),
    "output.diag_stride": ("diag_stride", int, str),
    "solver.tol": ("solver_tol", float, repr),
    "solver.max_iter": ("solver_max_iter", int, str),
    "solver.initial_guess": ("solver_initial_guess", str, str),
}


@dataclass
class ExperimentConfig:
    """One experiment: grid, model, scheme, initial data, output and solver settings"""

    # Grid
    dim: int = 3
    sizes: tuple[int, ...] = (32, 32, 32)
    lower: tuple[float, ...] = (-8.0, -8.0, -8.0)
    upper: tuple[float, ...] = (8.0, 8.0, 8.0)

    # Time stepping
    tau: float = 0.01
    t_final: float = 1.0
    stages: int = 2

    # Model
    beta: float = 20.0
    omega: float = 0.7
    c0: float = 1.0
    potential_kind: str = "harmonic"
    potential_gammas: tuple[float, ...] = (1.0, 1.0, 1.0)
    potential_scale: float = 1.0
    potential_path: Optional[str] = None

    # Initial data
    initial_kind: str = "gaussian"
    initial_gammas: tuple[float, ...] = (1.0, 1.0, 1.0)
    initial_wavenumber: tuple[int, ...] = (1, 0, 0)
    initial_amplitude: complex = 1.0
    initial_path: Optional[str] = None

    # Output
    output_dir: str = "gpsav-out"
    snapshot_times: tuple[float, ...] = ()
    diag_stride: int = 1

    # Stage fixed point
    solver_tol: float = 1e-14
    solver_max_iter: int = 200
    solver_initial_guess: str = "explicit_rhs"

    _source: Optional[str] = field(default=None, repr=False, compare=False)

    @classmethod
    def from_text(cls, text: str, source: str = "<text>") -> "ExperimentConfig":
        """Parse a config text on top of the defaults"""
        config = cls()
        config._apply_lines(text.splitlines(), source)
        config._source = source
        return config

    @classmethod
    def load(cls, path: Path) -> "ExperimentConfig":
        """Load configuration from file"""
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e}")
        return cls.from_text(text, source=str(path))

    def to_text(self) -> str:
        lines = []
        for key, (attr, _, formatter) in KEYS.items():
            lines.append(f"{key} = {formatter(getattr(self, attr))}")
        return "\n".join(lines) + "\n"

    def save(self, path: Path) -> None:
        """Save configuration to file"""
        Path(path).write_text(self.to_text())

    def apply_overrides(self, overrides: list[str]) -> "ExperimentConfig":
        """Return a copy with ``key=value`` overrides applied in order"""
        updated = replace(self)
        updated._apply_lines(overrides, "--override")
        return updated

    def _apply_lines(self, lines, source: str) -> None:
        for number, raw in enumerate(lines, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{source}:{number}: expected 'key = value', got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in KEYS:
                raise ConfigError(f"{source}:{number}: unknown key {key!r}")
            attr, parser, _ = KEYS[key]
            try:
                setattr(self, attr, parser(value))
            except ValueError as e:
                raise ConfigError(f"{source}:{number}: bad value for {key}: {value!r} ({e})")

    def validate(self) -> "ExperimentConfig":
        """
        Check internal consistency and build every derived object once.

        Raises:
            ConfigError: On any inconsistency
        """
        if self.dim not in (1, 2, 3):
            raise ConfigError(f"grid.dim must be 1, 2 or 3, got {self.dim}")
        for key in ("grid.sizes", "grid.lower", "grid.upper"):
            values = getattr(self, KEYS[key][0])
            if len(values) != self.dim:
                raise ConfigError(f"{key} needs {self.dim} entries, got {len(values)}")
        if not (self.tau > 0 and math.isfinite(self.tau)):
            raise ConfigError(f"time.tau must be positive, got {self.tau}")
        if not (self.t_final >= 0 and math.isfinite(self.t_final)):
            raise ConfigError(f"time.t_final must be >= 0, got {self.t_final}")
        if not 1 <= self.stages <= MAX_STAGES:
            raise ConfigError(f"scheme.stages must be in 1..{MAX_STAGES}, got {self.stages}")
        if self.diag_stride < 1:
            raise ConfigError(f"output.diag_stride must be >= 1, got {self.diag_stride}")
        for t in self.snapshot_times:
            if not 0 <= t <= self.t_final:
                raise ConfigError(f"snapshot time {t} outside [0, {self.t_final}]")
        if self.omega != 0.0 and self.dim < 2:
            raise ConfigError("model.omega must be 0 for a 1D run")
        try:
            self.grid()
            self.params()
            self.solver_options()
        except GpSavError as e:
            raise ConfigError(str(e))
        return self

    # Derived objects

    def grid(self) -> Grid:
        return make_grid(self.dim, self.sizes, self.lower, self.upper)

    def potential(self) -> PotentialSpec:
        try:
            kind = PotentialKind(self.potential_kind)
        except ValueError:
            raise ConfigError(
                f"potential.kind must be 'harmonic' or 'from_file', got {self.potential_kind!r}"
            )
        return PotentialSpec(
            kind=kind,
            gammas=self.potential_gammas,
            scale=self.potential_scale,
            path=self.potential_path,
        )

    def params(self) -> GpParams:
        return GpParams(beta=self.beta, omega=self.omega, potential=self.potential(), c0=self.c0)

    def solver_options(self) -> SolverOptions:
        try:
            guess = InitialGuess(self.solver_initial_guess)
        except ValueError:
            raise ConfigError(
                "solver.initial_guess must be 'explicit_rhs' or 'previous_step', "
                f"got {self.solver_initial_guess!r}"
            )
        return SolverOptions(tol=self.solver_tol, max_iter=self.solver_max_iter, initial_guess=guess)

    def initial_spec(self) -> InitialSpec:
        return InitialSpec(
            kind=self.initial_kind,
            gammas=self.initial_gammas,
            wavenumber=self.initial_wavenumber,
            amplitude=self.initial_amplitude,
            path=Path(self.initial_path) if self.initial_path else None,
        )

    def tableau(self) -> ButcherTableau:
        return gauss_tableau(self.stages)

    def step_count(self) -> tuple[int, Optional[str]]:
        return resolve_step_count(self.t_final, self.tau)

    def to_dict(self) -> dict:
        """Plain-JSON echo keyed like the config file"""
        data = {}
        for key, (attr, _, formatter) in KEYS.items():
            value = getattr(self, attr)
            if isinstance(value, tuple):
                value = list(value)
            elif isinstance(value, complex):
                value = formatter(value)
            data[key] = value
        return data


def resolve_step_count(t_final: float, tau: float) -> tuple[int, Optional[str]]:
    """
    Number of steps to reach t_final.

    Accepted exactly when |round(t_final/tau) tau - t_final| <= 1e-9 tau;
    otherwise rounded down and a warning message is returned with the count.
    """
    if not tau > 0:
        raise ConfigError(f"tau must be positive, got {tau}")
    nearest = round(t_final / tau)
    if abs(nearest * tau - t_final) <= STEP_TOLERANCE * tau:
        return int(nearest), None
    n_steps = int(math.floor(t_final / tau))
    warning = (
        f"t_final={t_final!r} is not a whole number of steps of tau={tau!r}; "
        f"running {n_steps} steps to t={n_steps * tau!r}"
    )
    logger.warning(warning)
    return n_steps, warning


PRESETS: dict[str, str] = {
    "example-3d": """\
# Gaussian in a rotating isotropic trap, 3D
grid.dim = 3
grid.sizes = 32, 32, 32
grid.lower = -8, -8, -8
grid.upper = 8, 8, 8
time.tau = 0.01
time.t_final = 3
scheme.stages = 2
model.beta = 20
model.omega = 0.7
potential.kind = harmonic
potential.gammas = 1, 1, 1
initial.kind = gaussian
initial.gammas = 1, 1, 1
output.snapshot_times = 1, 2
""",
    "example-2d": """\
# 2D reduction of example-3d; used for temporal order studies
grid.dim = 2
grid.sizes = 32, 32
grid.lower = -8, -8
grid.upper = 8, 8
time.tau = 0.01
time.t_final = 3
scheme.stages = 2
model.beta = 20
model.omega = 0.7
potential.kind = harmonic
potential.gammas = 1, 1
initial.kind = gaussian
initial.gammas = 1, 1
""",
    "vortex-lattice-isotropic": """\
# Vortex lattice in a tightened isotropic trap (gamma 1 -> 1.4).
# Needs a ground state computed elsewhere: set initial.path.
grid.dim = 2
grid.sizes = 128, 128
grid.lower = -16, -16
grid.upper = 16, 16
time.tau = 0.001
time.t_final = 5
scheme.stages = 2
model.beta = 1000
model.omega = 0.9
potential.kind = harmonic
potential.gammas = 1.4, 1.4
initial.kind = from_file
initial.path = ground_state.gpf
output.snapshot_times = 1, 2, 3, 4
output.diag_stride = 10
""",
    "vortex-lattice-anisotropic": """\
# Vortex lattice in an anisotropic trap (gamma = 1.1, 0.9).
# Needs a ground state computed elsewhere: set initial.path.
grid.dim = 2
grid.sizes = 128, 128
grid.lower = -16, -16
grid.upper = 16, 16
time.tau = 0.001
time.t_final = 5
scheme.stages = 2
model.beta = 1000
model.omega = 0.9
potential.kind = harmonic
potential.gammas = 1.1, 0.9
initial.kind = from_file
initial.path = ground_state.gpf
output.snapshot_times = 1, 2, 3, 4
output.diag_stride = 10
""",
    "vortex-lines-3d": """\
# Vortex lines in V = x^2 + y^2 + z^2/2.
# Needs a ground state computed elsewhere: set initial.path.
grid.dim = 3
grid.sizes = 64, 64, 64
grid.lower = -10, -10, -10
grid.upper = 10, 10, 10
time.tau = 0.005
time.t_final = 5
scheme.stages = 2
model.beta = 400
model.omega = 0.8
potential.kind = harmonic
potential.gammas = 1.4142135623730951, 1.4142135623730951, 1
initial.kind = from_file
initial.path = ground_state.gpf
output.snapshot_times = 1, 2, 3, 4
output.diag_stride = 10
""",
}


def load_preset(name: str) -> ExperimentConfig:
    """
    Raises:
        ConfigError: If no preset has this name
    """
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    return ExperimentConfig.from_text(PRESETS[name], source=f"preset:{name}")
