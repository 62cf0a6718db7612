"""
Core solver: grids, operators, tableaux, the SAV integrator and diagnostics
"""

from gpsav.core.grid import Field, Grid, deriv, inner, laplacian, make_grid, norm
from gpsav.core.models import (
    GpParams,
    InitialGuess,
    PotentialKind,
    PotentialSpec,
    SavState,
    SolverOptions,
    StageWork,
    StepStats,
)
from gpsav.core.operator import GpOperator, apply_linear, apply_lz
from gpsav.core.state import hamiltonian_energy, init_state, mass, modified_energy
from gpsav.core.tableau import ButcherTableau, gauss_tableau, verify_order_conditions
from gpsav.core.integrator import SavIntegrator, evolve, step
from gpsav.core.diagnostics import DriftSeries, DriftTracker, convergence_rate, field_error

__all__ = [
    "Field",
    "Grid",
    "deriv",
    "inner",
    "laplacian",
    "make_grid",
    "norm",
    "GpParams",
    "InitialGuess",
    "PotentialKind",
    "PotentialSpec",
    "SavState",
    "SolverOptions",
    "StageWork",
    "StepStats",
    "GpOperator",
    "apply_linear",
    "apply_lz",
    "hamiltonian_energy",
    "init_state",
    "mass",
    "modified_energy",
    "ButcherTableau",
    "gauss_tableau",
    "verify_order_conditions",
    "SavIntegrator",
    "evolve",
    "step",
    "DriftSeries",
    "DriftTracker",
    "convergence_rate",
    "field_error",
]
