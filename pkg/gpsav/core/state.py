"""
SAV state initialisation and the tracked functionals

mass         M_h = <psi, psi>_h
modified     E_h = <L_h psi, psi>_h + beta/2 q^2 - beta/2 C0   (conserved)
hamiltonian  H_h = <L_h psi, psi>_h + beta/2 ||psi||_{4,h}^4   (diagnostic only)

The quartic term is taken as sum |psi|^4, i.e. the conjugated reading of
(psi^2, psi^2).
"""

from typing import Optional

import numpy as np

from gpsav.core.grid import Field, inner
from gpsav.core.models import GpParams, SavState
from gpsav.core.operator import GpOperator
from gpsav.exceptions import InvalidArgumentError


def quartic_norm(psi: Field) -> float:
    """||psi||_{4,h}^4 = h1 h2 h3 sum |psi_j|^4"""
    density = np.abs(psi.data) ** 2
    return float(psi.grid.cell_volume * np.sum(density * density))


def init_state(params: GpParams, psi0: Field) -> SavState:
    """Pair psi0 with the consistent q = sqrt(||psi0||_{4,h}^4 + C0)"""
    return SavState(psi=psi0, q=float(np.sqrt(quartic_norm(psi0) + params.c0)))


def _operator_for(params: GpParams, state: SavState, operator: Optional[GpOperator]) -> GpOperator:
    if operator is None:
        return GpOperator(params, state.grid)
    if not operator.grid.same_as(state.grid):
        raise InvalidArgumentError("operator and state live on different grids")
    return operator


def quadratic_energy(
    params: GpParams,
    state: SavState,
    operator: Optional[GpOperator] = None,
) -> float:
    """Real part of <L_h psi, psi>_h"""
    operator = _operator_for(params, state, operator)
    return inner(operator.apply_linear(state.psi), state.psi).real


def mass(state: SavState) -> float:
    return inner(state.psi, state.psi).real


def modified_energy(
    params: GpParams,
    state: SavState,
    operator: Optional[GpOperator] = None,
) -> float:
    """E_h, the quantity the Gauss collocation scheme conserves exactly"""
    linear = quadratic_energy(params, state, operator)
    return linear + 0.5 * params.beta * (state.q**2 - params.c0)


def hamiltonian_energy(
    params: GpParams,
    state: SavState,
    operator: Optional[GpOperator] = None,
) -> float:
    """H_h with the explicit quartic term; drifts at the scheme's order"""
    linear = quadratic_energy(params, state, operator)
    return linear + 0.5 * params.beta * quartic_norm(state.psi)
