"""Readout resonator response conditioned on the qubit state.

Frequencies and rates in rad/ns. With Δ = ω − ω_r^{(s)} and the branch
frequency ω_r^{(0)} = ω_r − χ, ω_r^{(1)} = ω_r + χ:

    reflection    S₁₁ = (iΔ + κ/2)/(iΔ − κ/2)
    transmission  S₂₁ = (κ/2)/(κ/2 − iΔ)
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Union

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import ParameterError, make_context

logger = logging.getLogger(__name__)

QubitState = int


class CouplingType(str, Enum):
    REFLECTION = "reflection"
    TRANSMISSION = "transmission"


@dataclass(frozen=True)
class ResonatorParams:
    """Dispersively coupled readout resonator.

    Attributes:
        omega_r: bare resonator frequency, rad/ns
        kappa: energy decay rate, rad/ns
        chi: dispersive shift, rad/ns
        coupling_type: reflection or transmission measurement
    """

    omega_r: float
    kappa: float
    chi: float
    coupling_type: CouplingType = CouplingType.REFLECTION

    def __post_init__(self) -> None:
        object.__setattr__(self, "coupling_type", CouplingType(self.coupling_type))
        errors: Dict[str, List[str]] = {}
        if not self.omega_r > 0:
            errors["omega_r"] = ["must be > 0"]
        if not self.kappa > 0:
            errors["kappa"] = ["must be > 0"]
        if errors:
            raise ParameterError(
                f"invalid resonator: {errors}",
                field_errors=errors,
                context=make_context(__name__, "ResonatorParams"),
            )

    @property
    def Q(self) -> float:
        """Loaded quality factor ω_r/κ."""
        return self.omega_r / self.kappa

    def branch_frequency(self, qubit_state: QubitState) -> float:
        """Resonator frequency with the qubit in |0⟩ or |1⟩."""
        _check_state(qubit_state, "branch_frequency")
        return self.omega_r - self.chi if qubit_state == 0 else self.omega_r + self.chi


def _check_state(qubit_state: QubitState, operation: str) -> None:
    if qubit_state not in (0, 1):
        raise ParameterError(
            f"qubit state must be 0 or 1, got {qubit_state}",
            context=make_context(__name__, operation, qubit_state=qubit_state),
        )


def resonator_response(
    r: ResonatorParams, qubit_state: QubitState, omega: ArrayLike
) -> Union[complex, np.ndarray]:
    """Steady-state S-parameter at probe frequency ``omega`` (rad/ns)."""
    w = np.asarray(omega, dtype=float)
    delta = w - r.branch_frequency(qubit_state)
    half = r.kappa / 2.0
    if r.coupling_type == CouplingType.REFLECTION:
        s = (1j * delta + half) / (1j * delta - half)
    else:
        s = half / (half - 1j * delta)
    if np.ndim(omega) == 0:
        return complex(s)
    return s


def optimal_probe_frequency(r: ResonatorParams) -> float:
    """Midpoint (ω_r^{(0)} + ω_r^{(1)})/2 of the two branches."""
    return 0.5 * (r.branch_frequency(0) + r.branch_frequency(1))


def phase_separation(r: ResonatorParams, omega: ArrayLike) -> Union[float, np.ndarray]:
    """|arg S^{(1)} − arg S^{(0)}| wrapped into [0, π]."""
    diff = np.angle(resonator_response(r, 1, omega) * np.conj(resonator_response(r, 0, omega)))
    value = np.abs(diff)
    return float(value) if np.ndim(value) == 0 else value


def state_distinguishability(r: ResonatorParams, omega: ArrayLike) -> Union[float, np.ndarray]:
    """|S^{(1)} − S^{(0)}|, the phasor separation per unit probe amplitude."""
    value = np.abs(resonator_response(r, 1, omega) - resonator_response(r, 0, omega))
    return float(value) if np.ndim(value) == 0 else value


def ring_up(
    r: ResonatorParams, qubit_state: QubitState, omega: float, t: ArrayLike
) -> np.ndarray:
    """Output field envelope after the probe switches on at t = 0 (t in ns).

    The intracavity field approaches steady state as 1 − e^{−(κ/2 − iΔ)t};
    reflection starts from the promptly reflected input.
    """
    times = np.asarray(t, dtype=float)
    delta = omega - r.branch_frequency(qubit_state)
    steady = resonator_response(r, qubit_state, omega)
    transient = np.exp(-(r.kappa / 2.0 - 1j * delta) * times)
    if r.coupling_type == CouplingType.REFLECTION:
        return steady + (1.0 - steady) * transient
    return steady * (1.0 - transient)
