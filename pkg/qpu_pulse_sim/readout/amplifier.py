"""Amplifier chain noise temperature, quantum efficiency and paramp scattering.

Field quadratures follow a = X + iP with [X, P] = i/2, so vacuum has
variance ¼ in every quadrature.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..core.errors import ParameterError, make_context
from ..core.units import HBAR, K_B

logger = logging.getLogger(__name__)

VACUUM_VARIANCE = 0.25


class ParampMode(str, Enum):
    PHASE_INSENSITIVE = "phase_insensitive"
    PHASE_SENSITIVE = "phase_sensitive"


def db_to_linear(gain_dB: float) -> float:
    return 10.0 ** (gain_dB / 10.0)


@dataclass(frozen=True)
class AmplifierStage:
    """One gain stage: linear power gain and noise temperature (K)."""

    gain: float
    noise_temperature: float
    name: str = ""

    def __post_init__(self) -> None:
        errors: Dict[str, List[str]] = {}
        if not self.gain >= 1.0:
            errors["gain"] = ["must be >= 1"]
        if not self.noise_temperature >= 0.0:
            errors["noise_temperature"] = ["must be >= 0"]
        if errors:
            raise ParameterError(
                f"invalid amplifier stage {self.name!r}: {errors}",
                field_errors=errors,
                context=make_context(__name__, "AmplifierStage", name=self.name),
            )

    @classmethod
    def from_dB(cls, gain_dB: float, noise_temperature: float, name: str = "") -> "AmplifierStage":
        return cls(db_to_linear(gain_dB), noise_temperature, name)


@dataclass(frozen=True)
class Paramp:
    """Parametric amplifier operating mode; ``phi`` is the pump phase (rad)."""

    gain: float
    mode: ParampMode = ParampMode.PHASE_INSENSITIVE
    phi: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", ParampMode(self.mode))
        _check_gain(self.gain, "Paramp")


@dataclass(frozen=True)
class AmplifierChain:
    """Gain stages ordered from the qubit chip outwards."""

    stages: Tuple[AmplifierStage, ...] = field(default_factory=tuple)
    paramp: Optional[Paramp] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "stages", tuple(self.stages))

    @property
    def total_gain(self) -> float:
        return float(np.prod([s.gain for s in self.stages])) if self.stages else 1.0


def _check_gain(gain: float, operation: str) -> None:
    if not gain >= 1.0:
        raise ParameterError(
            f"amplifier gain must be >= 1, got {gain}",
            field_errors={"gain": ["must be >= 1"]},
            context=make_context(__name__, operation, gain=gain),
        )


def system_noise_temperature(chain: AmplifierChain) -> float:
    """T_sys = T_N1 + T_N2/G1 + T_N3/(G1G2) + ..."""
    if not chain.stages:
        raise ParameterError(
            "amplifier chain has no stages",
            context=make_context(__name__, "system_noise_temperature"),
        )
    total, gain = 0.0, 1.0
    for stage in chain.stages:
        total += stage.noise_temperature / gain
        gain *= stage.gain
    return total


def quantum_efficiency(omega_rf: float, T_sys: float) -> float:
    """η = ħω_RF/(k_B T_sys) for ω_RF in rad/ns.

    Values at or above one are returned unchanged and logged: the
    expression stops being an efficiency for chains that cold.
    """
    if not T_sys > 0:
        raise ParameterError(
            f"T_sys must be > 0, got {T_sys}",
            context=make_context(__name__, "quantum_efficiency", T_sys=T_sys),
        )
    eta = HBAR * omega_rf * 1e9 / (K_B * T_sys)
    if eta >= 1.0:
        logger.warning(f"quantum efficiency {eta:.3f} >= 1 at T_sys = {T_sys:.3g} K")
    return float(eta)


def quadrature_gains(gain: float) -> Tuple[float, float]:
    """Amplitude gains √G ± √(G−1) of the aligned phase-sensitive quadratures."""
    _check_gain(gain, "quadrature_gains")
    root, rest = math.sqrt(gain), math.sqrt(gain - 1.0)
    return root + rest, root - rest


def output_quadrature_variances(
    gain: float, mode: ParampMode, input_variance: float = VACUUM_VARIANCE
) -> Tuple[float, float]:
    """Output variances of the amplified and conjugate quadratures.

    Phase-insensitive: both equal G·v + (G−1)/4. Phase-sensitive with the
    pump aligned: v(√G ± √(G−1))².
    """
    _check_gain(gain, "output_quadrature_variances")
    if ParampMode(mode) == ParampMode.PHASE_INSENSITIVE:
        value = gain * input_variance + (gain - 1.0) * VACUUM_VARIANCE
        return value, value
    up, down = quadrature_gains(gain)
    return input_variance * up**2, input_variance * down**2


def added_noise(gain: float) -> float:
    """Input-referred added quadrature variance (G−1)/(4G) of a phase-insensitive amplifier."""
    _check_gain(gain, "added_noise")
    return (gain - 1.0) * VACUUM_VARIANCE / gain


def vacuum_samples(n: int, rng: np.random.Generator) -> np.ndarray:
    """Complex samples with independent quadratures of variance ¼."""
    std = math.sqrt(VACUUM_VARIANCE)
    return rng.normal(0.0, std, n) + 1j * rng.normal(0.0, std, n)


def paramp_transform(
    a_in: np.ndarray,
    gain: float,
    mode: ParampMode = ParampMode.PHASE_INSENSITIVE,
    phi: float = 0.0,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """Apply the paramp scattering relation to an ensemble of input amplitudes.

    Phase-insensitive: a_out = √G·a_in + √(G−1)·b_in† with b_in an idler
    in vacuum. Phase-sensitive: a_out = √G·a_in + e^{−iφ}√(G−1)·a_in†.

    Raises:
        ParameterError: invalid-params for G < 1
    """
    _check_gain(gain, "paramp_transform")
    a = np.asarray(a_in, dtype=complex)
    if ParampMode(mode) == ParampMode.PHASE_SENSITIVE:
        return math.sqrt(gain) * a + np.exp(-1j * phi) * math.sqrt(gain - 1.0) * np.conj(a)
    idler = vacuum_samples(a.size, rng or np.random.default_rng()).reshape(a.shape)
    return math.sqrt(gain) * a + math.sqrt(gain - 1.0) * np.conj(idler)
