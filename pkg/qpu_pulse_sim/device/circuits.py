"""Circuit parameter types for the supported qubit modalities.

Energies are E/h in GHz; rates are angular, in rad/ns.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Dict, List, Optional

from ..core.errors import ErrorCode, ParameterError, make_context

if TYPE_CHECKING:
    from .spectrum import Spectrum


class QubitKind(str, Enum):
    """Supported circuit modalities."""

    TRANSMON = "transmon"
    SPLIT_TRANSMON = "split_transmon"
    FLUX_QUBIT = "flux_qubit"
    FLUXONIUM = "fluxonium"


@dataclass(frozen=True)
class QubitCircuitParams:
    """Circuit energies of a single qubit.

    For a split transmon ``EJ`` is the summed junction energy E_JΣ and ``d`` the
    junction asymmetry. For the flux qubit ``gamma`` is the ratio of the large
    junctions to the small one; for fluxonium the inductive energy defaults to
    (gamma/N)·EJ unless ``EL`` is given.
    """

    kind: QubitKind
    EC: float
    EJ: float
    d: float = 0.0
    gamma: float = 1.0
    N: int = 1
    ng: float = 0.0
    EL: Optional[float] = None

    def __post_init__(self) -> None:
        errors: Dict[str, List[str]] = {}
        if not self.EC > 0:
            errors.setdefault("EC", []).append("must be > 0")
        if not self.EJ >= 0:
            errors.setdefault("EJ", []).append("must be >= 0")
        if not abs(self.d) <= 1:
            errors.setdefault("d", []).append("|d| must be <= 1")
        if not self.gamma > 0:
            errors.setdefault("gamma", []).append("must be > 0")
        if self.N < 1:
            errors.setdefault("N", []).append("must be >= 1")
        if self.EL is not None and not self.EL > 0:
            errors.setdefault("EL", []).append("must be > 0")
        for name in ("EC", "EJ", "d", "gamma", "ng"):
            if not math.isfinite(getattr(self, name)):
                errors.setdefault(name, []).append("must be finite")
        if errors:
            raise ParameterError(
                f"invalid circuit parameters: {errors}",
                field_errors=errors,
                context=make_context(__name__, "QubitCircuitParams", kind=self.kind),
            )

    @property
    def inductive_energy(self) -> float:
        """E_L in GHz."""
        if self.EL is not None:
            return self.EL
        return self.gamma / self.N * self.EJ


@dataclass(frozen=True)
class FluxBias:
    """Reduced external flux φ_e in radians.

    SQUID loops use φ_e = πΦ/Φ₀, flux-qubit and fluxonium loops φ_e = 2πΦ/Φ₀.
    No periodic reduction is applied.
    """

    phi_e: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.phi_e):
            raise ParameterError(
                "phi_e must be finite",
                context=make_context(__name__, "FluxBias", phi_e=self.phi_e),
            )


@dataclass(frozen=True)
class DuffingParams:
    """Weakly anharmonic oscillator: ω_q n + (α/2) n(n−1), rates in rad/ns."""

    omega_q: float
    alpha: float

    @classmethod
    def from_spectrum(cls, spectrum: "Spectrum") -> "DuffingParams":
        if spectrum.alpha is None:
            raise ParameterError(
                "spectrum needs at least three levels for a Duffing model",
                code=ErrorCode.INVALID_TRUNCATION,
                context=make_context(__name__, "DuffingParams.from_spectrum"),
            )
        return cls(omega_q=spectrum.omega_01, alpha=spectrum.alpha)


def asymmetry_from_ratio(gamma: float) -> float:
    """Junction asymmetry d = (γ−1)/(γ+1) for E_J2/E_J1 = γ."""
    if not gamma > 0:
        raise ParameterError(
            "junction ratio must be > 0",
            context=make_context(__name__, "asymmetry_from_ratio", gamma=gamma),
        )
    return (gamma - 1.0) / (gamma + 1.0)
