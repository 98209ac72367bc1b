"""Decoherence rates, golden-rule relaxation and thermal detailed balance."""

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from ..core.errors import ErrorCode, ParameterError, make_context
from ..core.units import H_PLANCK, HBAR, K_B

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecoherenceRates:
    """Exponential-regime rates in 1/μs.

    Γ₁ = Γ₁↓ + Γ₁↑ and Γ₂ = Γ₁/2 + Γ_φ. ``T_phi_G`` optionally carries the
    Gaussian dephasing time of 1/f noise (μs), used in place of Γ_φ by the
    decay laws that accept it.
    """

    Gamma1_down: float
    Gamma1_up: float = 0.0
    Gamma_phi: float = 0.0
    T_phi_G: Optional[float] = None

    def __post_init__(self) -> None:
        context = make_context(__name__, "DecoherenceRates", Gamma1=self.Gamma1, Gamma_phi=self.Gamma_phi)
        if self.Gamma1_down < 0 or self.Gamma1_up < 0:
            raise ParameterError("relaxation rates must be >= 0", code=ErrorCode.INVALID_RATES, context=context)
        if self.Gamma_phi < 0:
            raise ParameterError(
                "Γ₂ < Γ₁/2 is unphysical (negative pure dephasing)",
                code=ErrorCode.INVALID_RATES,
                context=context,
            )
        if self.T_phi_G is not None and not self.T_phi_G > 0:
            raise ParameterError("T_phi_G must be > 0", code=ErrorCode.INVALID_RATES, context=context)

    @classmethod
    def from_times(
        cls,
        T1: float,
        T2: Optional[float] = None,
        T_phi: Optional[float] = None,
        T_phi_G: Optional[float] = None,
        Gamma1_up: float = 0.0,
    ) -> "DecoherenceRates":
        """Rates from T₁ and either T₂ or T_φ (μs); T₂ > 2T₁ raises invalid-rates."""
        if not T1 > 0:
            raise ParameterError(
                "T1 must be > 0",
                code=ErrorCode.INVALID_RATES,
                context=make_context(__name__, "DecoherenceRates.from_times", T1=T1),
            )
        gamma1 = 1.0 / T1
        if T2 is not None:
            gamma_phi = 1.0 / T2 - gamma1 / 2.0
            if gamma_phi < -1e-12 * gamma1:
                raise ParameterError(
                    f"T2 = {T2} μs exceeds the 2·T1 = {2 * T1} μs limit",
                    code=ErrorCode.INVALID_RATES,
                    context=make_context(__name__, "DecoherenceRates.from_times", T1=T1, T2=T2),
                )
            gamma_phi = max(gamma_phi, 0.0)
        elif T_phi is not None:
            gamma_phi = 1.0 / T_phi if math.isfinite(T_phi) else 0.0
        else:
            gamma_phi = 0.0
        return cls(gamma1 - Gamma1_up, Gamma1_up, gamma_phi, T_phi_G)

    @property
    def Gamma1(self) -> float:
        return self.Gamma1_down + self.Gamma1_up

    @property
    def Gamma2(self) -> float:
        return self.Gamma1 / 2.0 + self.Gamma_phi

    @property
    def T1(self) -> float:
        return 1.0 / self.Gamma1 if self.Gamma1 > 0 else math.inf

    @property
    def T2(self) -> float:
        return 1.0 / self.Gamma2 if self.Gamma2 > 0 else math.inf

    @property
    def T_phi(self) -> float:
        return 1.0 / self.Gamma_phi if self.Gamma_phi > 0 else math.inf

    def to_dict(self) -> Dict[str, Optional[float]]:
        return {
            "Gamma1_per_us": self.Gamma1,
            "Gamma1_up_per_us": self.Gamma1_up,
            "Gamma1_down_per_us": self.Gamma1_down,
            "Gamma_phi_per_us": self.Gamma_phi,
            "Gamma2_per_us": self.Gamma2,
            "T1_us": self.T1,
            "T2_us": self.T2,
            "T_phi_G_us": self.T_phi_G,
        }


def gamma1_from_psd(matrix_element: float, S_at_omega_q: float) -> float:
    """Golden-rule rate Γ₁ = |⟨0|∂H/∂λ|1⟩|²·S_λ(ω_q)/ħ², in 1/s.

    Args:
        matrix_element: |⟨0|∂H/∂λ|1⟩| in joules per noise unit
        S_at_omega_q: two-sided S_λ at the qubit frequency, (noise unit)²/Hz
    """
    if matrix_element < 0 or S_at_omega_q < 0:
        raise ParameterError(
            "matrix element and spectral density must be >= 0",
            context=make_context(__name__, "gamma1_from_psd"),
        )
    return float(matrix_element**2 * S_at_omega_q / HBAR**2)


def charge_matrix_element(EC: float, n01: float) -> float:
    """|⟨0|∂H/∂n_g|1⟩| = 8E_C|⟨0|n̂|1⟩| in joules, E_C in GHz."""
    return float(8.0 * H_PLANCK * EC * 1e9 * abs(n01))


def boltzmann_exponent(omega_q: float, T: float) -> float:
    """ħω_q/k_BT for ω_q in rad/ns; infinite at T = 0."""
    if T == 0.0:
        return math.inf
    return float(HBAR * omega_q * 1e9 / (K_B * T))


def thermal_rates(omega_q: float, T: float, Gamma1_down: float) -> Tuple[float, float]:
    """Detailed balance: Γ₁↑ = e^{−ħω_q/k_BT}Γ₁↓ and polarization tanh(ħω_q/2k_BT).

    Args:
        omega_q: qubit frequency, rad/ns
        T: bath temperature, K
        Gamma1_down: emission rate, any rate unit (returned in the same unit)
    """
    if T < 0 or not math.isfinite(T):
        raise ParameterError(
            f"temperature must be finite and >= 0, got {T}",
            context=make_context(__name__, "thermal_rates", T=T),
        )
    x = boltzmann_exponent(omega_q, T)
    if math.isinf(x):
        return 0.0, 1.0
    gamma_up = math.exp(-x) * Gamma1_down
    logger.debug(f"ħω/k_BT = {x:.3f}: Γ↑/Γ↓ = {math.exp(-x):.3e}")
    return gamma_up, math.tanh(x / 2.0)
