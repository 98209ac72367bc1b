"""Purcell decay of a qubit through its readout resonator."""

import logging
import math
from typing import Optional

from ..core.errors import ParameterError, RegimeError, make_context

logger = logging.getLogger(__name__)

DISPERSIVE_MARGIN = 5.0


def resonator_impedance_ratio(delta: float, kappa: float, Q: float) -> float:
    """Re[Z_r]/Z₀ = Q/(1 + (Δ/κ)²) seen by the qubit at detuning Δ."""
    return Q / (1.0 + (delta / kappa) ** 2)


def purcell_rate_impedance(g: float, delta: float, kappa: float, omega_r: float) -> float:
    """γ = (g²/ω_r)·Re[Z_r]/Z₀, valid at any detuning (rates in rad/ns)."""
    return g * g / omega_r * resonator_impedance_ratio(delta, kappa, omega_r / kappa)


def purcell_rate(
    g: float,
    delta: float,
    kappa: float,
    omega_q: Optional[float] = None,
    omega_r: Optional[float] = None,
    Q_F: Optional[float] = None,
    dispersive: bool = True,
) -> float:
    """Purcell decay rate γ in the units of the inputs.

    Without a filter γ = (g/Δ)²κ, or g²/κ on resonance when ``dispersive``
    is False. A Purcell filter of quality Q_F multiplies the dispersive rate
    by (ω_q/ω_r)(ω_r/2Q_F|Δ|).

    Raises:
        RegimeError: Δ = 0 with the dispersive form
        ParameterError: a filter without both ω_q and ω_r, or κ <= 0
    """
    if not kappa > 0:
        raise ParameterError(
            "kappa must be > 0",
            field_errors={"kappa": ["must be > 0"]},
            context=make_context(__name__, "purcell_rate", kappa=kappa),
        )
    if g == 0.0:
        return 0.0
    if delta == 0.0:
        if dispersive:
            raise RegimeError(
                "the dispersive Purcell rate diverges at zero detuning",
                pole="delta=0",
                context=make_context(__name__, "purcell_rate", g=g, kappa=kappa),
            )
        return g * g / kappa
    if abs(delta) < DISPERSIVE_MARGIN * abs(g):
        logger.warning(f"|Δ| = {abs(delta):.4g} is within {DISPERSIVE_MARGIN:g}g; dispersive Purcell rate is unreliable")
    gamma = (g / delta) ** 2 * kappa
    if Q_F is None:
        return gamma
    if omega_q is None or omega_r is None or not Q_F > 0:
        raise ParameterError(
            "a Purcell filter needs omega_q, omega_r and Q_F > 0",
            field_errors={"Q_F": ["requires omega_q and omega_r"]},
            context=make_context(__name__, "purcell_rate", Q_F=Q_F),
        )
    return gamma * (omega_q / omega_r) * (omega_r / (2.0 * Q_F * abs(delta)))


def purcell_limited_t1(gamma: float) -> float:
    """T₁ = 1/γ in μs for γ in rad/ns."""
    return 1e-3 / gamma if gamma > 0 else math.inf
