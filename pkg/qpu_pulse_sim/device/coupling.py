"""Capacitive and resonator-mediated qubit-qubit coupling."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from ..core.errors import ErrorCode, ParameterError, RegimeError, make_context
from ..core.units import E_CHARGE, H_PLANCK, HBAR

logger = logging.getLogger(__name__)

DISPERSIVE_MARGIN = 10.0


class CouplingKind(str, Enum):
    DIRECT_CAPACITIVE = "direct_capacitive"
    VIA_RESONATOR = "via_resonator"


@dataclass(frozen=True)
class CouplingSpec:
    """Coupling between two qubits.

    Direct coupling uses ``C_qq`` (fF). Bus coupling uses the qubit-resonator
    rates g1, g2 and detunings delta1, delta2 (rad/ns).
    """

    kind: CouplingKind
    C_qq: Optional[float] = None
    g1: Optional[float] = None
    g2: Optional[float] = None
    delta1: Optional[float] = None
    delta2: Optional[float] = None


def coupling_strength(
    spec: CouplingSpec,
    omega_q1: Optional[float] = None,
    omega_q2: Optional[float] = None,
    C1: Optional[float] = None,
    C2: Optional[float] = None,
) -> float:
    """Effective qubit-qubit coupling g in rad/ns.

    direct: ½√(ω₁ω₂)·C_qq/(√(C_qq+C₁)√(C_qq+C₂))
    via resonator: g₁g₂(Δ₁+Δ₂)/(2Δ₁Δ₂)

    Raises:
        ParameterError: missing or non-positive inputs
        RegimeError: zero detuning for the bus-mediated form
    """
    if spec.kind == CouplingKind.DIRECT_CAPACITIVE:
        if None in (spec.C_qq, omega_q1, omega_q2, C1, C2):
            raise ParameterError(
                "direct coupling needs C_qq, omega_q1, omega_q2, C1 and C2",
                context=make_context(__name__, "coupling_strength", kind=spec.kind),
            )
        assert spec.C_qq is not None and C1 is not None and C2 is not None
        assert omega_q1 is not None and omega_q2 is not None
        if spec.C_qq < 0 or C1 <= 0 or C2 <= 0:
            raise ParameterError(
                "capacitances must be positive",
                context=make_context(
                    __name__, "coupling_strength", C_qq=spec.C_qq, C1=C1, C2=C2
                ),
            )
        return (
            0.5
            * math.sqrt(omega_q1 * omega_q2)
            * spec.C_qq
            / (math.sqrt(spec.C_qq + C1) * math.sqrt(spec.C_qq + C2))
        )

    if None in (spec.g1, spec.g2, spec.delta1, spec.delta2):
        raise ParameterError(
            "bus coupling needs g1, g2, delta1 and delta2",
            context=make_context(__name__, "coupling_strength", kind=spec.kind),
        )
    assert spec.g1 is not None and spec.g2 is not None
    assert spec.delta1 is not None and spec.delta2 is not None
    g1, g2, d1, d2 = spec.g1, spec.g2, spec.delta1, spec.delta2
    if d1 == 0.0 or d2 == 0.0:
        raise RegimeError(
            "qubit-resonator detuning is zero",
            pole="delta1=0" if d1 == 0.0 else "delta2=0",
            context=make_context(__name__, "coupling_strength", delta1=d1, delta2=d2),
        )
    for g, d, label in ((g1, d1, "1"), (g2, d2, "2")):
        if abs(d) < DISPERSIVE_MARGIN * abs(g):
            logger.warning(
                f"Qubit {label}: |Δ| = {abs(d):.4g} rad/ns is less than "
                f"{DISPERSIVE_MARGIN:g}·g = {DISPERSIVE_MARGIN * abs(g):.4g} rad/ns"
            )
    return g1 * g2 * (d1 + d2) / (2.0 * d1 * d2)


def charging_capacitance_fF(EC: float) -> float:
    """Total capacitance C_Σ = e²/(2h·E_C) in fF for E_C in GHz."""
    if not EC > 0:
        raise ParameterError(
            f"charging energy must be positive, got {EC}",
            context=make_context(__name__, "charging_capacitance_fF", EC=EC),
        )
    return E_CHARGE**2 / (2.0 * H_PLANCK * EC * 1e9) * 1e15


def drive_coupling_from_capacitance(
    C_d: float, C_sigma: float, EJ: float, EC: float
) -> float:
    """Drive coupling Ω = (C_d/C_Σ)Q_zpf/ħ in rad/(ns·V) for a transmon.

    Q_zpf = 2e·(E_J/32E_C)^{1/4} is the zero-point charge of the transmon mode.
    """
    if C_d <= 0 or C_sigma <= 0:
        raise ParameterError(
            "capacitances must be positive",
            code=ErrorCode.INVALID_PARAMS,
            context=make_context(__name__, "drive_coupling_from_capacitance"),
        )
    n_zpf = (EJ / (32.0 * EC)) ** 0.25
    q_zpf = 2.0 * E_CHARGE * n_zpf
    return (C_d / C_sigma) * q_zpf / HBAR * 1e-9
