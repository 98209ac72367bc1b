"""Cross-resonance and bSWAP: effective coefficients, rates and CR Rabi simulation.

Qubit 1 (control) is driven at the frequency of qubit 2 (target). In the
frame rotating at ω₂ the effective Hamiltonian is

    H = −(Δ₁₂/2) ZI + (Ω/2) [XI + (ν₁⁻ + η) IX + μ₁⁻ ZX]

with Δ₁₂ = ω₁ − ω₂ and η a direct drive on the target from crosstalk.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
import pandas as pd

from ..core.errors import ParameterError, RegimeError, make_context
from ..core.operators import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z
from .library import ZI, ZX

logger = logging.getLogger(__name__)

POLE_TOL = 1e-9
CR_TRACE_COLUMNS = ["t_ns", "control", "x", "y", "z"]


@dataclass(frozen=True)
class CREffectiveParams:
    """Dimensionless CR coefficients.

    ``mu_minus``/``nu_minus`` describe driving qubit 1 at ω₂ (anharmonicity α₁);
    ``mu_plus``/``nu_plus`` driving qubit 2 at ω₁ (α₂).
    """

    mu_minus: float
    mu_plus: float
    nu_minus: float
    nu_plus: float
    eta: float = 0.0
    delta12: float = 0.0

    def conditional_rates(self, omega: float) -> Tuple[float, float]:
        """Target Rabi rates Ω(ν₁⁻ + η ± μ₁⁻) for the control in |0⟩ and |1⟩, rad/ns."""
        base = self.nu_minus + self.eta
        return omega * (base + self.mu_minus), omega * (base - self.mu_minus)

    def zx_rate(self, omega: float) -> float:
        """Rate of the differential ZX angle, 2μ₁⁻Ω."""
        return 2.0 * self.mu_minus * omega


def _check_poles(delta12: float, alphas: Tuple[float, float], operation: str) -> None:
    if abs(delta12) <= POLE_TOL:
        raise RegimeError(
            "qubit detuning Δ₁₂ must be nonzero",
            pole="delta12=0",
            context=make_context(__name__, operation, delta12=delta12),
        )
    for index, alpha in enumerate(alphas, start=1):
        for sign in (1.0, -1.0):
            if abs(alpha + sign * delta12) <= POLE_TOL:
                raise RegimeError(
                    f"α{index} = {'-' if sign > 0 else '+'}Δ₁₂ is a pole of the effective coupling",
                    pole=f"alpha{index}={'-' if sign > 0 else '+'}delta12",
                    context=make_context(__name__, operation, alpha=alpha, delta12=delta12),
                )


def cr_effective_params(
    g: float, delta12: float, alpha1: float, alpha2: float, eta: float = 0.0
) -> CREffectiveParams:
    """μ_i^± = ±(g/Δ₁₂)·α_i/(α_i ∓ Δ₁₂) and ν_i^± = ±(g/Δ₁₂)·(∓Δ₁₂)/(α_i ∓ Δ₁₂).

    Raises:
        RegimeError: invalid-regime for Δ₁₂ = 0 or α_i = ±Δ₁₂
    """
    _check_poles(delta12, (alpha1, alpha2), "cr_effective_params")
    ratio = g / delta12
    mu_minus = -ratio * alpha1 / (alpha1 + delta12)
    nu_minus = -ratio * delta12 / (alpha1 + delta12)
    mu_plus = ratio * alpha2 / (alpha2 - delta12)
    nu_plus = -ratio * delta12 / (alpha2 - delta12)
    if eta >= 1.0:
        logger.warning(f"Crosstalk η={eta:.3f} dominates the cross-resonance drive")
    if abs(g) > 0.05 * abs(delta12):
        logger.warning(f"g/Δ₁₂ = {abs(ratio):.3f} outside the perturbative regime")
    return CREffectiveParams(
        mu_minus=mu_minus,
        mu_plus=mu_plus,
        nu_minus=nu_minus,
        nu_plus=nu_plus,
        eta=eta,
        delta12=delta12,
    )


def cr_hamiltonian(params: CREffectiveParams, omega: float) -> np.ndarray:
    """4×4 effective CR Hamiltonian in rad/ns, control qubit first."""
    XI = np.kron(PAULI_X, PAULI_I)
    IX = np.kron(PAULI_I, PAULI_X)
    return -0.5 * params.delta12 * ZI + 0.5 * omega * (
        XI + (params.nu_minus + params.eta) * IX + params.mu_minus * ZX
    )


@dataclass
class CRRabiResult:
    """Target Bloch vectors for control |0⟩ and |1⟩ and the fitted rates.

    ``angles[c]`` is the unwrapped rotation angle atan2(−⟨Y⟩, ⟨Z⟩) of the
    target for control state c.
    """

    times: np.ndarray
    bloch: np.ndarray = field(repr=False)
    angles: np.ndarray = field(repr=False)
    rates: Tuple[float, float] = (0.0, 0.0)

    @property
    def differential_angle(self) -> np.ndarray:
        return self.angles[0] - self.angles[1]

    def time_to_differential(self, angle: float = math.pi) -> float:
        """First time the differential angle magnitude reaches ``angle`` (linear interpolation)."""
        diff = np.abs(self.differential_angle)
        above = np.nonzero(diff >= angle)[0]
        if len(above) == 0:
            return math.inf
        k = int(above[0])
        if k == 0:
            return float(self.times[0])
        t0, t1 = self.times[k - 1], self.times[k]
        d0, d1 = diff[k - 1], diff[k]
        return float(t0 + (angle - d0) * (t1 - t0) / (d1 - d0))

    def to_frame(self) -> pd.DataFrame:
        rows = []
        for control in (0, 1):
            for t, (x, y, z) in zip(self.times, self.bloch[control]):
                rows.append((t, control, x, y, z))
        return pd.DataFrame(rows, columns=CR_TRACE_COLUMNS)


def simulate_cr_rabi(params: CREffectiveParams, omega: float, times: np.ndarray) -> CRRabiResult:
    """Evolve |c⟩|0⟩ for c = 0, 1 under the effective CR Hamiltonian.

    The Hamiltonian is static, so states follow exactly from one
    eigendecomposition. Rates are least-squares slopes of the unwrapped
    target angle.

    Raises:
        ParameterError: invalid-grid for fewer than three times
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or len(t) < 3 or np.any(np.diff(t) <= 0):
        raise ParameterError(
            "CR simulation needs at least three increasing times",
            context=make_context(__name__, "simulate_cr_rabi"),
        )
    values, vectors = np.linalg.eigh(cr_hamiltonian(params, omega))
    phases = np.exp(-1j * np.outer(t, values))
    target_ops = [np.kron(PAULI_I, P) for P in (PAULI_X, PAULI_Y, PAULI_Z)]
    bloch = np.empty((2, len(t), 3))
    angles = np.empty((2, len(t)))
    rates = []
    for control in (0, 1):
        psi0 = np.zeros(4, dtype=complex)
        psi0[2 * control] = 1.0
        states = (phases * (vectors.conj().T @ psi0)) @ vectors.T
        for axis, op in enumerate(target_ops):
            bloch[control, :, axis] = np.real(np.einsum("ti,ij,tj->t", states.conj(), op, states))
        angles[control] = np.unwrap(np.arctan2(-bloch[control, :, 1], bloch[control, :, 2]))
        rates.append(float(np.polyfit(t, angles[control], 1)[0]))
    logger.debug(f"CR Rabi rates: control |0⟩ {rates[0]:.5f}, |1⟩ {rates[1]:.5f} rad/ns")
    return CRRabiResult(times=t, bloch=bloch, angles=angles, rates=(rates[0], rates[1]))


def bswap_rate(
    Omega: float, g: float, delta12: float, alpha1: float, alpha2: float, gamma_drive: float
) -> float:
    """Ω_B = −2gΩ²(−gγα_Σ + γ²α₂(α₁+Δ₁₂) + α₁(α₂−Δ₁₂)) / ((α₁+Δ₁₂)(α₂−Δ₁₂)Δ₁₂²).

    Raises:
        RegimeError: invalid-regime when a denominator factor vanishes
    """
    for label, value in (
        ("delta12=0", delta12),
        ("alpha1=-delta12", alpha1 + delta12),
        ("alpha2=delta12", alpha2 - delta12),
    ):
        if abs(value) <= POLE_TOL:
            raise RegimeError(
                f"bSWAP rate pole at {label}",
                pole=label,
                context=make_context(__name__, "bswap_rate", delta12=delta12),
            )
    alpha_sum = alpha1 + alpha2
    numerator = -2.0 * g * Omega**2 * (
        -g * gamma_drive * alpha_sum
        + gamma_drive**2 * alpha2 * (alpha1 + delta12)
        + alpha1 * (alpha2 - delta12)
    )
    return float(numerator / ((alpha1 + delta12) * (alpha2 - delta12) * delta12**2))


def bswap_gate_time(rate: float) -> float:
    """Hold time π/(2|Ω_B|) for a full bSWAP, ns."""
    if rate == 0.0:
        return math.inf
    return math.pi / (2.0 * abs(rate))
