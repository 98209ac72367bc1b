"""Dispersive qubit-resonator parameters and a Jaynes-Cummings ladder oracle.

Sign convention: Δ = ω_q − ω_r, and the resonator sits at ω_r − χ with the
qubit in |0⟩ and at ω_r + χ with the qubit in |1⟩.
"""

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from ..core.errors import RegimeError, make_context
from ..core.operators import annihilation
from ..core.units import TWO_PI

POLE_GUARD = 1e-6


@dataclass(frozen=True)
class DispersiveParams:
    """Dispersive-regime quantities, rates in rad/ns."""

    chi: float
    lamb_shift: float
    stark_per_photon: float
    n_crit: float

    @property
    def chi_MHz(self) -> float:
        return self.chi / TWO_PI * 1e3

    @property
    def lamb_shift_MHz(self) -> float:
        return self.lamb_shift / TWO_PI * 1e3

    @property
    def stark_per_photon_MHz(self) -> float:
        return self.stark_per_photon / TWO_PI * 1e3


def dispersive_params(g: float, delta: float, alpha: float) -> DispersiveParams:
    """Dispersive shift of a transmon coupled to a resonator.

    χ = (g²/Δ)/(1 + Δ/α) = g²α/(Δ(Δ+α)), positive in the straddling regime
    between the poles Δ = 0 and Δ = −α and negative outside it.

    Args:
        g: qubit-resonator coupling, rad/ns
        delta: ω_q − ω_r, rad/ns
        alpha: transmon anharmonicity, rad/ns

    Raises:
        RegimeError: at the poles Δ = 0 or Δ = −α
    """
    guard = POLE_GUARD * max(abs(delta), abs(alpha))
    if abs(delta) <= guard:
        raise RegimeError(
            "dispersive formulas diverge at zero qubit-resonator detuning",
            pole="delta=0",
            context=make_context(__name__, "dispersive_params", delta=delta, alpha=alpha),
        )
    if abs(delta + alpha) <= guard:
        raise RegimeError(
            "dispersive shift diverges where the 1-2 transition meets the resonator",
            pole="delta=-alpha",
            context=make_context(__name__, "dispersive_params", delta=delta, alpha=alpha),
        )
    g2 = g * g
    chi = g2 * alpha / (delta * (delta + alpha))
    n_crit = delta * delta / (4.0 * g2) if g2 > 0 else math.inf
    return DispersiveParams(
        chi=chi,
        lamb_shift=g2 / delta,
        stark_per_photon=2.0 * g2 / delta,
        n_crit=n_crit,
    )


def ladder_dispersive_shift(
    g: float,
    delta: float,
    alpha: float,
    omega_r: float = TWO_PI * 7.0,
    qubit_levels: int = 3,
    photons: int = 5,
) -> float:
    """χ from exact diagonalization of a transmon-resonator ladder.

    Builds ω_q b†b + (α/2)b†b(b†b−1) + ω_r a†a + g(a†b + ab†), labels dressed
    levels by their largest bare-state overlap and returns
    ((E₁₁ − E₁₀) − (E₀₁ − E₀₀))/2 with E_{q,n} for qubit level q, n photons.
    """
    omega_q = omega_r + delta
    b = annihilation(qubit_levels)
    a = annihilation(photons)
    nq = b.conj().T @ b
    H_q = omega_q * nq + 0.5 * alpha * nq @ (nq - np.eye(qubit_levels))
    H = (
        np.kron(H_q, np.eye(photons))
        + np.kron(np.eye(qubit_levels), omega_r * a.conj().T @ a)
        + g * (np.kron(b, a.conj().T) + np.kron(b.conj().T, a))
    )
    values, vectors = la.eigh(H)
    overlap = np.abs(vectors) ** 2

    def dressed(q: int, n: int) -> float:
        return float(values[int(np.argmax(overlap[q * photons + n, :]))])

    return 0.5 * ((dressed(1, 1) - dressed(1, 0)) - (dressed(0, 1) - dressed(0, 0)))
