"""Parameter sweeps over flux bias and offset charge."""

import dataclasses
from typing import Any, Iterable

import numpy as np
import pandas as pd

from ..core.units import TWO_PI
from .circuits import FluxBias, QubitCircuitParams
from .hamiltonians import DEFAULT_CHARGE_CUTOFF, build_hamiltonian, build_transmon_hamiltonian
from .spectrum import spectrum

SPECTRUM_COLUMNS = ["phi_e", "omega01_GHz", "omega12_GHz", "alpha_GHz"]


def sweep_flux(
    p: QubitCircuitParams, phi_values: Iterable[float], **truncation: Any
) -> pd.DataFrame:
    """ω₀₁, ω₁₂ and α (as frequencies in GHz) versus reduced flux φ_e.

    Args:
        p: circuit parameters of any kind
        phi_values: flux biases in radians
        truncation: forwarded to ``build_hamiltonian`` (cutoff, points, levels, rtol)

    Returns:
        DataFrame with the columns of SPECTRUM_COLUMNS
    """
    rows = []
    for phi_e in phi_values:
        spec = spectrum(build_hamiltonian(p, FluxBias(float(phi_e)), **truncation), k=3)
        rows.append(
            {
                "phi_e": float(phi_e),
                "omega01_GHz": spec.omega_01 / TWO_PI,
                "omega12_GHz": spec.omega_12 / TWO_PI,
                "alpha_GHz": spec.alpha / TWO_PI,
            }
        )
    return pd.DataFrame(rows, columns=SPECTRUM_COLUMNS)


def charge_dispersion(
    p: QubitCircuitParams, points: int = 21, cutoff: int = DEFAULT_CHARGE_CUTOFF
) -> float:
    """Peak-to-peak variation of ω₀₁ (rad/ns) over n_g ∈ [0, 1]."""
    omegas = [
        spectrum(
            build_transmon_hamiltonian(dataclasses.replace(p, ng=float(ng)), cutoff), k=2
        ).omega_01
        for ng in np.linspace(0.0, 1.0, points)
    ]
    return float(np.max(omegas) - np.min(omegas))
