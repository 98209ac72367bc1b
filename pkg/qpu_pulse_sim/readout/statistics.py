"""Shot statistics, state assignment and readout error budgets."""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy.special import erfc

from ..core.errors import ParameterError, StatisticsError, make_context
from .signal import ReadoutSetup, expected_phasor, phasor_noise_std, simulate_phasors

logger = logging.getLogger(__name__)

MIN_HISTOGRAM_SHOTS = 100
SHOT_COLUMNS = ["shot", "I", "Q", "state_prepared", "state_assigned"]


def separation_error(snr: float) -> float:
    """Overlap error ½·erfc(SNR/2) of two equal-width Gaussian clusters."""
    if not snr >= 0:
        raise ParameterError(
            f"SNR must be >= 0, got {snr}",
            field_errors={"snr": ["must be >= 0"]},
            context=make_context(__name__, "separation_error", snr=snr),
        )
    return float(0.5 * erfc(snr / 2.0))


@dataclass(frozen=True)
class Separatrix:
    """Perpendicular bisector of the cluster means in the IQ plane.

    ``normal`` is a unit phasor pointing from μ₀ towards μ₁.
    """

    midpoint: complex
    normal: complex

    @classmethod
    def from_means(cls, mu0: complex, mu1: complex) -> "Separatrix":
        return cls(0.5 * (mu0 + mu1), (mu1 - mu0) / abs(mu1 - mu0))

    def project(self, phasors: np.ndarray) -> np.ndarray:
        """Signed distance from the separatrix along the normal."""
        return np.real((np.asarray(phasors) - self.midpoint) * np.conj(self.normal))

    def assign(self, phasors: np.ndarray) -> np.ndarray:
        return (self.project(phasors) > 0).astype(int)


@dataclass
class ShotStatistics:
    """Two-cluster shot statistics.

    Widths are the per-cluster σ/√2 along the separatrix normal, so the
    SNR δ/(Δ₀ + Δ₁) reduces to δ/(√2σ) and ½·erfc(SNR/2) is the overlap
    error of the bisecting separatrix.
    """

    phasors0: np.ndarray
    phasors1: np.ndarray
    mu0: complex
    mu1: complex
    width0: float
    width1: float
    snr: float
    epsilon_sep: float
    separatrix: Separatrix
    assignment_error: float

    @property
    def separation(self) -> float:
        return abs(self.mu1 - self.mu0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mu0": [self.mu0.real, self.mu0.imag],
            "mu1": [self.mu1.real, self.mu1.imag],
            "width0": self.width0,
            "width1": self.width1,
            "snr": self.snr,
            "epsilon_sep": self.epsilon_sep,
            "assignment_error": self.assignment_error,
            "n_shots": int(len(self.phasors0)),
        }


def shot_statistics(phasors0: np.ndarray, phasors1: np.ndarray) -> ShotStatistics:
    """Cluster means, widths, SNR and the empirical assignment error.

    Zero widths with distinct means give an infinite SNR and zero error.

    Raises:
        StatisticsError: fewer than two shots per state, or coincident means
    """
    z0 = np.asarray(phasors0, dtype=complex).ravel()
    z1 = np.asarray(phasors1, dtype=complex).ravel()
    if min(z0.size, z1.size) < 2:
        raise StatisticsError(
            f"need at least two shots per state, got {z0.size} and {z1.size}",
            context=make_context(__name__, "shot_statistics"),
        )
    mu0, mu1 = complex(z0.mean()), complex(z1.mean())
    if mu0 == mu1:
        raise StatisticsError(
            "cluster means coincide, no separatrix exists",
            context=make_context(__name__, "shot_statistics", mean=mu0),
        )
    separatrix = Separatrix.from_means(mu0, mu1)
    width0 = float(np.std(separatrix.project(z0), ddof=1)) / math.sqrt(2.0)
    width1 = float(np.std(separatrix.project(z1), ddof=1)) / math.sqrt(2.0)
    delta = abs(mu1 - mu0)
    snr = delta / (width0 + width1) if width0 + width1 > 0 else math.inf
    errors = (np.mean(separatrix.assign(z0) == 1), np.mean(separatrix.assign(z1) == 0))
    stats = ShotStatistics(
        phasors0=z0,
        phasors1=z1,
        mu0=mu0,
        mu1=mu1,
        width0=width0,
        width1=width1,
        snr=snr,
        epsilon_sep=separation_error(snr),
        separatrix=separatrix,
        assignment_error=float(0.5 * sum(errors)),
    )
    logger.debug(f"SNR {snr:.4g}, assignment error {stats.assignment_error:.4g}")
    return stats


def shot_frame(stats: ShotStatistics) -> pd.DataFrame:
    """Per-shot table with the prepared and assigned state."""
    phasors = np.concatenate([stats.phasors0, stats.phasors1])
    prepared = np.concatenate([np.zeros(stats.phasors0.size, int), np.ones(stats.phasors1.size, int)])
    return pd.DataFrame(
        {
            "shot": np.arange(phasors.size),
            "I": phasors.real,
            "Q": phasors.imag,
            "state_prepared": prepared,
            "state_assigned": stats.separatrix.assign(phasors),
        },
        columns=SHOT_COLUMNS,
    )


@dataclass
class HistogramGrid:
    """2D IQ histograms of both prepared states on shared bin edges."""

    i_edges: np.ndarray
    q_edges: np.ndarray
    counts0: np.ndarray
    counts1: np.ndarray

    @property
    def counts(self) -> np.ndarray:
        return self.counts0 + self.counts1

    def to_frame(self, state: Optional[int] = None) -> pd.DataFrame:
        """Count matrix with I-bin centers as rows and Q-bin centers as columns."""
        counts = self.counts if state is None else (self.counts0, self.counts1)[state]
        i_centers = 0.5 * (self.i_edges[1:] + self.i_edges[:-1])
        q_centers = 0.5 * (self.q_edges[1:] + self.q_edges[:-1])
        return pd.DataFrame(counts, index=pd.Index(i_centers, name="I"), columns=q_centers)

    def to_csv(self, path: Union[str, Path], state: Optional[int] = None) -> None:
        self.to_frame(state).to_csv(path, float_format="%.12g")


def histogram_grid(stats: ShotStatistics, bins: int = 64) -> HistogramGrid:
    phasors = np.concatenate([stats.phasors0, stats.phasors1])
    _, i_edges, q_edges = np.histogram2d(phasors.real, phasors.imag, bins=bins)
    counts0, _, _ = np.histogram2d(stats.phasors0.real, stats.phasors0.imag, bins=[i_edges, q_edges])
    counts1, _, _ = np.histogram2d(stats.phasors1.real, stats.phasors1.imag, bins=[i_edges, q_edges])
    return HistogramGrid(i_edges, q_edges, counts0.astype(int), counts1.astype(int))


def shot_histogram(
    setup: ReadoutSetup,
    n_shots: int,
    rng: Optional[np.random.Generator] = None,
    bins: int = 64,
    method: str = "analytic",
) -> Tuple[ShotStatistics, HistogramGrid]:
    """Simulate ``n_shots`` per prepared state and histogram the phasors.

    ``method`` picks the analytic shot model or the full sampled chain.

    Raises:
        ParameterError: n_shots < 100
        StatisticsError: degenerate clusters
    """
    if n_shots < MIN_HISTOGRAM_SHOTS:
        raise ParameterError(
            f"n_shots must be >= {MIN_HISTOGRAM_SHOTS}, got {n_shots}",
            field_errors={"n_shots": [f"must be >= {MIN_HISTOGRAM_SHOTS}"]},
            context=make_context(__name__, "shot_histogram", n_shots=n_shots),
        )
    generator = rng or np.random.default_rng()
    stats = shot_statistics(
        simulate_phasors(setup, 0, n_shots, generator, method),
        simulate_phasors(setup, 1, n_shots, generator, method),
    )
    return stats, histogram_grid(stats, bins)


def readout_decay_error(tau_rd: float, tau_s: float, T1: float) -> Tuple[float, float]:
    """Decay error and fidelity for a readout lasting τ_ro = τ_rd + τ_s/2.

    Times τ_rd, τ_s in ns and T1 in μs. Returns (1 − e^{−τ_ro/T1}, e^{−τ_ro/T1}).
    """
    if tau_rd < 0 or tau_s < 0 or not T1 > 0:
        raise ParameterError(
            f"invalid readout times tau_rd={tau_rd}, tau_s={tau_s}, T1={T1}",
            field_errors={"times": ["tau_rd, tau_s >= 0 and T1 > 0"]},
            context=make_context(__name__, "readout_decay_error"),
        )
    tau_ro_us = (tau_rd + 0.5 * tau_s) * 1e-3
    fidelity = math.exp(-tau_ro_us / T1)
    return 1.0 - fidelity, fidelity


@dataclass(frozen=True)
class ErrorBudget:
    """Monte-Carlo readout errors against the ε_sep + ε_decay estimate."""

    snr: float
    epsilon_sep: float
    epsilon_decay: float
    error_0: float
    error_1: float
    n_shots: int

    @property
    def predicted(self) -> float:
        return self.epsilon_sep + self.epsilon_decay

    @property
    def total(self) -> float:
        """Error of the prepared-|1⟩ shots, the ones exposed to decay."""
        return self.error_1

    def to_dict(self) -> Dict[str, Any]:
        return {
            "snr": self.snr,
            "epsilon_sep": self.epsilon_sep,
            "epsilon_decay": self.epsilon_decay,
            "predicted": self.predicted,
            "error_0": self.error_0,
            "error_1": self.error_1,
            "n_shots": self.n_shots,
        }


def readout_error_budget(
    setup: ReadoutSetup,
    T1: float,
    n_shots: int,
    rng: Optional[np.random.Generator] = None,
) -> ErrorBudget:
    """Readout errors with the qubit decaying during the measurement.

    Each |1⟩ shot draws a decay time from Exp(T1). The demodulated mean mixes
    μ₁ and μ₀ by the fraction of the window spent before the decay, and
    Gaussian noise is added as in the analytic shot model. Shots are
    assigned with the bisector of the decay-free means.
    """
    if n_shots < MIN_HISTOGRAM_SHOTS:
        raise ParameterError(
            f"n_shots must be >= {MIN_HISTOGRAM_SHOTS}, got {n_shots}",
            field_errors={"n_shots": [f"must be >= {MIN_HISTOGRAM_SHOTS}"]},
            context=make_context(__name__, "readout_error_budget", n_shots=n_shots),
        )
    generator = rng or np.random.default_rng()
    mu0, mu1 = expected_phasor(setup, 0), expected_phasor(setup, 1)
    if mu0 == mu1:
        raise StatisticsError(
            "cluster means coincide, no separatrix exists",
            context=make_context(__name__, "readout_error_budget"),
        )
    std = phasor_noise_std(setup)
    separatrix = Separatrix.from_means(mu0, mu1)
    snr = abs(mu1 - mu0) / (math.sqrt(2.0) * std) if std > 0 else math.inf

    decay_ns = generator.exponential(T1 * 1e3, n_shots)
    fraction = np.clip((decay_ns - setup.tau_rd) / setup.tau_s, 0.0, 1.0)
    means1 = fraction * mu1 + (1.0 - fraction) * mu0

    def noise() -> np.ndarray:
        return generator.normal(0.0, std, n_shots) + 1j * generator.normal(0.0, std, n_shots)

    shots0 = mu0 + noise()
    shots1 = means1 + noise()
    epsilon_decay, _ = readout_decay_error(setup.tau_rd, setup.tau_s, T1)
    budget = ErrorBudget(
        snr=snr,
        epsilon_sep=separation_error(snr),
        epsilon_decay=epsilon_decay,
        error_0=float(np.mean(separatrix.assign(shots0) == 1)),
        error_1=float(np.mean(separatrix.assign(shots1) == 0)),
        n_shots=n_shots,
    )
    logger.info(
        f"readout error budget: measured {budget.error_1:.4g}, "
        f"predicted {budget.predicted:.4g} (sep {budget.epsilon_sep:.3g}, decay {epsilon_decay:.3g})"
    )
    return budget
