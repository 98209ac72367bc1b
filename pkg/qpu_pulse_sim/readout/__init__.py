"""Dispersive readout: resonator response, signal chain, statistics and Purcell decay."""

from .amplifier import (
    AmplifierChain,
    AmplifierStage,
    Paramp,
    ParampMode,
    added_noise,
    output_quadrature_variances,
    paramp_transform,
    quadrature_gains,
    quantum_efficiency,
    system_noise_temperature,
)
from .purcell import purcell_limited_t1, purcell_rate, purcell_rate_impedance
from .resonator import (
    CouplingType,
    ResonatorParams,
    optimal_probe_frequency,
    phase_separation,
    resonator_response,
    ring_up,
    state_distinguishability,
)
from .signal import (
    PHASOR_METHODS,
    IQRecord,
    ProbeTone,
    ReadoutSetup,
    amplitude_for_snr,
    analog_downconvert,
    chain_phasors,
    expected_phasor,
    expected_snr,
    heterodyne_demodulate,
    moving_average_gain,
    noise_sigma,
    phasor_noise_std,
    readout_phasors,
    record_signal,
    simulate_phasors,
    synthesize_readout_signal,
)
from .statistics import (
    SHOT_COLUMNS,
    ErrorBudget,
    HistogramGrid,
    Separatrix,
    ShotStatistics,
    histogram_grid,
    readout_decay_error,
    readout_error_budget,
    separation_error,
    shot_frame,
    shot_histogram,
    shot_statistics,
)

__all__ = [
    "PHASOR_METHODS",
    "AmplifierChain",
    "AmplifierStage",
    "CouplingType",
    "ErrorBudget",
    "HistogramGrid",
    "IQRecord",
    "Paramp",
    "ParampMode",
    "ProbeTone",
    "ReadoutSetup",
    "ResonatorParams",
    "SHOT_COLUMNS",
    "Separatrix",
    "ShotStatistics",
    "added_noise",
    "amplitude_for_snr",
    "analog_downconvert",
    "chain_phasors",
    "expected_phasor",
    "expected_snr",
    "heterodyne_demodulate",
    "histogram_grid",
    "moving_average_gain",
    "noise_sigma",
    "optimal_probe_frequency",
    "output_quadrature_variances",
    "paramp_transform",
    "phase_separation",
    "phasor_noise_std",
    "purcell_limited_t1",
    "purcell_rate",
    "purcell_rate_impedance",
    "quadrature_gains",
    "quantum_efficiency",
    "readout_decay_error",
    "readout_error_budget",
    "readout_phasors",
    "record_signal",
    "resonator_response",
    "ring_up",
    "separation_error",
    "shot_frame",
    "shot_histogram",
    "shot_statistics",
    "simulate_phasors",
    "state_distinguishability",
    "synthesize_readout_signal",
    "system_noise_temperature",
]
