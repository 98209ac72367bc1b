"""Noise spectra, decoherence laws, filter functions and decay experiments."""

from .density import (
    bloch_redfield_rho,
    gaussian_chi,
    lindblad_evolve,
    polarization,
    purity,
    rho_with_1f,
)
from .experiments import (
    EXPERIMENT_COLUMNS,
    DecayExperimentResult,
    ExperimentKind,
    filtered_chi,
    simulate_decay_experiment,
)
from .filters import (
    PulseSequenceSpec,
    coherence_decay,
    coherence_function,
    filter_function,
)
from .fitting import (
    FitResult,
    aicc,
    fit_dephasing_decay,
    fit_exponential_decay,
    fit_model,
    fit_ramsey,
    select_model,
)
from .psd import NoisePSD, PSDKind, psd_eval
from .rates import (
    DecoherenceRates,
    boltzmann_exponent,
    charge_matrix_element,
    gamma1_from_psd,
    thermal_rates,
)
from .synthesis import band_variance, synthesize_noise

__all__ = [
    "DecayExperimentResult",
    "DecoherenceRates",
    "EXPERIMENT_COLUMNS",
    "ExperimentKind",
    "FitResult",
    "NoisePSD",
    "PSDKind",
    "PulseSequenceSpec",
    "aicc",
    "band_variance",
    "bloch_redfield_rho",
    "boltzmann_exponent",
    "charge_matrix_element",
    "coherence_decay",
    "coherence_function",
    "filter_function",
    "filtered_chi",
    "fit_dephasing_decay",
    "fit_exponential_decay",
    "fit_model",
    "fit_ramsey",
    "gamma1_from_psd",
    "gaussian_chi",
    "lindblad_evolve",
    "polarization",
    "psd_eval",
    "purity",
    "rho_with_1f",
    "select_model",
    "simulate_decay_experiment",
    "synthesize_noise",
    "thermal_rates",
]
