"""Circuit Hamiltonians, spectra, couplings and dispersive parameters."""

from .circuits import (
    DuffingParams,
    FluxBias,
    QubitCircuitParams,
    QubitKind,
    asymmetry_from_ratio,
)
from .coupling import (
    CouplingKind,
    CouplingSpec,
    charging_capacitance_fF,
    coupling_strength,
    drive_coupling_from_capacitance,
)
from .dispersive import DispersiveParams, dispersive_params, ladder_dispersive_shift
from .hamiltonians import (
    build_duffing_hamiltonian,
    build_flux_qubit_hamiltonian,
    build_fluxonium_hamiltonian,
    build_hamiltonian,
    build_oscillator_hamiltonian,
    build_transmon_hamiltonian,
    effective_josephson_energy,
    flux_qubit_potential,
    phase_grid,
)
from .spectrum import Spectrum, spectrum
from .sweeps import SPECTRUM_COLUMNS, charge_dispersion, sweep_flux

__all__ = [
    "CouplingKind",
    "CouplingSpec",
    "DispersiveParams",
    "DuffingParams",
    "FluxBias",
    "QubitCircuitParams",
    "QubitKind",
    "SPECTRUM_COLUMNS",
    "Spectrum",
    "asymmetry_from_ratio",
    "build_duffing_hamiltonian",
    "build_flux_qubit_hamiltonian",
    "build_fluxonium_hamiltonian",
    "build_hamiltonian",
    "build_oscillator_hamiltonian",
    "build_transmon_hamiltonian",
    "charge_dispersion",
    "charging_capacitance_fF",
    "coupling_strength",
    "dispersive_params",
    "drive_coupling_from_capacitance",
    "effective_josephson_energy",
    "flux_qubit_potential",
    "ladder_dispersive_shift",
    "phase_grid",
    "spectrum",
    "sweep_flux",
]
