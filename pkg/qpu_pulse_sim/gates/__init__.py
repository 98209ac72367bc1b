"""Gate unitaries, virtual-Z compilation and two-qubit gate simulators."""

from .cphase import (
    STRATEGIES as CPHASE_STRATEGIES,
    CPhaseSimulation,
    CPhaseTrajectory,
    conditional_phase_integral,
    cphase_trajectory,
    cphase_unitary,
    mixing_angle,
    simulate_cphase,
)
from .cross_resonance import (
    CREffectiveParams,
    CRRabiResult,
    bswap_gate_time,
    bswap_rate,
    cr_effective_params,
    cr_hamiltonian,
    simulate_cr_rabi,
)
from .identities import IDENTITY_TARGETS, IdentityReport, synthesize_identity
from .iswap import (
    ChevronMap,
    FluxGateReport,
    IswapPhaseCorrection,
    TwoQubitFluxGateConfig,
    corrected_iswap,
    iswap_chevron,
    iswap_phase_correction,
    iswap_unitary,
    simulate_iswap,
)
from .library import (
    GateOp,
    ZXZXZDecomposition,
    bswap_unitary,
    circuit_unitary,
    cnot,
    cnot_from_zx,
    cphase,
    cz_phi,
    decompose_zxzxz,
    gate_fidelity,
    hadamard,
    operator_distance,
    phase_gate,
    phased_x_gate,
    rotation_error_angle,
    run_circuit,
    s_gate,
    su2_gate,
    t_gate,
    uzz,
    x_gate,
    y_gate,
    z_gate,
    zx_unitary,
)
from .two_qubit import (
    FrequencyMap,
    TransmonPair,
    ZetaMap,
    dressed_levels,
    two_excitation_hamiltonian,
    zeta,
)
from .virtual_z import VirtualZProgram, any_su2_sequence, schedule_sequence, virtual_z_compile

__all__ = [
    "CPHASE_STRATEGIES",
    "CPhaseSimulation",
    "CPhaseTrajectory",
    "CREffectiveParams",
    "CRRabiResult",
    "ChevronMap",
    "FluxGateReport",
    "FrequencyMap",
    "GateOp",
    "IDENTITY_TARGETS",
    "IdentityReport",
    "IswapPhaseCorrection",
    "TransmonPair",
    "TwoQubitFluxGateConfig",
    "VirtualZProgram",
    "ZXZXZDecomposition",
    "ZetaMap",
    "any_su2_sequence",
    "bswap_gate_time",
    "bswap_rate",
    "bswap_unitary",
    "circuit_unitary",
    "cnot",
    "cnot_from_zx",
    "conditional_phase_integral",
    "mixing_angle",
    "corrected_iswap",
    "cphase",
    "cphase_trajectory",
    "cphase_unitary",
    "cr_effective_params",
    "cr_hamiltonian",
    "cz_phi",
    "decompose_zxzxz",
    "dressed_levels",
    "gate_fidelity",
    "hadamard",
    "iswap_chevron",
    "iswap_phase_correction",
    "iswap_unitary",
    "operator_distance",
    "phase_gate",
    "phased_x_gate",
    "rotation_error_angle",
    "run_circuit",
    "s_gate",
    "schedule_sequence",
    "simulate_cphase",
    "simulate_cr_rabi",
    "simulate_iswap",
    "su2_gate",
    "synthesize_identity",
    "t_gate",
    "two_excitation_hamiltonian",
    "uzz",
    "virtual_z_compile",
    "x_gate",
    "y_gate",
    "z_gate",
    "zeta",
    "zx_unitary",
]
