"""Drive and flux waveforms, schedules and Schrödinger evolution."""

from .drive import (
    DrivePulse,
    build_drive_hamiltonian_multilevel,
    calibrate_amplitude,
    complex_envelope,
    drag_waveform,
    drive_hamiltonian_source,
    rabi_angle,
    rwa_drive_hamiltonian,
    rwa_drive_source,
)
from .envelopes import Envelope, EnvelopeKind, cosine, flattop, gaussian, sampled
from .evolution import (
    EvolutionResult,
    evolve,
    magnus_step,
    to_rotating_frame,
    uniform_grid,
)
from .flux import FluxTrajectory
from .schedule import ChannelKind, PulseSchedule, ScheduledPulse

__all__ = [
    "ChannelKind",
    "DrivePulse",
    "Envelope",
    "EnvelopeKind",
    "EvolutionResult",
    "FluxTrajectory",
    "PulseSchedule",
    "ScheduledPulse",
    "build_drive_hamiltonian_multilevel",
    "calibrate_amplitude",
    "complex_envelope",
    "cosine",
    "drag_waveform",
    "drive_hamiltonian_source",
    "evolve",
    "flattop",
    "gaussian",
    "magnus_step",
    "rabi_angle",
    "rwa_drive_hamiltonian",
    "rwa_drive_source",
    "sampled",
    "to_rotating_frame",
    "uniform_grid",
]
