"""Pulse-level simulator of small superconducting quantum processors.

Subpackages:
    device: circuit Hamiltonians, spectra, couplings and dispersive parameters
    pulse: envelopes, drive Hamiltonians, Schrödinger evolution, schedules
    gates: ideal gates, virtual-Z compilation, two-qubit gate simulations
    noise: noise spectra, decoherence laws, filter functions, experiments
    readout: resonator response, demodulation, amplifiers, shot statistics
    cli: configuration-driven experiment runner
"""

__version__ = "0.1.0"
