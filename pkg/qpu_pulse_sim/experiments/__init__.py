"""Configuration-driven experiment runners.

Importing this package registers every runner with the registry.
"""

from . import (  # noqa: F401
    device_experiments,
    gate_experiments,
    noise_experiments,
    pulse_experiments,
    readout_experiments,
)
from .registry import get_experiment, list_experiments, register
from .runner import build_experiment, run_experiment, validate_config, validate_data

__all__ = [
    "build_experiment",
    "get_experiment",
    "list_experiments",
    "register",
    "run_experiment",
    "validate_config",
    "validate_data",
]
