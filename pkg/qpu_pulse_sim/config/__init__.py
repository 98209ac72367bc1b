"""Configuration package for the simulator.

This package provides type-safe configuration management including:
- Application settings and numerical defaults
- Logging configuration
- Device descriptions and experiment requests
"""

from .config import LogLevel, NoiseQuadratureConfig, NumericsConfig, SystemConfig, get_config
from .logging_config import setup_logging, setup_logging_from_yaml
from .settings import (
    DeviceSpec,
    ExperimentConfig,
    ExperimentName,
    load_experiment_config,
    parse_experiment_config,
)

__all__ = [
    "DeviceSpec",
    "ExperimentConfig",
    "ExperimentName",
    "LogLevel",
    "NoiseQuadratureConfig",
    "NumericsConfig",
    "SystemConfig",
    "get_config",
    "load_experiment_config",
    "parse_experiment_config",
    "setup_logging",
    "setup_logging_from_yaml",
]
