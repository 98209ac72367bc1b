"""Shared building blocks: errors, units, operators and experiment base class."""

from .base_experiment import BaseExperiment
from .errors import (
    CompileError,
    ConfigError,
    ErrorCode,
    ErrorContext,
    ErrorHandler,
    FitError,
    NumericError,
    ParameterError,
    RegimeError,
    SimulationError,
    StatisticsError,
    error_handler,
    make_context,
)
from .operators import Basis, HermitianOperator, is_hermitian

__all__ = [
    "BaseExperiment",
    "Basis",
    "CompileError",
    "ConfigError",
    "ErrorCode",
    "ErrorContext",
    "ErrorHandler",
    "FitError",
    "HermitianOperator",
    "NumericError",
    "ParameterError",
    "RegimeError",
    "SimulationError",
    "StatisticsError",
    "error_handler",
    "is_hermitian",
    "make_context",
]
