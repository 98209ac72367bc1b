"""Typed error hierarchy and centralized error handling for the simulator."""

import logging
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Any, Deque, Dict, List, Optional

MAX_TRACKED_ERRORS = 1000


class ErrorCode(str, Enum):
    """Error kinds raised by the simulator modules."""

    INVALID_PARAMS = "invalid-params"
    INVALID_TRUNCATION = "invalid-truncation"
    INVALID_REGIME = "invalid-regime"
    INVALID_OPERATOR = "invalid-operator"
    INVALID_GRID = "invalid-grid"
    INVALID_RATES = "invalid-rates"
    SINGULARITY = "singularity"
    NUMERIC_FAILURE = "numeric-failure"
    QUADRATURE_FAILURE = "quadrature-failure"
    FIT_FAILURE = "fit-failure"
    STATISTICS_ERROR = "statistics-error"
    COMPILE_ERROR = "compile-error"
    CONFIG_ERROR = "config-error"
    INSUFFICIENT_WINDOW = "insufficient-window"


@dataclass
class ErrorContext:
    """Context information for error tracking."""

    timestamp: datetime = field(default_factory=lambda: datetime.now(timezone.utc))
    module: Optional[str] = None
    operation: Optional[str] = None
    additional_data: Dict[str, Any] = field(default_factory=dict)


def make_context(module: str, operation: str, **data: Any) -> ErrorContext:
    """Build an ErrorContext for ``operation`` in ``module``."""
    return ErrorContext(module=module, operation=operation, additional_data=data)


@dataclass(eq=False)
class SimulationError(Exception):
    """Base class for simulator errors."""

    message: str
    code: ErrorCode = ErrorCode.NUMERIC_FAILURE
    context: ErrorContext = field(default_factory=ErrorContext)
    severity: str = "error"  # error, warning, critical

    def __post_init__(self) -> None:
        super().__init__(f"{self.code.value}: {self.message}")

    def to_dict(self) -> Dict[str, Any]:
        """Serializable summary for run reports."""
        return {
            "code": self.code.value,
            "message": self.message,
            "severity": self.severity,
            "module": self.context.module,
            "operation": self.context.operation,
            "additional_data": {
                k: str(v) for k, v in self.context.additional_data.items()
            },
        }


@dataclass(eq=False)
class ParameterError(SimulationError):
    """Invalid physical parameters, truncations or grids."""

    code: ErrorCode = ErrorCode.INVALID_PARAMS
    field_errors: Dict[str, List[str]] = field(default_factory=dict)


@dataclass(eq=False)
class RegimeError(SimulationError):
    """Inputs at or near a pole of a perturbative formula."""

    code: ErrorCode = ErrorCode.INVALID_REGIME
    pole: Optional[str] = None


@dataclass(eq=False)
class NumericError(SimulationError):
    """Numerical failures: NaNs, non-convergent quadrature, singular inputs."""

    code: ErrorCode = ErrorCode.NUMERIC_FAILURE
    diagnostics: Dict[str, Any] = field(default_factory=dict)


@dataclass(eq=False)
class FitError(SimulationError):
    """Curve fit that did not converge."""

    code: ErrorCode = ErrorCode.FIT_FAILURE
    residuals: Optional[Any] = None


@dataclass(eq=False)
class StatisticsError(SimulationError):
    """Degenerate shot statistics."""

    code: ErrorCode = ErrorCode.STATISTICS_ERROR


@dataclass(eq=False)
class CompileError(SimulationError):
    """Gate sequence the virtual-Z compiler cannot handle."""

    code: ErrorCode = ErrorCode.COMPILE_ERROR
    gate_name: Optional[str] = None


@dataclass(eq=False)
class ConfigError(SimulationError):
    """Experiment configuration failing validation."""

    code: ErrorCode = ErrorCode.CONFIG_ERROR
    field_errors: Dict[str, List[str]] = field(default_factory=dict)


class ErrorHandler:
    """Centralized error handling system."""

    def __init__(self, max_errors: int = MAX_TRACKED_ERRORS) -> None:
        """Initialize error handler keeping at most ``max_errors`` recent errors."""
        self._errors: Deque[SimulationError] = deque(maxlen=max_errors)
        self._error_counts: Dict[str, int] = {}

    def handle_error(
        self, error: SimulationError, raise_exception: bool = False
    ) -> None:
        """Track and log a simulator error, optionally re-raising it."""
        self._errors.append(error)

        error_key = f"{error.code.value}:{error.severity}"
        self._error_counts[error_key] = self._error_counts.get(error_key, 0) + 1

        self._log_error(error)

        if raise_exception:
            raise error

    def get_recent_errors(
        self,
        module: Optional[str] = None,
        severity: Optional[str] = None,
        limit: int = 10,
    ) -> List[SimulationError]:
        """Get recent errors with optional filtering."""
        filtered = list(self._errors)

        if module:
            filtered = [e for e in filtered if e.context.module == module]

        if severity:
            filtered = [e for e in filtered if e.severity == severity]

        return filtered[-limit:]

    def get_error_counts(self) -> Dict[str, int]:
        """Counts keyed by ``code:severity``."""
        return dict(self._error_counts)

    def clear_errors(self) -> None:
        """Clear error history."""
        self._errors.clear()
        self._error_counts.clear()

    def _log_error(self, error: SimulationError) -> None:
        """Log error with appropriate level and context."""
        logger = logging.getLogger("qpu_pulse_sim.errors")

        log_message = (
            f"Error: {error.code.value} - {error.message}\n"
            f"Module: {error.context.module}\n"
            f"Operation: {error.context.operation}\n"
            f"Timestamp: {error.context.timestamp}\n"
            f"Severity: {error.severity}\n"
            f"Additional Data: {error.context.additional_data}"
        )

        if error.severity == "critical":
            logger.critical(log_message)
        elif error.severity == "error":
            logger.error(log_message)
        else:
            logger.warning(log_message)


# Global error handler instance
error_handler = ErrorHandler()
