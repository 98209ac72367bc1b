"""Configuration module for the simulator and its numerical defaults."""

import os
from enum import Enum
from typing import Any, Dict, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator


class LogLevel(str, Enum):
    """Log level enumeration."""

    DEBUG = "DEBUG"
    INFO = "INFO"
    WARNING = "WARNING"
    ERROR = "ERROR"
    CRITICAL = "CRITICAL"


class NumericsConfig(BaseModel):
    """Truncation and integrator defaults shared by the device and pulse modules."""

    charge_cutoff: int = Field(default=30, description="Transmon charge cutoff")
    phase_grid_points: int = Field(
        default=32001, description="Flux-qubit phase grid points over one 2π cell"
    )
    fluxonium_levels: int = Field(
        default=60, description="Fluxonium oscillator basis size"
    )
    convergence_rtol: float = Field(
        default=1e-6, description="Relative ω01 tolerance for truncation checks"
    )
    evolution_method: Literal["rk4", "expm"] = Field(
        default="rk4", description="Default Schrödinger integrator (rk4 or expm)"
    )
    flux_map_points: int = Field(
        default=1001, description="Flux samples for cubic frequency maps"
    )


class NoiseQuadratureConfig(BaseModel):
    """Cutoffs for the dephasing integral over the filtered noise spectrum."""

    wall_time_s: float = Field(
        default=100.0, description="Total experiment wall time setting the IR cutoff"
    )
    uv_factor: float = Field(
        default=100.0, description="UV cutoff in units of 1/τ"
    )


class SystemConfig(BaseModel):
    """System configuration settings."""

    # Basic settings
    app_name: str = Field(default="QPU Pulse Simulator", description="Application name")
    version: str = Field(default="0.1.0", description="Application version")
    env: str = Field(default="development", description="Environment name")

    # Logging
    log_level: LogLevel = Field(default=LogLevel.INFO, description="Logging level")
    log_format: str = Field(
        default="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        description="Log format",
    )

    numerics: NumericsConfig = Field(
        default_factory=NumericsConfig, description="Numerical defaults"
    )
    noise_quadrature: NoiseQuadratureConfig = Field(
        default_factory=NoiseQuadratureConfig,
        description="Dephasing quadrature cutoffs",
    )

    model_config = ConfigDict(extra="allow", protected_namespaces=())

    @model_validator(mode="after")
    def apply_environment_overrides(self) -> "SystemConfig":
        """Apply overrides from QPU_PULSE_SIM_* environment variables.

        Returns:
            Updated SystemConfig instance
        """
        level = os.environ.get("QPU_PULSE_SIM_LOG_LEVEL")
        if level:
            self.log_level = LogLevel(level.upper())
        return self

    def get_value(self, key: str, default: Any = None) -> Any:
        """Get configuration value by key.

        Args:
            key: Configuration key
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        if hasattr(self, key):
            return getattr(self, key)

        return default


def get_config(environment: str = "development") -> SystemConfig:
    """Get system configuration for the specified environment.

    Args:
        environment: Target environment (development, staging, production)

    Returns:
        SystemConfig instance for the specified environment

    Raises:
        ValueError: If environment is invalid
    """
    if environment not in ["development", "staging", "production"]:
        raise ValueError(f"Invalid environment: {environment}")

    config_map: Dict[str, SystemConfig] = {
        "development": SystemConfig(env="development", log_level=LogLevel.DEBUG),
        "staging": SystemConfig(env="staging", log_level=LogLevel.INFO),
        "production": SystemConfig(env="production", log_level=LogLevel.WARNING),
    }

    return config_map[environment]
