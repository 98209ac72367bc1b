"""Logging configuration module for the simulator."""

import logging
import logging.config
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .config import SystemConfig

DEFAULT_LOGGING_YAML = Path(__file__).with_name("logging_config.yaml")


def build_logging_dict(config: Optional[SystemConfig] = None) -> Dict[str, Any]:
    """Build the dictConfig mapping for a system configuration.

    Args:
        config: Optional system configuration

    Returns:
        Dictionary accepted by logging.config.dictConfig
    """
    if not config:
        config = SystemConfig()
    level = config.log_level.value

    log_config: Dict[str, Any] = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "standard": {
                "format": config.log_format,
            },
        },
        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "formatter": "standard",
                "level": level,
                "stream": "ext://sys.stdout",
            },
        },
        "loggers": {
            "": {
                "handlers": ["console"],
                "level": level,
                "propagate": True,
            },
        },
    }

    # Add file handler if log file is specified
    log_file = os.environ.get("QPU_PULSE_SIM_LOG_FILE")
    if log_file:
        log_dir = Path(log_file).parent
        log_dir.mkdir(parents=True, exist_ok=True)

        log_config["handlers"]["file"] = {
            "class": "logging.handlers.RotatingFileHandler",
            "filename": log_file,
            "formatter": "standard",
            "level": level,
            "maxBytes": 10 * 1024 * 1024,
            "backupCount": 5,
            "encoding": "utf8",
        }
        log_config["loggers"][""]["handlers"].append("file")

    return log_config


def setup_logging(config: Optional[SystemConfig] = None) -> None:
    """Set up logging configuration.

    Args:
        config: Optional system configuration
    """
    logging.config.dictConfig(build_logging_dict(config))


def setup_logging_from_yaml(path: Optional[Path] = None) -> None:
    """Configure logging from a YAML dictConfig file.

    File handlers in the YAML get their directories created first.

    Args:
        path: YAML file, defaults to the packaged logging_config.yaml
    """
    path = path or DEFAULT_LOGGING_YAML
    with open(path, "r") as f:
        log_config = yaml.safe_load(f)

    for handler in log_config.get("handlers", {}).values():
        filename = handler.get("filename")
        if filename:
            Path(filename).parent.mkdir(parents=True, exist_ok=True)

    logging.config.dictConfig(log_config)
