"""Click command group: run, validate and list-experiments."""

from .main import cli

__all__ = ["cli"]
