"""Registry mapping experiment names to their runner classes."""

from typing import Dict, List, Type, TypeVar

from ..config.settings import ExperimentName
from ..core.base_experiment import BaseExperiment
from ..core.errors import ConfigError, make_context

E = TypeVar("E", bound=Type[BaseExperiment])

_REGISTRY: Dict[str, Type[BaseExperiment]] = {}


def register(cls: E) -> E:
    """Class decorator adding a runner under its ``name``."""
    ExperimentName(cls.name)
    _REGISTRY[cls.name] = cls
    return cls


def get_experiment(name: str) -> Type[BaseExperiment]:
    """Runner class for ``name``.

    Raises:
        ConfigError: no runner registered under ``name``
    """
    key = name.value if isinstance(name, ExperimentName) else str(name)
    try:
        return _REGISTRY[key]
    except KeyError:
        raise ConfigError(
            f"no runner for experiment {key!r}",
            field_errors={"experiment": [f"unknown experiment {key!r}"]},
            context=make_context(__name__, "get_experiment", experiment=key),
        ) from None


def list_experiments() -> List[Type[BaseExperiment]]:
    """Registered runners in declaration order of ExperimentName."""
    order = [e.value for e in ExperimentName]
    return sorted(_REGISTRY.values(), key=lambda cls: order.index(cls.name))
