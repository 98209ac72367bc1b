"""Base class for configuration-driven experiments."""

import logging
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from typing import TYPE_CHECKING, Any, Callable, ClassVar, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from .errors import ConfigError, SimulationError, make_context

if TYPE_CHECKING:
    from ..config.config import NumericsConfig, SystemConfig
    from ..config.settings import ExperimentConfig
    from ..storage.result_store import ResultStore

T = TypeVar("T")
R = TypeVar("R")

_MISSING = object()


class BaseExperiment(ABC):
    """One experiment kind bound to a validated configuration.

    Subclasses declare their parameter keys: ``required`` must be present
    in ``parameters`` (or come from the device through ``device_default``),
    ``defaults`` lists the optional ones. ``execute`` writes the data files
    through a ResultStore and returns the JSON report.
    """

    name: ClassVar[str] = ""
    description: ClassVar[str] = ""
    required: ClassVar[Tuple[str, ...]] = ()
    defaults: ClassVar[Dict[str, Any]] = {}

    def __init__(
        self, config: "ExperimentConfig", threads: int = 1, system: Optional["SystemConfig"] = None
    ) -> None:
        # config imports the device models, which import this package
        from ..config.config import get_config

        self.config = config
        self.device = config.device
        self.threads = max(1, int(threads))
        self.system = system or get_config()
        self.logger = logging.getLogger(self.__class__.__name__)

    @property
    def numerics(self) -> "NumericsConfig":
        """Truncation and integrator settings of the selected environment."""
        return self.system.numerics

    def truncation(self) -> Dict[str, Any]:
        """Keyword truncation for ``build_hamiltonian`` from the numerics settings."""
        numerics = self.numerics
        return {
            "cutoff": numerics.charge_cutoff,
            "points": numerics.phase_grid_points,
            "levels": numerics.fluxonium_levels,
            "rtol": numerics.convergence_rtol,
        }

    def device_default(self, key: str) -> Optional[Any]:
        """Value of ``key`` derived from the device description, if any."""
        return None

    def _lookup(self, key: str) -> Any:
        if key in self.config.parameters:
            return self.config.parameters[key]
        derived = self.device_default(key)
        if derived is not None:
            return derived
        return self.defaults.get(key, _MISSING)

    def param(self, key: str) -> Any:
        """Parameter value from the config, the device or the declared default.

        Raises:
            ConfigError: the key is required and cannot be resolved
        """
        value = self._lookup(key)
        if value is _MISSING:
            raise ConfigError(
                f"parameters.{key} is required for {self.name}",
                field_errors={f"parameters.{key}": [f"required for {self.name}"]},
                context=make_context(__name__, "BaseExperiment.param", experiment=self.name),
            )
        return value

    def fparam(self, key: str) -> float:
        return float(self.param(key))

    def iparam(self, key: str) -> int:
        return int(self.param(key))

    def optional(self, key: str) -> Optional[Any]:
        value = self._lookup(key)
        return None if value is _MISSING else value

    def check(self) -> None:
        """Build the domain objects the run needs without computing physics.

        Raises:
            SimulationError: whenever the run would fail a precondition
        """

    def diagnostics(self) -> List[str]:
        """Precondition failures as ``field: message`` strings; empty when runnable."""
        problems: List[str] = []
        known = set(self.required) | set(self.defaults)
        for key in self.required:
            if self._lookup(key) is _MISSING:
                problems.append(f"parameters.{key}: required for {self.name}")
        for key in sorted(set(self.config.parameters) - known):
            problems.append(f"parameters.{key}: unknown parameter for {self.name}")
        if problems:
            return problems
        try:
            self.check()
        except SimulationError as e:
            field_errors = getattr(e, "field_errors", None) or {}
            if field_errors:
                for path, messages in field_errors.items():
                    problems.extend(f"{path}: {m}" for m in messages)
            else:
                problems.append(f"{e.code.value}: {e.message}")
        except (TypeError, ValueError) as e:
            problems.append(f"parameters: {e}")
        return problems

    def map(self, fn: Callable[[T], R], items: Sequence[T]) -> List[R]:
        """Apply ``fn`` to every item in order, on a thread pool when threads > 1."""
        if self.threads > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                return list(pool.map(fn, items))
        return [fn(item) for item in items]

    @abstractmethod
    def execute(self, store: "ResultStore", seeds: np.random.SeedSequence) -> Dict[str, Any]:
        """Compute, write data files into ``store`` and return the report.

        Every stochastic consumer draws its generator from ``seeds.spawn``
        in a fixed order.
        """
