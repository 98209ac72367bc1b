"""Validate and execute configured experiments."""

import logging
import time
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

import numpy as np

from .. import __version__
from ..config.config import SystemConfig
from ..config.settings import ExperimentConfig, parse_experiment_config
from ..core.base_experiment import BaseExperiment
from ..core.errors import ConfigError, make_context
from ..storage.result_store import ResultStore, RunManifest
from .registry import get_experiment

logger = logging.getLogger(__name__)

REPORT_NAME = "report.json"


def build_experiment(
    config: ExperimentConfig, threads: int = 1, system: Optional[SystemConfig] = None
) -> BaseExperiment:
    """Runner instance for ``config.experiment`` under the ``system`` settings."""
    return get_experiment(config.experiment)(config, threads=threads, system=system)


def validate_config(config: ExperimentConfig, system: Optional[SystemConfig] = None) -> List[str]:
    """Diagnostics of a parsed configuration as ``field: message`` strings."""
    try:
        experiment = build_experiment(config, system=system)
    except ConfigError as e:
        return [f"{path}: {m}" for path, messages in e.field_errors.items() for m in messages]
    return experiment.diagnostics()


def validate_data(data: Dict[str, Any], system: Optional[SystemConfig] = None) -> List[str]:
    """Diagnostics of a raw configuration mapping, schema errors included."""
    try:
        config = parse_experiment_config(data)
    except ConfigError as e:
        return [f"{path}: {m}" for path, messages in e.field_errors.items() for m in messages]
    return validate_config(config, system)


def run_experiment(
    config: ExperimentConfig, threads: int = 1, system: Optional[SystemConfig] = None
) -> RunManifest:
    """Run one experiment and write its data, report and manifest.

    Data files and the report are committed together; a failed run leaves
    no partial data in ``config.output``.

    Raises:
        ConfigError: the configuration fails validation
        SimulationError: the run itself fails
    """
    experiment = build_experiment(config, threads=threads, system=system)
    problems = experiment.diagnostics()
    if problems:
        errors: Dict[str, List[str]] = {}
        for problem in problems:
            path, _, message = problem.partition(": ")
            errors.setdefault(path, []).append(message)
        raise ConfigError(
            f"{config.experiment.value} configuration has {len(problems)} problem(s)",
            field_errors=errors,
            context=make_context(__name__, "run_experiment", experiment=config.experiment.value),
        )

    config_hash = config.config_hash()
    started_at = datetime.now(timezone.utc)
    start = time.perf_counter()
    logger.info(f"Running {config.experiment.value} (seed {config.seed}, config {config_hash[:12]})")

    with ResultStore(config.output) as store:
        report = experiment.execute(store, np.random.SeedSequence(config.seed))
        store.write_json(REPORT_NAME, report)
        files = list(store.files)

    manifest = RunManifest(
        experiment=config.experiment.value,
        config_hash=config_hash,
        version=__version__,
        seed=config.seed,
        started_at=started_at.isoformat(),
        wall_time_s=time.perf_counter() - start,
        files=files,
        report=report,
    )
    manifest.write(config.output)
    logger.info(f"{config.experiment.value} finished in {manifest.wall_time_s:.2f} s, wrote {len(files)} files")
    return manifest
