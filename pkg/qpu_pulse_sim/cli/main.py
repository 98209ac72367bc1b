"""Command-line interface for running simulator experiments."""

import os
from pathlib import Path
from typing import Optional

import click
from dotenv import load_dotenv

from .. import __version__
from ..config import SystemConfig, get_config, load_experiment_config, setup_logging, setup_logging_from_yaml
from ..config.settings import read_config_data
from ..core.errors import ConfigError, SimulationError, error_handler, make_context
from ..experiments import list_experiments, run_experiment, validate_data
from ..storage.result_store import MANIFEST_NAME

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_NUMERIC_FAILURE = 2


def _echo_field_errors(error: ConfigError) -> None:
    for path, messages in error.field_errors.items():
        for message in messages:
            click.echo(f"  {path}: {message}", err=True)


@click.group()
@click.version_option(version=__version__, prog_name="qpu-sim")
@click.pass_context
def cli(ctx: click.Context) -> None:
    """Pulse-level superconducting qubit simulator."""
    load_dotenv()
    environment = os.environ.get("QPU_PULSE_SIM_ENV", "development")
    try:
        system = get_config(environment)
    except ValueError as e:
        error = ConfigError(
            str(e),
            field_errors={"QPU_PULSE_SIM_ENV": [f"unknown environment {environment!r}"]},
            context=make_context(__name__, "cli", environment=environment),
        )
        error_handler.handle_error(error)
        click.echo(f"Error: {error.message}", err=True)
        _echo_field_errors(error)
        ctx.exit(EXIT_CONFIG_ERROR)

    log_config = os.environ.get("QPU_PULSE_SIM_LOG_CONFIG")
    if log_config:
        setup_logging_from_yaml(None if log_config == "default" else Path(log_config))
    else:
        setup_logging(system)
    ctx.obj = system


@cli.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--output", type=click.Path(file_okay=False, path_type=Path), help="Output directory")
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), help="Override the configured seed")
@click.option("--threads", type=click.IntRange(min=1), default=1, show_default=True, help="Worker threads")
@click.pass_context
def run(
    ctx: click.Context, config: Path, output: Optional[Path], seed: Optional[int], threads: int
) -> None:
    """Run the experiment described by CONFIG."""
    try:
        experiment = load_experiment_config(config, output=output, seed=seed)
        manifest = run_experiment(experiment, threads=threads, system=ctx.find_object(SystemConfig))
    except ConfigError as e:
        error_handler.handle_error(e)
        click.echo(f"Error: {e.message}", err=True)
        _echo_field_errors(e)
        ctx.exit(EXIT_CONFIG_ERROR)
    except SimulationError as e:
        error_handler.handle_error(e)
        click.echo(f"Error: {e.code.value}: {e.message}", err=True)
        ctx.exit(EXIT_NUMERIC_FAILURE)

    click.echo(f"{manifest.experiment}: wrote {len(manifest.files)} file(s) to {experiment.output}")
    for name in manifest.files:
        click.echo(f"  {name}")
    click.echo(f"  {MANIFEST_NAME}")


@cli.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.pass_context
def validate(ctx: click.Context, config: Path) -> None:
    """Check CONFIG without computing anything."""
    try:
        diagnostics = validate_data(read_config_data(config), system=ctx.find_object(SystemConfig))
    except ConfigError as e:
        error_handler.handle_error(e)
        diagnostics = [f"{path}: {m}" for path, messages in e.field_errors.items() for m in messages]

    if not diagnostics:
        click.echo(f"{config}: OK")
        return
    for diagnostic in diagnostics:
        click.echo(diagnostic)
    ctx.exit(EXIT_CONFIG_ERROR)


@cli.command("list-experiments")
def list_experiments_command() -> None:
    """List the available experiments and their required parameters."""
    for runner in list_experiments():
        click.echo(f"{runner.name:<18} {runner.description}")
        if runner.required:
            click.echo(f"{'':<18} required: {', '.join(runner.required)}")


if __name__ == "__main__":
    cli()
