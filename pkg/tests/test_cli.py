"""
Tests for the command-line interface.

This module contains tests for the run, validate and list-experiments
commands and their exit codes.
"""

import json

import pandas as pd
import pytest
import yaml
from click.testing import CliRunner

from qpu_pulse_sim.cli import main as cli_main
from qpu_pulse_sim.config import LogLevel, SystemConfig
from qpu_pulse_sim.core.errors import NumericError, error_handler, make_context
from qpu_pulse_sim.experiments.readout_experiments import PurcellExperiment
from qpu_pulse_sim.storage import MANIFEST_NAME


@pytest.fixture(autouse=True)
def quiet_logging(monkeypatch):
    """Keep dictConfig from binding handlers to the runner's captured streams"""
    monkeypatch.setattr(cli_main, "setup_logging", lambda config=None: None)
    monkeypatch.delenv("QPU_PULSE_SIM_ENV", raising=False)
    monkeypatch.delenv("QPU_PULSE_SIM_LOG_CONFIG", raising=False)


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def write_config(tmp_path, device_data):
    """Write a device file and an experiment file referencing it"""
    (tmp_path / "device.yaml").write_text(yaml.safe_dump(device_data))

    def write(experiment, parameters=None, name="config.yaml", **extra):
        data = {
            "device": "device.yaml",
            "experiment": experiment,
            "parameters": parameters or {},
            "output": str(tmp_path / "results"),
            **extra,
        }
        path = tmp_path / name
        path.write_text(yaml.safe_dump(data))
        return path

    return write


class TestRun:
    """Test the run command"""

    def test_success(self, runner, write_config, tmp_path):
        path = write_config("purcell", {"points": 5})
        result = runner.invoke(cli_main.cli, ["run", str(path)])
        assert result.exit_code == 0, result.output
        assert "purcell.csv" in result.output
        assert (tmp_path / "results" / MANIFEST_NAME).exists()

    def test_output_and_seed_flags(self, runner, write_config, tmp_path):
        path = write_config("paramp", {"gains_dB": [10.0], "n_samples": 1000})
        out = tmp_path / "elsewhere"
        result = runner.invoke(cli_main.cli, ["run", str(path), "--output", str(out), "--seed", "42", "--threads", "2"])
        assert result.exit_code == 0, result.output
        manifest = json.loads((out / MANIFEST_NAME).read_text())
        assert manifest["seed"] == 42
        assert not (tmp_path / "results").exists()

    def test_config_error_exit_code(self, runner, write_config, tmp_path):
        path = write_config("cpmg", {"t_max_us": 100.0})
        result = runner.invoke(cli_main.cli, ["run", str(path)])
        assert result.exit_code == 1
        assert "parameters.n_pulses: required for cpmg" in result.output
        assert not (tmp_path / "results").exists()
        assert error_handler.get_error_counts() == {"config-error:error": 1}

    def test_numeric_failure_exit_code(self, runner, write_config, tmp_path, monkeypatch):
        def diverging(self, store, seeds):
            store.write_frame("purcell.csv", pd.DataFrame({"x": [1.0]}))
            raise NumericError("rates diverged", context=make_context(__name__, "diverging"))

        monkeypatch.setattr(PurcellExperiment, "execute", diverging)
        result = runner.invoke(cli_main.cli, ["run", str(write_config("purcell"))])
        assert result.exit_code == 2, result.output
        assert "numeric-failure: rates diverged" in result.output
        assert not (tmp_path / "results" / "purcell.csv").exists()

    def test_missing_file(self, runner, tmp_path):
        result = runner.invoke(cli_main.cli, ["run", str(tmp_path / "nope.yaml")])
        assert result.exit_code != 0


class TestValidate:
    """Test the validate command"""

    def test_valid(self, runner, write_config):
        result = runner.invoke(cli_main.cli, ["validate", str(write_config("t1", {"t_max_us": 400.0}))])
        assert result.exit_code == 0
        assert "OK" in result.output

    def test_missing_g(self, runner, tmp_path, device_data):
        device_data["couplings"] = []
        path = tmp_path / "iswap.yaml"
        path.write_text(yaml.safe_dump({"device": device_data, "experiment": "iswap-chevron"}))
        result = runner.invoke(cli_main.cli, ["validate", str(path)])
        assert result.exit_code == 1
        assert "parameters.g_MHz: required for iswap-chevron" in result.output.splitlines()

    def test_device_asymmetry_out_of_range(self, runner, tmp_path, device_data):
        device_data["qubits"][0]["d"] = -1.5
        path = tmp_path / "spectrum.yaml"
        path.write_text(yaml.safe_dump({"device": device_data, "experiment": "spectrum"}))
        result = runner.invoke(cli_main.cli, ["validate", str(path)])
        assert result.exit_code == 1
        assert any(line.startswith("device.qubits.0.d: ") for line in result.output.splitlines())

    def test_broken_yaml(self, runner, tmp_path):
        path = tmp_path / "broken.yaml"
        path.write_text("device: [unclosed\n")
        result = runner.invoke(cli_main.cli, ["validate", str(path)])
        assert result.exit_code == 1
        assert any(line.startswith("<file>: ") for line in result.output.splitlines())


class TestListExperiments:
    """Test the list-experiments command"""

    def test_lists_all(self, runner):
        result = runner.invoke(cli_main.cli, ["list-experiments"])
        assert result.exit_code == 0
        for name in ("spectrum", "iswap-chevron", "readout-histogram", "paramp"):
            assert name in result.output
        assert "required: g_MHz, drive_MHz" in result.output

    def test_version(self, runner):
        result = runner.invoke(cli_main.cli, ["--version"])
        assert result.exit_code == 0
        assert "0.1.0" in result.output


class TestEnvironment:
    """Test environment resolution and logging setup at startup"""

    def test_unknown_environment(self, runner, write_config, monkeypatch):
        monkeypatch.setenv("QPU_PULSE_SIM_ENV", "qa")
        result = runner.invoke(cli_main.cli, ["validate", str(write_config("t1", {"t_max_us": 400.0}))])
        assert result.exit_code == cli_main.EXIT_CONFIG_ERROR
        assert result.exception is None or isinstance(result.exception, SystemExit)
        assert "QPU_PULSE_SIM_ENV: unknown environment 'qa'" in result.output
        assert error_handler.get_error_counts() == {"config-error:error": 1}

    def test_resolved_config_reaches_runner(self, runner, write_config, monkeypatch):
        seen = {}

        def capture(config, threads=1, system=None):
            seen["system"] = system
            raise NumericError("stop", context=make_context(__name__, "capture"))

        monkeypatch.setenv("QPU_PULSE_SIM_ENV", "production")
        monkeypatch.setattr(cli_main, "run_experiment", capture)
        runner.invoke(cli_main.cli, ["run", str(write_config("purcell"))])
        assert isinstance(seen["system"], SystemConfig)
        assert seen["system"].env == "production"
        assert seen["system"].log_level == LogLevel.WARNING

    def test_logging_yaml_from_environment(self, runner, tmp_path, monkeypatch):
        calls = []
        monkeypatch.setattr(cli_main, "setup_logging_from_yaml", calls.append)
        monkeypatch.setenv("QPU_PULSE_SIM_LOG_CONFIG", str(tmp_path / "logging.yaml"))
        result = runner.invoke(cli_main.cli, ["list-experiments"])
        assert result.exit_code == 0
        assert calls == [tmp_path / "logging.yaml"]

    def test_packaged_logging_yaml(self, runner, monkeypatch):
        calls = []
        monkeypatch.setattr(cli_main, "setup_logging_from_yaml", calls.append)
        monkeypatch.setenv("QPU_PULSE_SIM_LOG_CONFIG", "default")
        runner.invoke(cli_main.cli, ["list-experiments"])
        assert calls == [None]
