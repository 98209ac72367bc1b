"""
Tests for the experiments module.

This module contains unit and integration tests for the experiment
registry, parameter diagnostics and the configured runs end to end.
"""

import json
import math

import numpy as np
import pandas as pd
import pytest

from qpu_pulse_sim.config import (
    ExperimentName,
    NoiseQuadratureConfig,
    NumericsConfig,
    SystemConfig,
    parse_experiment_config,
)
from qpu_pulse_sim.core.base_experiment import BaseExperiment
from qpu_pulse_sim.core.errors import ConfigError, NumericError, make_context
from qpu_pulse_sim.experiments import (
    build_experiment,
    get_experiment,
    list_experiments,
    run_experiment,
    validate_config,
    validate_data,
)
from qpu_pulse_sim.experiments import noise_experiments, pulse_experiments
from qpu_pulse_sim.experiments.noise_experiments import T1Experiment
from qpu_pulse_sim.readout import separation_error
from qpu_pulse_sim.storage import MANIFEST_NAME, RunManifest


@pytest.fixture
def make_config(device_data, tmp_path):
    """Build an ExperimentConfig writing below tmp_path"""

    def make(experiment, parameters=None, seed=1, output="out", device=None):
        return parse_experiment_config(
            {
                "device": device if device is not None else device_data,
                "experiment": experiment,
                "parameters": parameters or {},
                "seed": seed,
                "output": str(tmp_path / output),
            }
        )

    return make


class TestRegistry:
    """Test the name-to-runner registry"""

    def test_every_experiment_has_a_runner(self):
        names = [runner.name for runner in list_experiments()]
        assert names == [e.value for e in ExperimentName]

    def test_lookup(self):
        assert get_experiment("t1") is T1Experiment
        assert get_experiment(ExperimentName.T1) is T1Experiment
        with pytest.raises(ConfigError) as exc:
            get_experiment("tomography")
        assert "experiment" in exc.value.field_errors

    def test_runners_describe_themselves(self):
        for runner in list_experiments():
            assert issubclass(runner, BaseExperiment)
            assert runner.description


class TestDiagnostics:
    """Test validation before any physics is computed"""

    def test_valid_config(self, make_config):
        assert validate_config(make_config("t1", {"t_max_us": 400.0})) == []

    def test_missing_coupling_for_iswap(self, make_config, device_data):
        device_data["couplings"] = []
        diagnostics = validate_config(make_config("iswap-chevron", device=device_data))
        assert diagnostics == ["parameters.g_MHz: required for iswap-chevron"]

    def test_coupling_supplies_g(self, make_config):
        experiment = build_experiment(make_config("iswap-chevron"))
        assert experiment.fparam("g_MHz") == 20.0
        assert experiment.diagnostics() == []

    def test_drive_capacitance_supplies_coupling(self, make_config, device_data):
        device_data["qubits"][0]["drive_capacitance_fF"] = 0.05
        experiment = build_experiment(make_config("rabi", {"duration_ns": 40.0}, device=device_data))
        expected = experiment.device.qubit().drive_coupling()
        assert expected is not None and expected > 1.0
        assert experiment.fparam("drive_coupling_rad_per_ns_V") == pytest.approx(expected)
        assert experiment.diagnostics() == []
        explicit = build_experiment(
            make_config("rabi", {"duration_ns": 40.0, "drive_coupling_rad_per_ns_V": 2.0}, device=device_data)
        )
        assert explicit.fparam("drive_coupling_rad_per_ns_V") == 2.0

    def test_unknown_parameter(self, make_config):
        diagnostics = validate_config(make_config("t1", {"t_max_us": 400.0, "tmax": 1}))
        assert diagnostics == ["parameters.tmax: unknown parameter for t1"]

    def test_device_level_diagnostic(self, device_data):
        device_data["qubits"][0]["d"] = 1.2
        diagnostics = validate_data({"device": device_data, "experiment": "spectrum"})
        assert len(diagnostics) == 1
        assert diagnostics[0].startswith("device.qubits.0.d: ")

    def test_check_failures_are_reported(self, make_config):
        diagnostics = validate_config(make_config("t1", {"t_max_us": -1.0}))
        assert diagnostics == ["parameters.t_max_us: must be > 0 with at least 4 points"]

    def test_readout_needs_exactly_one_amplitude(self, make_config):
        diagnostics = validate_config(make_config("readout-histogram"))
        assert diagnostics and diagnostics[0].startswith("parameters.amplitude_V")

    def test_unknown_readout_method(self, make_config):
        diagnostics = validate_config(make_config("readout-histogram", {"snr_target": 2.0, "method": "sampled"}))
        assert diagnostics == ["parameters.method: must be one of ['analytic', 'chain']"]

    def test_readout_needs_a_resonator(self, make_config, device_data):
        device_data["resonators"] = []
        diagnostics = validate_config(make_config("readout-histogram", {"snr_target": 2.0}, device=device_data))
        assert diagnostics == ["device.resonators: required for readout-histogram"]

    def test_unknown_cphase_strategy(self, make_config):
        diagnostics = validate_config(make_config("cphase-cal", {"strategy": "square"}))
        assert diagnostics == ["parameters.strategy: must be one of ['raised_cosine', 'slepian']"]

    def test_run_refuses_invalid_config(self, make_config, tmp_path):
        with pytest.raises(ConfigError) as exc:
            run_experiment(make_config("cpmg", {"t_max_us": 100.0}))
        assert exc.value.field_errors == {"parameters.n_pulses": ["required for cpmg"]}
        assert not (tmp_path / "out").exists()


@pytest.mark.integration
class TestRuns:
    """Test configured runs end to end"""

    def test_spectrum_peaks_at_zero_flux(self, make_config, tmp_path):
        manifest = run_experiment(make_config("spectrum", {"points": 21, "charge_dispersion": True}))
        frame = pd.read_csv(tmp_path / "out" / "spectrum.csv")
        assert list(frame.columns) == ["phi_e", "omega01_GHz", "omega12_GHz", "alpha_GHz"]
        assert frame.loc[frame["omega01_GHz"].idxmax(), "phi_e"] == pytest.approx(0.0, abs=1e-12)
        assert manifest.report["phi_e_at_max_rad"] == pytest.approx(0.0, abs=1e-12)
        assert manifest.report["alpha_at_max_GHz"] < 0
        assert manifest.report["charge_dispersion_MHz"] >= 0

    def test_manifest(self, make_config, tmp_path):
        config = make_config("t1", {"t_max_us": 400.0, "points": 41, "shots": 1000})
        manifest = run_experiment(config)
        out = tmp_path / "out"
        assert sorted(p.name for p in out.iterdir()) == sorted(["t1.csv", "report.json", MANIFEST_NAME])
        stored = RunManifest.read(out / MANIFEST_NAME)
        assert stored.config_hash == config.config_hash()
        assert stored.files == ["t1.csv", "report.json"]
        assert stored.seed == 1
        assert json.loads((out / "report.json").read_text())["qubit"] == "q0"

    def test_t1_recovers_truth(self, make_config):
        report = run_experiment(make_config("t1", {"t_max_us": 400.0})).report
        assert report["T1_us"] == pytest.approx(85.0, rel=0.05)
        assert report["truth"]["T1_us"] == pytest.approx(85.0)

    def test_ramsey_recovers_t2(self, make_config):
        report = run_experiment(make_config("ramsey", {"t_max_us": 400.0})).report
        assert report["T2_us"] == pytest.approx(95.0, rel=0.05)

    def test_hahn_recovers_echo_t2(self, make_config):
        report = run_experiment(make_config("hahn", {"t_max_us": 480.0})).report
        assert report["T2_us"] == pytest.approx(120.0, rel=0.05)

    def test_ramsey_gaussian_residual(self, make_config, device_data):
        qubit = device_data["qubits"][0]
        del qubit["T2_us"], qubit["T2E_us"]
        qubit["T_phi_G_us"] = 98.0
        config = make_config("ramsey", {"t_max_us": 250.0}, device=device_data)
        report = run_experiment(config).report
        assert report["T_phi_G_us"] == pytest.approx(98.0, rel=0.05)
        assert report["residual_fit"]["model"] == "gaussian_exponential"

    def test_cpmg(self, make_config):
        report = run_experiment(make_config("cpmg", {"t_max_us": 480.0, "n_pulses": 4})).report
        assert report["T2_us"] == pytest.approx(120.0, rel=0.05)

    def test_rabi_pi_pulse(self, make_config):
        parameters = {
            "omega_q_GHz": 4.0,
            "alpha_MHz": -200.0,
            "duration_ns": 40.0,
            "drive_coupling_rad_per_ns_V": 1.0,
            "points": 9,
        }
        report = run_experiment(make_config("rabi", parameters)).report
        assert report["pi_P1"] > 0.98
        assert report["pi_leakage"] < 0.02

    def test_drag_scan_suppresses_leakage(self, make_config, tmp_path):
        parameters = {"omega_q_GHz": 4.0, "alpha_MHz": -200.0, "duration_ns": 12.0, "lambdas": [0.0, 1.0]}
        report = run_experiment(make_config("drag-scan", parameters)).report
        assert report["best_lambda"] == 1.0
        assert report["leakage_suppression"] >= 5.0
        frame = pd.read_csv(tmp_path / "out" / "drag_scan.csv")
        assert len(frame) == 2

    def test_cross_resonance_rates(self, make_config):
        parameters = {
            "g_MHz": 5.0,
            "drive_MHz": 50.0 / (2 * math.pi),
            "delta12_MHz": 150.0,
            "alpha1_MHz": -330.0,
            "alpha2_MHz": -330.0,
            "points": 801,
        }
        report = run_experiment(make_config("cr-scan", parameters)).report
        np.testing.assert_allclose(report["rates_rad_per_ns"], report["predicted_rates_rad_per_ns"], rtol=0.05)

    @pytest.mark.slow
    def test_iswap_chevron(self, make_config, tmp_path):
        parameters = {"tunable": "q0", "fixed": "q1", "flux_points": 5, "tau_points": 11}
        report = run_experiment(make_config("iswap-chevron", parameters)).report
        g = 2 * math.pi * 0.02
        assert report["swap_period_ns"] == pytest.approx(math.pi / g, rel=0.01)
        assert report["iswap_fidelity"] > 1 - 1e-4
        chevron = pd.read_csv(tmp_path / "out" / "chevron.csv")
        assert len(chevron) == 55

    @pytest.mark.slow
    def test_cphase_calibration(self, make_config):
        report = run_experiment(make_config("cphase-cal")).report
        assert abs(report["conditional_phase_rad"]) == pytest.approx(math.pi, abs=0.01)
        assert report["leakage"] < 0.01

    @pytest.mark.slow
    def test_cphase_calibration_slepian(self, make_config):
        report = run_experiment(make_config("cphase-cal", {"strategy": "slepian"})).report
        assert report["strategy"] == "slepian"
        assert abs(report["conditional_phase_rad"]) == pytest.approx(math.pi, abs=0.01)
        assert report["leakage"] < 0.01

    def test_readout_histogram_through_the_chain(self, make_config, tmp_path):
        # 20 samples/ns resolves the 7 GHz carrier
        parameters = {"snr_target": 3.0, "n_shots": 200, "fs_per_ns": 20.0, "method": "chain"}
        report = run_experiment(make_config("readout-histogram", parameters)).report
        assert report["method"] == "chain"
        assert report["snr"] == pytest.approx(3.0, rel=0.2)
        assert report["lowpass_gain"] == pytest.approx(1.0, abs=1e-3)
        assert len(pd.read_csv(tmp_path / "out" / "shots.csv")) == 400

    def test_readout_histogram_snr_target(self, make_config, tmp_path):
        parameters = {"snr_target": 2.0, "n_shots": 20000, "in_flight_decay": True}
        report = run_experiment(make_config("readout-histogram", parameters)).report
        assert report["expected_snr"] == pytest.approx(2.0)
        assert report["expected_epsilon_sep"] == pytest.approx(0.0786, abs=1e-4)
        assert report["assignment_error"] == pytest.approx(separation_error(2.0), abs=0.006)
        budget = report["error_budget"]
        assert budget["error_1"] == pytest.approx(budget["predicted"], rel=0.1)
        shots = pd.read_csv(tmp_path / "out" / "shots.csv")
        assert list(shots.columns) == ["shot", "I", "Q", "state_prepared", "state_assigned"]
        assert len(shots) == 40000

    def test_purcell_forms_agree(self, make_config, tmp_path):
        report = run_experiment(make_config("purcell", {"points": 11, "Q_F": 30.0})).report
        assert report["g_MHz"] == pytest.approx(50.0)
        assert report["max_form_deviation"] < 0.01
        frame = pd.read_csv(tmp_path / "out" / "purcell.csv")
        assert (frame["gamma_filtered_per_us"] < frame["gamma_dispersive_per_us"]).all()

    def test_paramp_half_photon(self, make_config):
        report = run_experiment(make_config("paramp", {"gains_dB": [10.0, 20.0]})).report
        assert report["added_noise_at_max_gain"] == pytest.approx(0.25, rel=0.05)
        assert report["T_sys_K"] == pytest.approx(0.15 + 2.0 / 100.0)

    def test_phase_sensitive_paramp(self, make_config, tmp_path):
        parameters = {"gains_dB": [20.0], "mode": "phase_sensitive", "n_samples": 20000}
        report = run_experiment(make_config("paramp", parameters)).report
        assert report["quadrature_gain_product"] == pytest.approx(1.0, abs=1e-9)
        frame = pd.read_csv(tmp_path / "out" / "paramp.csv")
        assert frame["var_I"].iloc[0] == pytest.approx(frame["expected_var_I"].iloc[0], rel=0.05)


class TestNumericsSettings:
    """Test that the environment's numerics reach the runners"""

    def test_truncation_follows_system(self, make_config):
        system = SystemConfig(
            numerics=NumericsConfig(charge_cutoff=12, phase_grid_points=4001, fluxonium_levels=40, convergence_rtol=1e-4)
        )
        experiment = build_experiment(make_config("t1", {"t_max_us": 400.0}), system=system)
        assert experiment.truncation() == {"cutoff": 12, "points": 4001, "levels": 40, "rtol": 1e-4}

    def test_default_system_is_development(self, make_config):
        experiment = build_experiment(make_config("t1", {"t_max_us": 400.0}))
        assert experiment.system.env == "development"
        assert experiment.numerics == NumericsConfig()

    def test_evolution_method_reaches_integrator(self, make_config, monkeypatch):
        methods = []
        original = pulse_experiments.evolve

        def recording(*args, **kwargs):
            methods.append(kwargs["method"])
            return original(*args, **kwargs)

        monkeypatch.setattr(pulse_experiments, "evolve", recording)
        parameters = {
            "omega_q_GHz": 4.0,
            "alpha_MHz": -200.0,
            "duration_ns": 40.0,
            "drive_coupling_rad_per_ns_V": 1.0,
            "points": 3,
        }
        system = SystemConfig(numerics=NumericsConfig(evolution_method="expm"))
        report = run_experiment(make_config("rabi", parameters), system=system).report
        assert methods and set(methods) == {"expm"}
        assert report["pi_P1"] > 0.98

    def test_quadrature_reaches_decay_simulation(self, make_config, monkeypatch):
        seen = []
        original = noise_experiments.simulate_decay_experiment

        def recording(*args, **kwargs):
            seen.append(kwargs["quadrature"])
            return original(*args, **kwargs)

        monkeypatch.setattr(noise_experiments, "simulate_decay_experiment", recording)
        quadrature = NoiseQuadratureConfig(wall_time_s=10.0, uv_factor=50.0)
        run_experiment(make_config("t1", {"t_max_us": 200.0, "points": 11}), system=SystemConfig(noise_quadrature=quadrature))
        assert seen == [quadrature]

    def test_invalid_method_rejected(self):
        with pytest.raises(ValueError):
            NumericsConfig(evolution_method="euler")


@pytest.mark.integration
class TestReproducibility:
    """Test seeding, threading and failure behaviour"""

    def test_same_seed_same_bytes(self, make_config, tmp_path):
        parameters = {"snr_target": 2.0, "n_shots": 500}
        run_experiment(make_config("readout-histogram", parameters, output="a"))
        run_experiment(make_config("readout-histogram", parameters, output="b"))
        for name in ("shots.csv", "histogram.csv", "report.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_seed_changes_shots(self, make_config, tmp_path):
        parameters = {"t_max_us": 200.0, "points": 11, "shots": 100}
        run_experiment(make_config("t1", parameters, seed=1, output="a"))
        run_experiment(make_config("t1", parameters, seed=2, output="b"))
        assert (tmp_path / "a" / "t1.csv").read_bytes() != (tmp_path / "b" / "t1.csv").read_bytes()

    def test_threads_do_not_change_results(self, make_config, tmp_path):
        parameters = {"gains_dB": [3.0, 6.0, 9.0], "n_samples": 1000}
        run_experiment(make_config("paramp", parameters, output="a"))
        run_experiment(make_config("paramp", parameters, output="b"), threads=3)
        assert (tmp_path / "a" / "paramp.csv").read_bytes() == (tmp_path / "b" / "paramp.csv").read_bytes()

    def test_failure_leaves_no_data(self, make_config, tmp_path, monkeypatch):
        def failing(self, store, seeds):
            store.write_json("partial.json", {"x": 1})
            raise NumericError("integration diverged", context=make_context(__name__, "failing"))

        monkeypatch.setattr(T1Experiment, "execute", failing)
        with pytest.raises(NumericError):
            run_experiment(make_config("t1", {"t_max_us": 100.0}))
        assert list((tmp_path / "out").iterdir()) == []
