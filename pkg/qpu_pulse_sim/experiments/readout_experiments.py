"""Readout experiments: shot histograms, Purcell sweeps and paramp noise."""

import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..config.settings import ResonatorSpec
from ..core.base_experiment import BaseExperiment
from ..core.errors import ConfigError, ErrorCode, ParameterError, make_context
from ..core.units import TWO_PI, mhz_to_rad_per_ns
from ..readout import (
    PHASOR_METHODS,
    AmplifierChain,
    ParampMode,
    ReadoutSetup,
    added_noise,
    amplitude_for_snr,
    expected_snr,
    output_quadrature_variances,
    paramp_transform,
    purcell_limited_t1,
    purcell_rate,
    purcell_rate_impedance,
    quadrature_gains,
    quantum_efficiency,
    readout_error_budget,
    separation_error,
    shot_frame,
    shot_histogram,
    system_noise_temperature,
)
from ..readout.amplifier import VACUUM_VARIANCE, db_to_linear, vacuum_samples
from ..storage.result_store import ResultStore
from .registry import register

PURCELL_COLUMNS = [
    "delta_MHz",
    "gamma_dispersive_per_us",
    "gamma_impedance_per_us",
    "gamma_filtered_per_us",
    "T1_limit_us",
]
PARAMP_COLUMNS = [
    "gain_dB",
    "var_I",
    "var_Q",
    "expected_var_I",
    "expected_var_Q",
    "added_noise",
    "expected_added_noise",
]


def _missing_section(section: str, experiment: str) -> ConfigError:
    return ConfigError(
        f"{experiment} needs device.{section}",
        field_errors={f"device.{section}": [f"required for {experiment}"]},
        context=make_context(__name__, "readout", experiment=experiment, section=section),
    )


class ResonatorExperiment(BaseExperiment):
    def resonator_spec(self) -> ResonatorSpec:
        if not self.device.resonators:
            raise _missing_section("resonators", self.name)
        return self.device.resonator(self.optional("resonator"))

    def chain(self) -> AmplifierChain:
        if self.device.readout_chain is None or not self.device.readout_chain.stages:
            raise _missing_section("readout_chain", self.name)
        return self.device.readout_chain.chain()


@register
class ReadoutHistogramExperiment(ResonatorExperiment):
    """IQ shot clusters of both qubit states with SNR and assignment error."""

    name = "readout-histogram"
    description = "Heterodyne shot histograms, SNR and assignment error"
    defaults: Dict[str, Any] = {
        "resonator": None,
        "tau_rd_ns": 300.0,
        "tau_s_ns": 500.0,
        "fs_per_ns": 2.0,
        "if_MHz": 50.0,
        "amplitude_V": None,
        "snr_target": None,
        "n_shots": 10000,
        "bins": 64,
        "in_flight_decay": False,
        "method": "analytic",
    }

    def setup(self) -> ReadoutSetup:
        amplitude, target = self.optional("amplitude_V"), self.optional("snr_target")
        if (amplitude is None) == (target is None):
            raise ParameterError(
                "set exactly one of amplitude_V and snr_target",
                field_errors={"parameters.amplitude_V": ["set exactly one of amplitude_V and snr_target"]},
                context=make_context(__name__, "ReadoutHistogramExperiment.setup"),
            )
        base = ReadoutSetup(
            resonator=self.resonator_spec().params(),
            chain=self.chain(),
            amplitude=1.0,
            tau_rd=self.fparam("tau_rd_ns"),
            tau_s=self.fparam("tau_s_ns"),
            fs=self.fparam("fs_per_ns"),
            omega_if=mhz_to_rad_per_ns(self.fparam("if_MHz")),
        )
        if amplitude is not None:
            return base.with_amplitude(float(amplitude))
        return base.with_amplitude(amplitude_for_snr(base, float(target)))

    def decay_T1(self) -> Optional[float]:
        if not bool(self.param("in_flight_decay")):
            return None
        qubit = self.resonator_spec().qubit
        T1 = self.device.qubit(qubit).T1_us
        if T1 is None:
            raise ParameterError(
                "in-flight decay needs T1_us on the measured qubit",
                field_errors={"device.qubits.T1_us": ["required when in_flight_decay is set"]},
                context=make_context(__name__, "ReadoutHistogramExperiment.decay_T1", qubit=qubit),
            )
        return T1

    def method(self) -> str:
        method = str(self.param("method"))
        if method not in PHASOR_METHODS:
            raise ParameterError(
                f"unknown shot method {method!r}",
                field_errors={"parameters.method": [f"must be one of {list(PHASOR_METHODS)}"]},
                context=make_context(__name__, "ReadoutHistogramExperiment.method"),
            )
        return method

    def check(self) -> None:
        self.setup()
        self.decay_T1()
        self.method()

    def execute(self, store: ResultStore, seeds: np.random.SeedSequence) -> Dict[str, Any]:
        shot_seed, decay_seed = seeds.spawn(2)
        setup = self.setup()
        stats, grid = shot_histogram(
            setup,
            self.iparam("n_shots"),
            np.random.default_rng(shot_seed),
            bins=self.iparam("bins"),
            method=self.method(),
        )
        store.write_frame("shots.csv", shot_frame(stats))
        store.write_frame("histogram.csv", grid.to_frame(), index=True)

        snr = expected_snr(setup)
        report: Dict[str, Any] = {
            "method": self.method(),
            "amplitude_V": setup.amplitude,
            "probe_frequency_GHz": setup.probe_frequency / TWO_PI,
            "window_samples": list(setup.window),
            "expected_snr": snr,
            "lowpass_gain": setup.lowpass_gain,
            "expected_epsilon_sep": separation_error(snr) if math.isfinite(snr) else 0.0,
            "T_sys_K": system_noise_temperature(setup.chain),
            **stats.to_dict(),
        }
        T1 = self.decay_T1()
        if T1 is not None:
            budget = readout_error_budget(setup, T1, self.iparam("n_shots"), np.random.default_rng(decay_seed))
            report["error_budget"] = budget.to_dict()
        self.logger.info(
            f"readout: SNR {stats.snr:.3f} (expected {snr:.3f}), assignment error {stats.assignment_error:.4f}"
        )
        return report


@register
class PurcellExperiment(ResonatorExperiment):
    """Purcell rate and T1 limit versus qubit-resonator detuning."""

    name = "purcell"
    description = "Purcell decay versus detuning, dispersive and impedance forms"
    defaults: Dict[str, Any] = {
        "resonator": None,
        "g_MHz": None,
        "Q_F": None,
        "delta_min_MHz": 500.0,
        "delta_max_MHz": 2000.0,
        "points": 61,
    }

    def device_default(self, key: str) -> Optional[Any]:
        if key == "g_MHz" and self.device.resonators:
            try:
                return self.resonator_spec().g_MHz
            except ConfigError:
                return None
        return None

    def g(self) -> float:
        g_MHz = self.optional("g_MHz")
        if g_MHz is None or not float(g_MHz) > 0:
            raise ParameterError(
                "purcell needs g_MHz > 0 in the parameters or on the resonator",
                field_errors={"parameters.g_MHz": ["required, > 0, here or on the resonator"]},
                context=make_context(__name__, "PurcellExperiment.g"),
            )
        return mhz_to_rad_per_ns(float(g_MHz))

    def deltas(self) -> np.ndarray:
        lo, hi, points = self.fparam("delta_min_MHz"), self.fparam("delta_max_MHz"), self.iparam("points")
        if points < 2 or not hi > lo or lo <= 0 <= hi:
            raise ParameterError(
                f"detuning sweep [{lo}, {hi}] MHz must have points >= 2 and exclude zero",
                code=ErrorCode.INVALID_GRID,
                field_errors={"parameters.delta_min_MHz": ["sweep must have >= 2 points and exclude zero"]},
                context=make_context(__name__, "PurcellExperiment.deltas"),
            )
        return np.linspace(lo, hi, points)

    def check(self) -> None:
        self.resonator_spec().params()
        self.g()
        self.deltas()

    def execute(self, store: ResultStore, seeds: np.random.SeedSequence) -> Dict[str, Any]:
        r = self.resonator_spec().params()
        g = self.g()
        Q_F = self.optional("Q_F")
        rows = []
        for delta_MHz in self.deltas():
            delta = mhz_to_rad_per_ns(float(delta_MHz))
            dispersive = purcell_rate(g, delta, r.kappa)
            filtered = dispersive
            if Q_F is not None:
                filtered = purcell_rate(g, delta, r.kappa, omega_q=r.omega_r + delta, omega_r=r.omega_r, Q_F=float(Q_F))
            rows.append(
                {
                    "delta_MHz": float(delta_MHz),
                    "gamma_dispersive_per_us": dispersive * 1e3,
                    "gamma_impedance_per_us": purcell_rate_impedance(g, delta, r.kappa, r.omega_r) * 1e3,
                    "gamma_filtered_per_us": filtered * 1e3,
                    "T1_limit_us": purcell_limited_t1(filtered),
                }
            )
        frame = pd.DataFrame(rows, columns=PURCELL_COLUMNS)
        store.write_frame("purcell.csv", frame)
        deviation = (frame["gamma_impedance_per_us"] / frame["gamma_dispersive_per_us"] - 1.0).abs()
        report = {
            "g_MHz": g / TWO_PI * 1e3,
            "kappa_MHz": r.kappa / TWO_PI * 1e3,
            "Q_F": Q_F,
            "min_T1_limit_us": float(frame["T1_limit_us"].min()),
            "max_form_deviation": float(deviation.max()),
        }
        self.logger.info(f"Purcell: shortest T1 limit {report['min_T1_limit_us']:.4g} μs")
        return report


@register
class ParampExperiment(BaseExperiment):
    """Quadrature variances of vacuum through a parametric amplifier."""

    name = "paramp"
    description = "Paramp quadrature noise versus gain"
    required = ("gains_dB",)
    defaults: Dict[str, Any] = {"mode": None, "phi_rad": 0.0, "n_samples": 100000}

    def mode(self) -> ParampMode:
        mode = self.optional("mode")
        if mode is None:
            chain = self.device.readout_chain
            paramp = chain.paramp if chain is not None else None
            return paramp.mode if paramp is not None else ParampMode.PHASE_INSENSITIVE
        try:
            return ParampMode(mode)
        except ValueError:
            raise ParameterError(
                f"unknown paramp mode {mode!r}",
                field_errors={"parameters.mode": [f"must be one of {[m.value for m in ParampMode]}"]},
                context=make_context(__name__, "ParampExperiment.mode", mode=mode),
            ) from None

    def gains(self) -> List[float]:
        gains = [float(g) for g in self.param("gains_dB")]
        if not gains or min(gains) < 0:
            raise ParameterError(
                "gains_dB must list values >= 0 dB",
                field_errors={"parameters.gains_dB": ["must list values >= 0 dB"]},
                context=make_context(__name__, "ParampExperiment.gains"),
            )
        return gains

    def check(self) -> None:
        self.mode()
        self.gains()
        if self.iparam("n_samples") < 2:
            raise ParameterError(
                "n_samples must be >= 2",
                field_errors={"parameters.n_samples": ["must be >= 2"]},
                context=make_context(__name__, "ParampExperiment.check"),
            )

    def _power_gains(self, gain: float, mode: ParampMode) -> Tuple[float, float]:
        if mode == ParampMode.PHASE_INSENSITIVE:
            return gain, gain
        up, down = quadrature_gains(gain)
        return up**2, down**2

    def execute(self, store: ResultStore, seeds: np.random.SeedSequence) -> Dict[str, Any]:
        mode, phi, n = self.mode(), self.fparam("phi_rad"), self.iparam("n_samples")
        gains_dB = self.gains()
        point_seeds = seeds.spawn(len(gains_dB))

        def point(item: Tuple[float, np.random.SeedSequence]) -> Dict[str, float]:
            gain_dB, seed = item
            rng = np.random.default_rng(seed)
            gain = db_to_linear(gain_dB)
            out = paramp_transform(vacuum_samples(n, rng), gain, mode, phi, rng)
            var_I, var_Q = float(np.var(out.real, ddof=1)), float(np.var(out.imag, ddof=1))
            expected_I, expected_Q = output_quadrature_variances(gain, mode)
            power_I, power_Q = self._power_gains(gain, mode)
            return {
                "gain_dB": gain_dB,
                "var_I": var_I,
                "var_Q": var_Q,
                "expected_var_I": expected_I,
                "expected_var_Q": expected_Q,
                "added_noise": 0.5 * (var_I / power_I + var_Q / power_Q) - VACUUM_VARIANCE,
                "expected_added_noise": added_noise(gain) if mode == ParampMode.PHASE_INSENSITIVE else 0.0,
            }

        frame = pd.DataFrame(self.map(point, list(zip(gains_dB, point_seeds))), columns=PARAMP_COLUMNS)
        store.write_frame("paramp.csv", frame)
        top = db_to_linear(max(gains_dB))
        report: Dict[str, Any] = {"mode": mode.value, "phi_rad": phi, "n_samples": n}
        if mode == ParampMode.PHASE_SENSITIVE:
            up, down = quadrature_gains(top)
            report["quadrature_gain_product"] = up * down
        else:
            report["added_noise_at_max_gain"] = float(frame["added_noise"].iloc[int(np.argmax(gains_dB))])
        chain = self.device.readout_chain
        if chain is not None and chain.stages:
            T_sys = system_noise_temperature(chain.chain())
            report["T_sys_K"] = T_sys
            if self.device.resonators and T_sys > 0:
                report["quantum_efficiency"] = quantum_efficiency(self.device.resonators[0].params().omega_r, T_sys)
        self.logger.info(f"paramp ({mode.value}): {len(gains_dB)} gains up to {10 * math.log10(top):.1f} dB")
        return report
