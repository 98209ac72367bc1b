"""Two-qubit gate experiments: iSWAP chevron, CPHASE calibration and CR scans."""

import math
from typing import Any, ClassVar, Dict, Optional, Tuple

import numpy as np
import pandas as pd

from ..config.settings import QubitSpec
from ..core.base_experiment import BaseExperiment
from ..core.errors import ConfigError, ErrorCode, ParameterError, SimulationError, make_context
from ..core.units import TWO_PI, mhz_to_rad_per_ns
from ..device import DuffingParams, QubitKind, build_hamiltonian, spectrum
from ..gates import (
    CPHASE_STRATEGIES,
    FrequencyMap,
    TransmonPair,
    TwoQubitFluxGateConfig,
    ZetaMap,
    corrected_iswap,
    cphase_trajectory,
    cr_effective_params,
    cz_phi,
    gate_fidelity,
    iswap_chevron,
    simulate_cphase,
    simulate_cr_rabi,
)
from ..pulse import FluxTrajectory
from ..storage.result_store import ResultStore
from .registry import register

TRAJECTORY_COLUMNS = ["t_ns", "phi_e_rad"]
SWAP_SAMPLES = 2001


class TwoQubitExperiment(BaseExperiment):
    """Experiment on an ordered qubit pair with an exchange coupling g."""

    roles: ClassVar[Tuple[str, str]] = ("control", "target")
    first_kind: ClassVar[Optional[QubitKind]] = None

    def qubit_pair(self) -> Tuple[QubitSpec, QubitSpec]:
        """Qubits named by the role parameters, else the first suitable ones."""
        first_name, second_name = (self.optional(role) for role in self.roles)
        context = make_context(__name__, "TwoQubitExperiment.qubit_pair", experiment=self.name)
        if first_name is not None:
            first = self.device.qubit(first_name)
        else:
            candidates = [q for q in self.device.qubits if self.first_kind in (None, q.kind)]
            if not candidates:
                kind = self.first_kind.value if self.first_kind else "any"
                raise ConfigError(
                    f"{self.name} needs a {kind} qubit",
                    field_errors={f"parameters.{self.roles[0]}": [f"no {kind} qubit in the device"]},
                    context=context,
                )
            first = candidates[0]
        if second_name is not None:
            return first, self.device.qubit(second_name)
        others = [q for q in self.device.qubits if q.name != first.name]
        if not others:
            raise ConfigError(
                f"{self.name} needs two qubits",
                field_errors={"device.qubits": [f"{self.name} needs a second qubit"]},
                context=context,
            )
        return first, others[0]

    def device_default(self, key: str) -> Optional[Any]:
        if key != "g_MHz":
            return None
        try:
            first, second = self.qubit_pair()
        except SimulationError:
            return None
        coupling = self.device.coupling(first.name, second.name)
        return coupling.g_MHz if coupling is not None else None

    def g(self) -> float:
        g_MHz = self.fparam("g_MHz")
        if not g_MHz > 0:
            raise ParameterError(
                f"g_MHz must be > 0, got {g_MHz}",
                field_errors={"parameters.g_MHz": ["must be > 0"]},
                context=make_context(__name__, "TwoQubitExperiment.g", experiment=self.name),
            )
        return mhz_to_rad_per_ns(g_MHz)


class FluxGateExperiment(TwoQubitExperiment):
    roles = ("tunable", "fixed")
    first_kind = QubitKind.SPLIT_TRANSMON

    def pair(self) -> TransmonPair:
        tunable, fixed = self.qubit_pair()
        return TransmonPair(
            tunable=tunable.circuit(),
            fixed=fixed.circuit(),
            g=self.g(),
            idle=tunable.flux_rad,
            fixed_bias=fixed.flux_rad,
            cutoff=self.numerics.charge_cutoff,
        )

    def frequency_map(self) -> FrequencyMap:
        return FrequencyMap(
            self.pair(), phi_max=self.fparam("flux_map_max_rad"), points=self.numerics.flux_map_points
        )

    def check(self) -> None:
        self.pair()


@register
class IswapChevronExperiment(FluxGateExperiment):
    """Swap population over hold flux and time, plus the corrected iSWAP fidelity."""

    name = "iswap-chevron"
    description = "iSWAP chevron around the |01⟩/|10⟩ resonance"
    required = ("g_MHz",)
    defaults: Dict[str, Any] = {
        "tunable": None,
        "fixed": None,
        "flux_map_max_rad": 1.2,
        "flux_span_rad": 0.05,
        "flux_points": 41,
        "tau_max_ns": None,
        "tau_points": 81,
    }

    def execute(self, store: ResultStore, seeds: np.random.SeedSequence) -> Dict[str, Any]:
        fmap = self.frequency_map()
        g = fmap.pair.g
        phi_iswap = fmap.iswap_flux()
        span = self.fparam("flux_span_rad")
        lo = max(fmap.grid[0], phi_iswap - span)
        hi = min(fmap.grid[-1], phi_iswap + span)
        flux = np.linspace(lo, hi, self.iparam("flux_points"))
        tau_max = self.optional("tau_max_ns")
        taus = np.linspace(0.0, float(tau_max) if tau_max is not None else 2.0 * math.pi / g, self.iparam("tau_points"))

        def column(phi: float) -> pd.DataFrame:
            return iswap_chevron(fmap, [phi], taus).to_frame()

        chevron = pd.concat(self.map(column, list(flux)), ignore_index=True)
        store.write_frame("chevron.csv", chevron)

        expected = math.pi / (2.0 * g)
        fine = np.linspace(0.0, 2.0 * expected, SWAP_SAMPLES)
        on_resonance = iswap_chevron(fmap, [phi_iswap], fine).population[0]
        swap_time = float(fine[int(np.argmax(on_resonance))])

        trajectory = FluxTrajectory.square(fmap.pair.idle, phi_iswap, 0.0, expected, expected)
        gate = corrected_iswap(
            TwoQubitFluxGateConfig(g=g, trajectory=trajectory, tau=expected, idle=fmap.pair.idle), fmap
        )
        report = {
            "g_MHz": g / TWO_PI * 1e3,
            "iswap_flux_rad": phi_iswap,
            "swap_time_ns": swap_time,
            "expected_swap_time_ns": expected,
            "swap_period_ns": 2.0 * swap_time,
            "max_P01": float(np.max(on_resonance)),
            "iswap_fidelity": gate.fidelity,
        }
        self.logger.info(
            f"iSWAP at φ_e = {phi_iswap:.5f} rad: swap {swap_time:.3f} ns (π/2g = {expected:.3f} ns), "
            f"fidelity {gate.fidelity:.6f}"
        )
        return report


@register
class CphaseCalibrationExperiment(FluxGateExperiment):
    """Solve the CPHASE flux excursion and check it in six-level dynamics."""

    name = "cphase-cal"
    description = "Adiabatic CPHASE excursion calibrated on the ζ integral"
    required = ("g_MHz",)
    defaults: Dict[str, Any] = {
        "tunable": None,
        "fixed": None,
        "flux_map_max_rad": 1.2,
        "T_ns": 60.0,
        "target_phase_rad": math.pi,
        "strategy": "raised_cosine",
        "sample_step_ns": 0.1,
    }

    def strategy(self) -> str:
        strategy = str(self.param("strategy"))
        if strategy not in CPHASE_STRATEGIES:
            raise ParameterError(
                f"unknown CPHASE strategy {strategy!r}",
                field_errors={"parameters.strategy": [f"must be one of {list(CPHASE_STRATEGIES)}"]},
                context=make_context(__name__, "CphaseCalibrationExperiment.strategy"),
            )
        return strategy

    def check(self) -> None:
        super().check()
        self.strategy()

    def execute(self, store: ResultStore, seeds: np.random.SeedSequence) -> Dict[str, Any]:
        zmap = ZetaMap(self.frequency_map(), points=self.numerics.flux_map_points)
        target = self.fparam("target_phase_rad")
        solved = cphase_trajectory(zmap, target, self.fparam("T_ns"), strategy=self.strategy())
        simulation = simulate_cphase(solved.trajectory, zmap)

        step = self.fparam("sample_step_ns")
        t = np.arange(0.0, solved.trajectory.duration + 0.5 * step, step)
        store.write_frame(
            "cphase_trajectory.csv",
            pd.DataFrame({"t_ns": t, "phi_e_rad": solved.trajectory(t)}, columns=TRAJECTORY_COLUMNS),
        )
        phase = simulation.conditional_phase
        report = {
            "g_MHz": zmap.fmap.pair.g / TWO_PI * 1e3,
            "crossing_flux_rad": zmap.crossing,
            "strategy": self.strategy(),
            "hold_depth_rad": solved.hold_depth,
            "target_phase_rad": target,
            "zeta_integral_rad": solved.conditional_phase,
            "conditional_phase_rad": phase,
            "phase_error_rad": float(abs(np.angle(np.exp(1j * (abs(phase) - target))))),
            "leakage": simulation.leakage,
            "max_leakage": simulation.max_leakage,
            "cz_fidelity": gate_fidelity(simulation.unitary().unitary, cz_phi(math.copysign(target, phase)).unitary),
        }
        self.logger.info(f"CPHASE: φ = {phase:.5f} rad, leakage {simulation.leakage:.2e}")
        return report


@register
class CrossResonanceScanExperiment(TwoQubitExperiment):
    """Conditional Rabi oscillations of the target under a CR drive."""

    name = "cr-scan"
    description = "Cross-resonance conditional Rabi rates and ZX angle"
    required = ("g_MHz", "drive_MHz")
    defaults: Dict[str, Any] = {
        "control": None,
        "target": None,
        "duration_ns": 400.0,
        "points": 401,
        "eta": 0.0,
        "delta12_MHz": None,
        "alpha1_MHz": None,
        "alpha2_MHz": None,
    }

    def _duffing(self, spec: QubitSpec) -> DuffingParams:
        return DuffingParams.from_spectrum(
            spectrum(build_hamiltonian(spec.circuit(), spec.bias(), **self.truncation()), k=3)
        )

    def detuning_and_alphas(self) -> Tuple[float, float, float]:
        """Δ₁₂, α₁, α₂ in rad/ns; explicit parameters override the diagonalized qubits."""
        overrides = [self.optional(k) for k in ("delta12_MHz", "alpha1_MHz", "alpha2_MHz")]
        if all(v is not None for v in overrides):
            delta, alpha1, alpha2 = (mhz_to_rad_per_ns(float(v)) for v in overrides)
            return delta, alpha1, alpha2
        control, target = (self._duffing(q) for q in self.qubit_pair())
        return control.omega_q - target.omega_q, control.alpha, target.alpha

    def times(self) -> np.ndarray:
        duration, points = self.fparam("duration_ns"), self.iparam("points")
        if not duration > 0 or points < 3:
            raise ParameterError(
                f"need duration_ns > 0 and points >= 3, got {duration} and {points}",
                code=ErrorCode.INVALID_GRID,
                field_errors={"parameters.points": ["need duration_ns > 0 and points >= 3"]},
                context=make_context(__name__, "CrossResonanceScanExperiment.times"),
            )
        return np.linspace(0.0, duration, points)

    def check(self) -> None:
        self.g()
        self.times()
        if self.optional("delta12_MHz") is None:
            for spec in self.qubit_pair():
                spec.circuit()

    def execute(self, store: ResultStore, seeds: np.random.SeedSequence) -> Dict[str, Any]:
        delta12, alpha1, alpha2 = self.detuning_and_alphas()
        params = cr_effective_params(self.g(), delta12, alpha1, alpha2, eta=self.fparam("eta"))
        omega = mhz_to_rad_per_ns(self.fparam("drive_MHz"))
        result = simulate_cr_rabi(params, omega, self.times())
        store.write_frame("cr.csv", result.to_frame())
        predicted = params.conditional_rates(omega)
        report = {
            "delta12_MHz": delta12 / TWO_PI * 1e3,
            "alpha1_MHz": alpha1 / TWO_PI * 1e3,
            "alpha2_MHz": alpha2 / TWO_PI * 1e3,
            "mu_minus": params.mu_minus,
            "nu_minus": params.nu_minus,
            "rates_rad_per_ns": list(result.rates),
            "predicted_rates_rad_per_ns": list(predicted),
            "zx_rate_rad_per_ns": params.zx_rate(omega),
            "time_to_pi_differential_ns": result.time_to_differential(math.pi),
        }
        self.logger.info(f"CR: π differential phase after {report['time_to_pi_differential_ns']:.1f} ns")
        return report
