"""T1, Ramsey, Hahn-echo and CPMG runs against configured decoherence truths."""

import math
from typing import Any, ClassVar, Dict, Optional

import numpy as np

from ..config.settings import QubitSpec
from ..core.base_experiment import BaseExperiment
from ..core.errors import ErrorCode, FitError, ParameterError, make_context
from ..core.units import TWO_PI
from ..noise import (
    DecayExperimentResult,
    ExperimentKind,
    FitResult,
    fit_model,
    simulate_decay_experiment,
)
from ..storage.result_store import ResultStore
from .registry import register

_DECAY_DEFAULTS: Dict[str, Any] = {
    "qubit": None,
    "points": 101,
    "shots": 10000,
    "detuning_MHz": 0.0,
}


class DecayExperiment(BaseExperiment):
    """One decay curve with shot noise, fitted and compared with the truths."""

    kind: ClassVar[ExperimentKind]
    required = ("t_max_us",)
    defaults = dict(_DECAY_DEFAULTS)

    def qubit_spec(self) -> QubitSpec:
        return self.device.qubit(self.optional("qubit"))

    def n_pulses(self) -> int:
        return 1

    def t_grid(self) -> np.ndarray:
        t_max, points = self.fparam("t_max_us"), self.iparam("points")
        if not t_max > 0 or points < 4:
            raise ParameterError(
                f"need t_max_us > 0 and points >= 4, got {t_max} and {points}",
                code=ErrorCode.INVALID_GRID,
                field_errors={"parameters.t_max_us": ["must be > 0 with at least 4 points"]},
                context=make_context(__name__, "DecayExperiment.t_grid", kind=self.kind.value),
            )
        return np.linspace(0.0, t_max, points)

    def shots(self) -> Optional[int]:
        shots = self.optional("shots")
        return None if shots is None else int(shots)

    def check(self) -> None:
        self.qubit_spec().rates(echo=self.echo)
        self.t_grid()
        if self.device.noise is not None:
            self.device.noise.psd()

    def simulate(self, rng: np.random.Generator) -> DecayExperimentResult:
        spec = self.qubit_spec()
        truth = spec.rates(echo=self.echo)
        noise = self.device.noise
        return simulate_decay_experiment(
            self.kind,
            truth,
            self.t_grid(),
            # rad/μs
            delta_omega=TWO_PI * self.fparam("detuning_MHz"),
            psd=noise.psd() if noise is not None else None,
            dOmega_dLambda=noise.dOmega_dLambda if noise is not None else 0.0,
            n_pulses=self.n_pulses(),
            shots=self.shots(),
            rng=rng,
            quadrature=self.system.noise_quadrature,
            threads=self.threads,
        )

    @property
    def echo(self) -> bool:
        return self.kind in (ExperimentKind.HAHN, ExperimentKind.CPMG)

    def extend_report(self, result: DecayExperimentResult, report: Dict[str, Any]) -> None:
        """Add experiment-specific analysis of ``result`` to ``report``."""

    def execute(self, store: ResultStore, seeds: np.random.SeedSequence) -> Dict[str, Any]:
        (shot_seed,) = seeds.spawn(1)
        result = self.simulate(np.random.default_rng(shot_seed))
        store.write_frame(f"{self.name}.csv", result.to_frame())
        spec = self.qubit_spec()
        report = result.report()
        report["qubit"] = spec.name
        report["truth"] = spec.rates(echo=self.echo).to_dict()
        self.extend_report(result, report)
        self.logger.info(f"{self.name}: fitted {result.fit.model}, decay time {result.decay_time:.4g} μs")
        return report


@register
class T1Experiment(DecayExperiment):
    name = "t1"
    description = "Energy relaxation after a π pulse"
    kind = ExperimentKind.T1


@register
class RamseyExperiment(DecayExperiment):
    """Ramsey fringe plus the Gaussian fit of the T1-corrected residual."""

    name = "ramsey"
    description = "Free-induction decay between two π/2 pulses"
    kind = ExperimentKind.RAMSEY

    def residual_fit(self, result: DecayExperimentResult, T1: float) -> FitResult:
        """Fit a + b·e^{−Γt − (σt)²} to the curve divided by e^{−t/2T1}.

        Raises:
            FitError: the residual fit does not converge
        """
        t = result.t_us
        relaxation = np.exp(-t / (2.0 * T1))
        residual = result.polarization / relaxation
        sigma = None
        if result.shots is not None:
            sigma = np.maximum(result.stderr, 1.0 / result.shots) / relaxation
        start = float(residual[0]) if residual[0] != 0.0 else -1.0
        below = np.nonzero(np.abs(residual) < abs(start) / math.e)[0]
        width = float(t[below[0]]) if len(below) and t[below[0]] > 0 else float(t[-1])
        return fit_model("gaussian_exponential", t, residual, [0.0, start, 0.0, 1.0 / width], sigma)

    def extend_report(self, result: DecayExperimentResult, report: Dict[str, Any]) -> None:
        if self.fparam("detuning_MHz") != 0.0:
            return
        T1 = self.qubit_spec().T1_us
        assert T1 is not None
        try:
            fit = self.residual_fit(result, T1)
        except FitError as e:
            self.logger.warning(f"Gaussian residual fit failed: {e.message}")
            return
        sigma = abs(fit.params["sigma"])
        report["residual_fit"] = fit.to_dict()
        report["T_phi_G_us"] = 1.0 / sigma if sigma > 0 else math.inf
        self.logger.info(f"Gaussian dephasing time from residual: {report['T_phi_G_us']:.4g} μs")


@register
class HahnExperiment(DecayExperiment):
    name = "hahn"
    description = "Hahn echo with one refocusing π pulse"
    kind = ExperimentKind.HAHN


@register
class CpmgExperiment(DecayExperiment):
    name = "cpmg"
    description = "CPMG train of N π pulses"
    kind = ExperimentKind.CPMG
    required = ("t_max_us", "n_pulses")

    def n_pulses(self) -> int:
        return self.iparam("n_pulses")

    def check(self) -> None:
        super().check()
        if self.n_pulses() < 1:
            raise ParameterError(
                f"CPMG needs n_pulses >= 1, got {self.n_pulses()}",
                field_errors={"parameters.n_pulses": ["must be >= 1"]},
                context=make_context(__name__, "CpmgExperiment.check"),
            )
