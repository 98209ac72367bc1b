"""Rabi amplitude sweeps and DRAG scans on a multilevel Duffing model."""

import math
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from ..core.base_experiment import BaseExperiment
from ..core.errors import ParameterError, make_context
from ..core.units import TWO_PI, ghz_to_rad_per_ns, mhz_to_rad_per_ns
from ..device import DuffingParams, build_hamiltonian, spectrum
from ..gates.library import rotation_error_angle, x_gate
from ..pulse import (
    DrivePulse,
    EvolutionResult,
    calibrate_amplitude,
    drive_hamiltonian_source,
    evolve,
    gaussian,
    uniform_grid,
)
from ..storage.result_store import ResultStore
from .registry import register

RABI_COLUMNS = ["angle_rad", "amplitude_V", "P0", "P1", "P2"]
DRAG_COLUMNS = ["drag_lambda", "amplitude_V", "P1", "leakage", "rotation_error_rad"]

_DRIVE_DEFAULTS: Dict[str, Any] = {
    "qubit": None,
    "sigma_ns": None,
    "levels": 3,
    "omega_q_GHz": None,
    "alpha_MHz": None,
    "drive_coupling_rad_per_ns_V": 1.0,
}


class DriveExperiment(BaseExperiment):
    """Resonant Gaussian drive in the rotating frame of the qubit."""

    def device_default(self, key: str) -> Optional[Any]:
        if key != "drive_coupling_rad_per_ns_V" or not self.device.qubits:
            return None
        return self.device.qubit(self.optional("qubit")).drive_coupling()

    def duffing(self) -> DuffingParams:
        """Duffing model from explicit frequencies or the diagonalized qubit."""
        omega_q, alpha = self.optional("omega_q_GHz"), self.optional("alpha_MHz")
        if omega_q is not None and alpha is not None:
            return DuffingParams(ghz_to_rad_per_ns(float(omega_q)), mhz_to_rad_per_ns(float(alpha)))
        qubit = self.device.qubit(self.optional("qubit"))
        return DuffingParams.from_spectrum(
            spectrum(build_hamiltonian(qubit.circuit(), qubit.bias(), **self.truncation()), k=3)
        )

    def levels(self) -> int:
        levels = self.iparam("levels")
        if levels < 2:
            raise ParameterError(
                f"need at least two levels, got {levels}",
                field_errors={"parameters.levels": ["must be >= 2"]},
                context=make_context(__name__, "DriveExperiment.levels", levels=levels),
            )
        return levels

    def base_pulse(self, drag_lambda: float = 0.0) -> DrivePulse:
        duration = self.fparam("duration_ns")
        sigma = self.optional("sigma_ns")
        envelope = gaussian(duration, float(sigma) if sigma is not None else duration / 6.0)
        return DrivePulse(envelope, drag_lambda=drag_lambda)

    def check(self) -> None:
        self.levels()
        self.base_pulse()
        if self.fparam("drive_coupling_rad_per_ns_V") == 0.0:
            raise ParameterError(
                "drive coupling must be nonzero",
                field_errors={"parameters.drive_coupling_rad_per_ns_V": ["must be nonzero"]},
                context=make_context(__name__, "DriveExperiment.check"),
            )

    def run_pulse(
        self, duffing: DuffingParams, pulse: DrivePulse, angle: float
    ) -> Tuple[DrivePulse, EvolutionResult]:
        """Calibrate ``pulse`` to ``angle`` and evolve the propagator from |0⟩."""
        coupling = self.fparam("drive_coupling_rad_per_ns_V")
        levels = self.levels()
        pulse = calibrate_amplitude(pulse, coupling, angle)
        H = drive_hamiltonian_source(duffing, pulse, levels, coupling, frame="rotating")
        psi0 = np.zeros(levels, dtype=complex)
        psi0[0] = 1.0
        grid = uniform_grid(H, 0.0, pulse.duration)
        return pulse, evolve(H, psi0, grid, method=self.numerics.evolution_method, propagator=True)


@register
class RabiExperiment(DriveExperiment):
    """Final populations versus calibrated rotation angle."""

    name = "rabi"
    description = "Rabi amplitude sweep of a Gaussian pulse on a multilevel qubit"
    required = ("duration_ns", "drive_coupling_rad_per_ns_V")
    defaults = {**_DRIVE_DEFAULTS, "points": 41, "max_angle_rad": 2.0 * math.pi}

    def execute(self, store: ResultStore, seeds: np.random.SeedSequence) -> Dict[str, Any]:
        duffing = self.duffing()
        base = self.base_pulse()
        angles = np.linspace(0.0, self.fparam("max_angle_rad"), self.iparam("points"))

        def point(angle: float) -> Dict[str, float]:
            pulse, result = self.run_pulse(duffing, base, float(angle))
            populations = result.populations()[-1]
            return {
                "angle_rad": float(angle),
                "amplitude_V": pulse.envelope.amplitude,
                "P0": float(populations[0]),
                "P1": float(populations[1]),
                "P2": float(populations[2]) if len(populations) > 2 else 0.0,
            }

        rows: List[Dict[str, float]] = self.map(point, list(angles))
        store.write_frame("rabi.csv", pd.DataFrame(rows, columns=RABI_COLUMNS))

        pi_pulse, pi_result = self.run_pulse(duffing, base, math.pi)
        report = {
            "omega_q_GHz": duffing.omega_q / TWO_PI,
            "alpha_MHz": duffing.alpha / TWO_PI * 1e3,
            "pi_amplitude_V": pi_pulse.envelope.amplitude,
            "pi_P1": float(pi_result.populations()[-1][1]),
            "pi_leakage": float(pi_result.leakage[-1]),
        }
        self.logger.info(f"π pulse V₀ = {report['pi_amplitude_V']:.5g} V, P1 = {report['pi_P1']:.5f}")
        return report


@register
class DragScanExperiment(DriveExperiment):
    """Leakage and rotation error versus the DRAG scale λ."""

    name = "drag-scan"
    description = "DRAG λ scan of leakage and coherent rotation error"
    required = ("duration_ns",)
    defaults = {**_DRIVE_DEFAULTS, "lambdas": [0.0, 0.25, 0.5, 0.75, 1.0], "angle_rad": math.pi}

    def lambdas(self) -> List[float]:
        values = [float(v) for v in self.param("lambdas")]
        if not values:
            raise ParameterError(
                "lambdas must not be empty",
                field_errors={"parameters.lambdas": ["must list at least one value"]},
                context=make_context(__name__, "DragScanExperiment.lambdas"),
            )
        return values

    def check(self) -> None:
        super().check()
        self.lambdas()

    def execute(self, store: ResultStore, seeds: np.random.SeedSequence) -> Dict[str, Any]:
        duffing = self.duffing()
        angle = self.fparam("angle_rad")
        ideal = x_gate(angle).unitary

        def point(lam: float) -> Dict[str, float]:
            pulse, result = self.run_pulse(duffing, self.base_pulse(lam), angle)
            assert result.propagator is not None
            return {
                "drag_lambda": lam,
                "amplitude_V": pulse.envelope.amplitude,
                "P1": float(result.populations()[-1][1]),
                "leakage": float(result.leakage[-1]),
                "rotation_error_rad": rotation_error_angle(result.propagator[:2, :2], ideal),
            }

        frame = pd.DataFrame(self.map(point, self.lambdas()), columns=DRAG_COLUMNS)
        store.write_frame("drag_scan.csv", frame)
        best = frame.loc[frame["leakage"].idxmin()]
        report: Dict[str, Any] = {
            "omega_q_GHz": duffing.omega_q / TWO_PI,
            "alpha_MHz": duffing.alpha / TWO_PI * 1e3,
            "angle_rad": angle,
            "best_lambda": float(best["drag_lambda"]),
            "best_leakage": float(best["leakage"]),
        }
        plain = frame[frame["drag_lambda"] == 0.0]
        if not plain.empty and best["leakage"] > 0:
            report["leakage_suppression"] = float(plain["leakage"].iloc[0] / best["leakage"])
        self.logger.info(f"DRAG scan: lowest leakage {report['best_leakage']:.3e} at λ = {report['best_lambda']}")
        return report
