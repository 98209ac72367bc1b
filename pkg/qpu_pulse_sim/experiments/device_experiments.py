"""Spectrum sweep of a configured qubit circuit."""

from typing import Any, Dict, List

import numpy as np
import pandas as pd

from ..config.settings import QubitSpec
from ..core.base_experiment import BaseExperiment
from ..core.errors import ErrorCode, ParameterError, make_context
from ..core.units import TWO_PI
from ..device import QubitKind, charge_dispersion, sweep_flux
from ..storage.result_store import ResultStore
from .registry import register

TRANSMON_KINDS = (QubitKind.TRANSMON, QubitKind.SPLIT_TRANSMON)


@register
class SpectrumExperiment(BaseExperiment):
    """ω₀₁, ω₁₂ and α versus external flux."""

    name = "spectrum"
    description = "Transition frequencies and anharmonicity over a flux sweep"
    defaults: Dict[str, Any] = {
        "qubit": None,
        "flux_min_rad": -1.2,
        "flux_max_rad": 1.2,
        "points": 41,
        "cutoff": None,
        "grid_points": None,
        "levels": None,
        "charge_dispersion": False,
    }

    def qubit_spec(self) -> QubitSpec:
        return self.device.qubit(self.optional("qubit"))

    def flux_grid(self) -> np.ndarray:
        lo, hi, points = self.fparam("flux_min_rad"), self.fparam("flux_max_rad"), self.iparam("points")
        if points < 2 or not hi > lo:
            raise ParameterError(
                f"flux sweep needs points >= 2 and flux_max_rad > flux_min_rad, got {points} on [{lo}, {hi}]",
                code=ErrorCode.INVALID_GRID,
                field_errors={"parameters.points": ["needs >= 2 points on a non-empty range"]},
                context=make_context(__name__, "SpectrumExperiment.flux_grid"),
            )
        return np.linspace(lo, hi, points)

    def truncation(self) -> Dict[str, Any]:
        """Numerics truncation with the cutoff, grid_points and levels parameters applied."""
        truncation = super().truncation()
        keys = {"cutoff": "cutoff", "grid_points": "points", "levels": "levels"}
        for key, target in keys.items():
            if self.optional(key) is not None:
                truncation[target] = int(self.param(key))
        return truncation

    def check(self) -> None:
        self.qubit_spec().circuit()
        self.flux_grid()

    def execute(self, store: ResultStore, seeds: np.random.SeedSequence) -> Dict[str, Any]:
        spec = self.qubit_spec()
        circuit = spec.circuit()
        truncation = self.truncation()
        grid = self.flux_grid()

        def sweep_point(phi: float) -> pd.DataFrame:
            return sweep_flux(circuit, [phi], **truncation)

        frames: List[pd.DataFrame] = self.map(sweep_point, list(grid))
        frame = pd.concat(frames, ignore_index=True)
        store.write_frame("spectrum.csv", frame)

        peak = int(frame["omega01_GHz"].idxmax())
        report: Dict[str, Any] = {
            "qubit": spec.name,
            "kind": spec.kind.value,
            "points": int(len(frame)),
            "omega01_max_GHz": float(frame.loc[peak, "omega01_GHz"]),
            "phi_e_at_max_rad": float(frame.loc[peak, "phi_e"]),
            "omega01_min_GHz": float(frame["omega01_GHz"].min()),
            "alpha_at_max_GHz": float(frame.loc[peak, "alpha_GHz"]),
        }
        if bool(self.param("charge_dispersion")) and spec.kind in TRANSMON_KINDS:
            report["charge_dispersion_MHz"] = charge_dispersion(circuit, cutoff=truncation["cutoff"]) / TWO_PI * 1e3
        self.logger.info(
            f"{spec.name}: ω01 max {report['omega01_max_GHz']:.4f} GHz at φ_e = {report['phi_e_at_max_rad']:.3f} rad"
        )
        return report
