"""Sampled flux trajectories φ_e(t) for flux-activated two-qubit gates."""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Union

import numpy as np
from scipy import integrate

from ..core.errors import ParameterError, make_context

INTERPOLATIONS = ("hold", "linear")


@dataclass
class FluxTrajectory:
    """External flux φ_e(t) in radians on samples starting at t = 0.

    ``hold`` keeps each sample until the next time stamp (square pulses);
    ``linear`` interpolates between samples. The last sample is the idle
    flux; linear trajectories also start there.
    """

    times: np.ndarray
    phi_e: np.ndarray
    interpolation: str = "linear"

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.phi_e = np.asarray(self.phi_e, dtype=float)
        errors: Dict[str, List[str]] = {}
        if self.interpolation not in INTERPOLATIONS:
            errors.setdefault("interpolation", []).append(f"must be one of {INTERPOLATIONS}")
        if self.times.shape != self.phi_e.shape or self.times.ndim != 1 or len(self.times) < 2:
            errors.setdefault("samples", []).append("need matching 1D arrays with >= 2 samples")
        else:
            if self.times[0] != 0.0 or np.any(np.diff(self.times) <= 0):
                errors.setdefault("times", []).append("must start at 0 and increase strictly")
            if not np.all(np.isfinite(self.phi_e)):
                errors.setdefault("phi_e", []).append("must be finite")
            elif self.interpolation == "linear" and not math.isclose(
                self.phi_e[0], self.phi_e[-1], abs_tol=1e-12
            ):
                errors.setdefault("phi_e", []).append("must start and end at the idle flux")
        if errors:
            raise ParameterError(
                f"invalid flux trajectory: {errors}",
                field_errors=errors,
                context=make_context(__name__, "FluxTrajectory"),
            )

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    @property
    def idle(self) -> float:
        return float(self.phi_e[-1])

    def __call__(self, t: Union[float, np.ndarray]) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.interpolation == "linear":
            return np.interp(t, self.times, self.phi_e, left=self.idle, right=self.idle)
        index = np.clip(np.searchsorted(self.times, t, side="right") - 1, 0, len(self.times) - 1)
        return np.where((t < 0) | (t >= self.duration), self.idle, self.phi_e[index])

    def integrate(self, fn: Callable[[np.ndarray], np.ndarray], dt: float = 0.01) -> float:
        """∫₀ᵀ fn(φ_e(t)) dt; exact for ``hold``, Simpson on a fine grid for ``linear``."""
        if self.interpolation == "hold":
            values = np.asarray(fn(self.phi_e[:-1]), dtype=float)
            return float(np.sum(values * np.diff(self.times)))
        intervals = max(2, int(math.ceil(self.duration / dt)))
        intervals += intervals % 2
        grid = np.linspace(0.0, self.duration, intervals + 1)
        return float(integrate.simpson(np.asarray(fn(self(grid)), dtype=float), x=grid))

    def then(self, other: "FluxTrajectory") -> "FluxTrajectory":
        """``other`` appended after this trajectory; both must share interpolation and idle."""
        if other.interpolation != self.interpolation or not math.isclose(
            other.idle, self.idle, abs_tol=1e-12
        ):
            raise ParameterError(
                "concatenated flux trajectories need the same interpolation and idle flux",
                context=make_context(__name__, "FluxTrajectory.then"),
            )
        if self.interpolation == "linear":
            times = np.concatenate([self.times, other.times[1:] + self.duration])
            values = np.concatenate([self.phi_e, other.phi_e[1:]])
        else:
            times = np.concatenate([self.times[:-1], other.times + self.duration])
            values = np.concatenate([self.phi_e[:-1], other.phi_e])
        return FluxTrajectory(times=times, phi_e=values, interpolation=self.interpolation)

    def to_dict(self) -> Dict[str, object]:
        return {
            "times_ns": self.times.tolist(),
            "phi_e_rad": self.phi_e.tolist(),
            "interpolation": self.interpolation,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, object]) -> "FluxTrajectory":
        return cls(
            times=np.asarray(data["times_ns"], dtype=float),
            phi_e=np.asarray(data["phi_e_rad"], dtype=float),
            interpolation=str(data.get("interpolation", "linear")),
        )

    @classmethod
    def square(
        cls, idle: float, target: float, t0: float, tau: float, T: float
    ) -> "FluxTrajectory":
        """Instantaneous jump to ``target`` for a hold time τ starting at t0."""
        if not tau > 0 or t0 < 0 or t0 + tau > T:
            raise ParameterError(
                f"square flux pulse needs tau > 0 and 0 <= t0, t0 + tau <= T "
                f"(t0={t0}, tau={tau}, T={T})",
                context=make_context(__name__, "FluxTrajectory.square", t0=t0, tau=tau, T=T),
            )
        times = [0.0, t0, t0 + tau, T]
        values = [idle, target, idle, idle]
        if t0 == 0.0:
            times, values = times[1:], values[1:]
        if t0 + tau == T:
            times, values = times[:-1], values[:-1]
        return cls(times=np.asarray(times), phi_e=np.asarray(values), interpolation="hold")

    @classmethod
    def raised_cosine(
        cls,
        idle: float,
        hold: float,
        rise: float,
        hold_time: float,
        T: float,
        t0: float = 0.0,
        dt: float = 0.1,
    ) -> "FluxTrajectory":
        """Raised-cosine edges of length ``rise`` around a flat ``hold_time`` segment."""
        end = t0 + 2.0 * rise + hold_time
        if not (rise > 0 and hold_time >= 0 and t0 >= 0 and end <= T + 1e-12 and dt > 0):
            raise ParameterError(
                "raised-cosine flux pulse needs rise > 0, hold_time >= 0 and "
                f"t0 + 2·rise + hold_time <= T (got {end:.4g} > {T:.4g})",
                context=make_context(__name__, "FluxTrajectory.raised_cosine", T=T),
            )
        points = max(2, int(math.ceil(T / dt)) + 1)
        times = np.linspace(0.0, T, points)
        times = np.union1d(times, [t0, t0 + rise, t0 + rise + hold_time, min(end, T)])
        weight = np.zeros_like(times)
        up = (times > t0) & (times < t0 + rise)
        flat = (times >= t0 + rise) & (times <= t0 + rise + hold_time)
        down = (times > t0 + rise + hold_time) & (times < end)
        weight[up] = 0.5 * (1.0 - np.cos(np.pi * (times[up] - t0) / rise))
        weight[flat] = 1.0
        weight[down] = 0.5 * (1.0 - np.cos(np.pi * (end - times[down]) / rise))
        return cls(times=times, phi_e=idle + (hold - idle) * weight, interpolation="linear")
