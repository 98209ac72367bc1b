"""Dimensionless pulse envelopes s(t) with analytic derivatives.

All envelopes vanish outside [0, duration]. Times are in ns.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import integrate

from ..core.errors import ParameterError, make_context


class EnvelopeKind(str, Enum):
    GAUSSIAN = "gaussian"
    COSINE = "cosine"
    FLATTOP = "flattop"
    SAMPLES = "samples"


@dataclass(frozen=True)
class Envelope:
    """Pulse envelope V₀·s(t).

    Gaussians are centred at duration/2 and lifted so that s(0) = s(T) = 0.
    Flat-top pulses use raised-cosine edges of length ``rise``. Sampled
    envelopes are linearly interpolated; their derivative uses second-order
    central differences with one-sided ends.
    """

    kind: EnvelopeKind
    duration: float
    amplitude: float = 1.0
    sigma: Optional[float] = None
    rise: Optional[float] = None
    samples: Tuple[Tuple[float, float], ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        errors: Dict[str, List[str]] = {}
        if not self.duration > 0:
            errors.setdefault("duration", []).append("must be > 0")
        if self.kind == EnvelopeKind.GAUSSIAN and not (self.sigma and self.sigma > 0):
            errors.setdefault("sigma", []).append("gaussian needs sigma > 0")
        if self.kind == EnvelopeKind.FLATTOP:
            if self.rise is None or not 0 < self.rise <= self.duration / 2:
                errors.setdefault("rise", []).append("needs 0 < rise <= duration/2")
        if self.kind == EnvelopeKind.SAMPLES:
            if len(self.samples) < 2:
                errors.setdefault("samples", []).append("need at least two samples")
            else:
                t, v = self._sample_arrays()
                if np.any(np.diff(t) <= 0):
                    errors.setdefault("samples", []).append("times must increase strictly")
                if np.any(np.abs(v) > 1.0):
                    errors.setdefault("samples", []).append("|s(t)| must be <= 1")
                if t[0] < 0 or t[-1] > self.duration:
                    errors.setdefault("samples", []).append("times must lie in [0, duration]")
        if errors:
            raise ParameterError(
                f"invalid envelope: {errors}",
                field_errors=errors,
                context=make_context(__name__, "Envelope", kind=self.kind),
            )

    def _sample_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        data = np.asarray(self.samples, dtype=float)
        return data[:, 0], data[:, 1]

    def with_amplitude(self, amplitude: float) -> "Envelope":
        return Envelope(
            kind=self.kind,
            duration=self.duration,
            amplitude=amplitude,
            sigma=self.sigma,
            rise=self.rise,
            samples=self.samples,
        )

    def shape(self, t: np.ndarray) -> np.ndarray:
        """Dimensionless s(t)."""
        t = np.asarray(t, dtype=float)
        T = self.duration
        inside = (t >= 0.0) & (t <= T)
        if self.kind == EnvelopeKind.GAUSSIAN:
            assert self.sigma is not None
            edge = math.exp(-((T / 2) ** 2) / (2 * self.sigma**2))
            raw = np.exp(-((t - T / 2) ** 2) / (2 * self.sigma**2))
            value = (raw - edge) / (1.0 - edge)
        elif self.kind == EnvelopeKind.COSINE:
            value = 0.5 * (1.0 - np.cos(2 * np.pi * t / T))
        elif self.kind == EnvelopeKind.FLATTOP:
            assert self.rise is not None
            r = self.rise
            value = np.ones_like(t)
            up = t < r
            down = t > T - r
            value[up] = 0.5 * (1.0 - np.cos(np.pi * t[up] / r))
            value[down] = 0.5 * (1.0 - np.cos(np.pi * (T - t[down]) / r))
        else:
            ts, vs = self._sample_arrays()
            value = np.interp(t, ts, vs, left=0.0, right=0.0)
        return np.where(inside, value, 0.0)

    def derivative(self, t: np.ndarray) -> np.ndarray:
        """ṡ(t) in 1/ns."""
        t = np.asarray(t, dtype=float)
        T = self.duration
        inside = (t >= 0.0) & (t <= T)
        if self.kind == EnvelopeKind.GAUSSIAN:
            assert self.sigma is not None
            edge = math.exp(-((T / 2) ** 2) / (2 * self.sigma**2))
            raw = np.exp(-((t - T / 2) ** 2) / (2 * self.sigma**2))
            value = -(t - T / 2) / self.sigma**2 * raw / (1.0 - edge)
        elif self.kind == EnvelopeKind.COSINE:
            value = np.pi / T * np.sin(2 * np.pi * t / T)
        elif self.kind == EnvelopeKind.FLATTOP:
            assert self.rise is not None
            r = self.rise
            value = np.zeros_like(t)
            up = t < r
            down = t > T - r
            value[up] = 0.5 * np.pi / r * np.sin(np.pi * t[up] / r)
            value[down] = -0.5 * np.pi / r * np.sin(np.pi * (T - t[down]) / r)
        else:
            ts, vs = self._sample_arrays()
            value = np.interp(t, ts, np.gradient(vs, ts), left=0.0, right=0.0)
        return np.where(inside, value, 0.0)

    def area(self, t_end: Optional[float] = None, dt: float = 0.01) -> float:
        """∫₀^t_end s(t′)dt′ by composite Simpson on a grid of step ≤ dt."""
        t_end = self.duration if t_end is None else min(t_end, self.duration)
        if t_end <= 0:
            return 0.0
        intervals = max(2, int(math.ceil(t_end / dt)))
        intervals += intervals % 2
        grid = np.linspace(0.0, t_end, intervals + 1)
        return float(integrate.simpson(self.shape(grid), x=grid))


def gaussian(duration: float, sigma: float, amplitude: float = 1.0) -> Envelope:
    return Envelope(EnvelopeKind.GAUSSIAN, duration, amplitude, sigma=sigma)


def cosine(duration: float, amplitude: float = 1.0) -> Envelope:
    return Envelope(EnvelopeKind.COSINE, duration, amplitude)


def flattop(duration: float, rise: float, amplitude: float = 1.0) -> Envelope:
    return Envelope(EnvelopeKind.FLATTOP, duration, amplitude, rise=rise)


def sampled(
    times: np.ndarray, values: np.ndarray, amplitude: float = 1.0, duration: Optional[float] = None
) -> Envelope:
    times = np.asarray(times, dtype=float)
    samples = tuple(zip(times.tolist(), np.asarray(values, dtype=float).tolist()))
    return Envelope(
        EnvelopeKind.SAMPLES,
        float(duration if duration is not None else times[-1]),
        amplitude,
        samples=samples,
    )
