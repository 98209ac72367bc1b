"""Time-ordered pulse schedules on IQ drive and flux channels.

Virtual-Z rotations are bookkept as per-channel phase frames: after
``shift_frame(channel, θ)`` every pulse added to that channel carries an
extra IQ phase θ.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Union

import numpy as np
import pandas as pd

from ..core.errors import ParameterError, make_context
from .drive import DrivePulse, HamiltonianSource, complex_envelope
from .envelopes import Envelope, EnvelopeKind
from .flux import FluxTrajectory

logger = logging.getLogger(__name__)

WAVEFORM_COLUMNS = ["t_ns", "I", "Q"]


class ChannelKind(str, Enum):
    DRIVE = "drive"
    FLUX = "flux"


@dataclass(frozen=True)
class ScheduledPulse:
    start: float
    pulse: Union[DrivePulse, FluxTrajectory]

    @property
    def end(self) -> float:
        return self.start + self.pulse.duration


@dataclass
class PulseSchedule:
    """Channels of non-overlapping pulses plus per-channel phase frames (rad)."""

    channels: Dict[str, List[ScheduledPulse]] = field(default_factory=dict)
    kinds: Dict[str, ChannelKind] = field(default_factory=dict)
    phase_frames: Dict[str, float] = field(default_factory=dict)
    min_duration: float = 0.0

    @property
    def total_duration(self) -> float:
        ends = [p.end for pulses in self.channels.values() for p in pulses]
        return max([self.min_duration, *ends])

    def channel_end(self, channel: str) -> float:
        pulses = self.channels.get(channel, [])
        return pulses[-1].end if pulses else 0.0

    def _insert(
        self, channel: str, kind: ChannelKind, item: ScheduledPulse
    ) -> ScheduledPulse:
        known = self.kinds.setdefault(channel, kind)
        if known != kind:
            raise ParameterError(
                f"channel {channel!r} is a {known.value} channel",
                context=make_context(__name__, "PulseSchedule.add", channel=channel),
            )
        if item.start < 0:
            raise ParameterError(
                f"pulse start must be >= 0, got {item.start}",
                context=make_context(__name__, "PulseSchedule.add", channel=channel),
            )
        pulses = self.channels.setdefault(channel, [])
        for other in pulses:
            if item.start < other.end - 1e-12 and other.start < item.end - 1e-12:
                raise ParameterError(
                    f"pulse [{item.start:.4g}, {item.end:.4g}] ns overlaps "
                    f"[{other.start:.4g}, {other.end:.4g}] ns on {channel!r}",
                    context=make_context(__name__, "PulseSchedule.add", channel=channel),
                )
        pulses.append(item)
        pulses.sort(key=lambda p: p.start)
        return item

    def add_drive(
        self, channel: str, pulse: DrivePulse, start: Optional[float] = None
    ) -> ScheduledPulse:
        """Append ``pulse`` with the channel's current frame added to its phase."""
        frame = self.phase_frames.get(channel, 0.0)
        framed = pulse.with_phase(pulse.phase + frame) if frame else pulse
        begin = self.channel_end(channel) if start is None else start
        return self._insert(channel, ChannelKind.DRIVE, ScheduledPulse(begin, framed))

    def add_flux(
        self, channel: str, trajectory: FluxTrajectory, start: Optional[float] = None
    ) -> ScheduledPulse:
        begin = self.channel_end(channel) if start is None else start
        return self._insert(channel, ChannelKind.FLUX, ScheduledPulse(begin, trajectory))

    def shift_frame(self, channel: str, angle: float) -> None:
        """Virtual Z_angle on ``channel``: zero duration, later pulses shifted in phase."""
        self.phase_frames[channel] = self.phase_frames.get(channel, 0.0) + angle
        logger.debug(f"Frame of {channel} advanced by {angle:.6f} rad")

    def delay(self, channel: str, duration: float) -> None:
        """Leave ``channel`` idle for ``duration`` ns."""
        self.min_duration = max(self.min_duration, self.channel_end(channel) + duration)

    def drive_source(
        self, channel: str, omega_coupling: float, alpha: Optional[float] = None
    ) -> HamiltonianSource:
        """t ↦ 2×2 rotating-frame Hamiltonian of all pulses on a drive channel."""
        pulses = [p for p in self.channels.get(channel, []) if isinstance(p.pulse, DrivePulse)]

        def H(t: float) -> np.ndarray:
            total = np.zeros((2, 2), dtype=complex)
            for item in pulses:
                if item.start <= t <= item.end:
                    pulse = item.pulse
                    assert isinstance(pulse, DrivePulse)
                    eps = complex(complex_envelope(pulse, t - item.start, alpha))
                    scale = -0.5 * omega_coupling * pulse.envelope.amplitude
                    total += scale * np.array([[0.0, eps], [np.conj(eps), 0.0]])
            return total

        return H

    def flux_source(self, channel: str, idle: float) -> Callable[[float], float]:
        """t ↦ φ_e(t) on a flux channel, ``idle`` outside its pulses."""
        pulses = [
            p for p in self.channels.get(channel, []) if isinstance(p.pulse, FluxTrajectory)
        ]

        def phi(t: float) -> float:
            for item in pulses:
                if item.start <= t < item.end:
                    assert isinstance(item.pulse, FluxTrajectory)
                    return float(item.pulse(t - item.start))
            return idle

        return phi

    def waveform_table(
        self,
        channel: str,
        samples_per_ns: float = 1.0,
        alpha: Optional[float] = None,
    ) -> pd.DataFrame:
        """AWG-style samples ``t_ns, I, Q`` over the whole schedule.

        Drive channels give V₀·Re ε and V₀·Im ε; flux channels give φ_e in I.
        """
        if channel not in self.channels:
            raise ParameterError(
                f"unknown channel {channel!r}",
                context=make_context(__name__, "PulseSchedule.waveform_table"),
            )
        count = int(np.floor(self.total_duration * samples_per_ns)) + 1
        t = np.arange(count) / samples_per_ns
        i_part = np.zeros(count)
        q_part = np.zeros(count)
        for item in self.channels[channel]:
            window = (t >= item.start) & (t <= item.end)
            local = t[window] - item.start
            if isinstance(item.pulse, DrivePulse):
                eps = complex_envelope(item.pulse, local, alpha) * item.pulse.envelope.amplitude
                i_part[window] += eps.real
                q_part[window] += eps.imag
            else:
                i_part[window] = item.pulse(local)
        return pd.DataFrame({"t_ns": t, "I": i_part, "Q": q_part}, columns=WAVEFORM_COLUMNS)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready document with unit-suffixed keys."""
        channels: Dict[str, Any] = {}
        for name, pulses in self.channels.items():
            entries = []
            for item in pulses:
                if isinstance(item.pulse, DrivePulse):
                    body = _drive_to_dict(item.pulse)
                else:
                    body = item.pulse.to_dict()
                entries.append({"start_ns": item.start, **body})
            channels[name] = {"kind": self.kinds[name].value, "pulses": entries}
        return {
            "total_duration_ns": self.total_duration,
            "phase_frames_rad": dict(self.phase_frames),
            "channels": channels,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PulseSchedule":
        schedule = cls(
            phase_frames={k: float(v) for k, v in data.get("phase_frames_rad", {}).items()},
            min_duration=float(data.get("total_duration_ns", 0.0)),
        )
        for name, channel in data.get("channels", {}).items():
            kind = ChannelKind(channel["kind"])
            for entry in channel["pulses"]:
                pulse: Union[DrivePulse, FluxTrajectory]
                if kind == ChannelKind.DRIVE:
                    pulse = _drive_from_dict(entry)
                else:
                    pulse = FluxTrajectory.from_dict(entry)
                schedule._insert(name, kind, ScheduledPulse(float(entry["start_ns"]), pulse))
        return schedule


def _drive_to_dict(pulse: DrivePulse) -> Dict[str, Any]:
    env = pulse.envelope
    return {
        "envelope": {
            "kind": env.kind.value,
            "duration_ns": env.duration,
            "amplitude_V": env.amplitude,
            "sigma_ns": env.sigma,
            "rise_ns": env.rise,
            "samples": [list(s) for s in env.samples],
        },
        "detuning_rad_per_ns": pulse.detuning,
        "phase_rad": pulse.phase,
        "drag_lambda": pulse.drag_lambda,
        "drag_detuning_rad_per_ns": pulse.drag_detuning,
    }


def _drive_from_dict(entry: Dict[str, Any]) -> DrivePulse:
    env = entry["envelope"]
    envelope = Envelope(
        kind=EnvelopeKind(env["kind"]),
        duration=float(env["duration_ns"]),
        amplitude=float(env["amplitude_V"]),
        sigma=env.get("sigma_ns"),
        rise=env.get("rise_ns"),
        samples=tuple((float(t), float(v)) for t, v in env.get("samples", [])),
    )
    return DrivePulse(
        envelope=envelope,
        detuning=float(entry.get("detuning_rad_per_ns", 0.0)),
        phase=float(entry.get("phase_rad", 0.0)),
        drag_lambda=float(entry.get("drag_lambda", 0.0)),
        drag_detuning=float(entry.get("drag_detuning_rad_per_ns", 0.0)),
    )
