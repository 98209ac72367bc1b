"""Readout signal synthesis and two-stage heterodyne demodulation.

Times are in ns, sample rates in samples/ns and angular frequencies in
rad/ns. Sample n of a record sits at t_n = n/fs, measured from the moment
the probe switches on. Voltages are in volts at the chain output.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple, Union

import numpy as np
from scipy.ndimage import uniform_filter1d

from ..core.errors import ErrorCode, ParameterError, make_context
from ..core.units import K_B, TWO_PI
from .amplifier import AmplifierChain, system_noise_temperature
from .resonator import ResonatorParams, optimal_probe_frequency, ring_up

logger = logging.getLogger(__name__)

Z0_OHM = 50.0
MIN_IF_PERIODS = 2.0
CHAIN_BATCH_SHOTS = 1000
PHASOR_METHODS = ("analytic", "chain")


@dataclass(frozen=True)
class ProbeTone:
    """Readout drive: amplitude A_RO (V), carrier ω_RO (rad/ns), duration (ns)."""

    amplitude: float
    omega_ro: float
    duration: float

    def __post_init__(self) -> None:
        if not (self.amplitude >= 0 and self.omega_ro > 0 and self.duration > 0):
            raise ParameterError(
                f"invalid probe tone {self}",
                field_errors={"probe": ["amplitude >= 0, omega_ro > 0, duration > 0"]},
                context=make_context(__name__, "ProbeTone"),
            )


def noise_sigma(chain: AmplifierChain, fs: float) -> float:
    """Input-referred RMS noise voltage per sample, √(k_B T_sys Z₀ · fs/2).

    The Nyquist bandwidth fs/2 is converted from samples/ns to Hz.
    """
    t_sys = system_noise_temperature(chain)
    return math.sqrt(K_B * t_sys * Z0_OHM * fs * 1e9 / 2.0)


def _sample_times(n: int, fs: float) -> np.ndarray:
    return np.arange(n) / fs


def synthesize_readout_signal(
    r: ResonatorParams,
    probe: ProbeTone,
    qubit_state: int,
    chain: AmplifierChain,
    fs: float,
    rng: Optional[np.random.Generator] = None,
    n_shots: int = 1,
) -> np.ndarray:
    """Sampled RF voltage after the amplifier chain, shape (n_shots, n).

    v(t) = √G·A_RO·Re[S(t)e^{iω_RO t}] + √G·σ_v·ξ(t), where S(t) is the
    ring-up envelope of the qubit-state branch and ξ white Gaussian noise.
    """
    if not fs > 0 or n_shots < 1:
        raise ParameterError(
            f"invalid sampling: fs={fs}, n_shots={n_shots}",
            code=ErrorCode.INVALID_GRID,
            context=make_context(__name__, "synthesize_readout_signal", fs=fs),
        )
    if fs <= probe.omega_ro / math.pi:
        logger.warning(f"fs = {fs:g} samples/ns undersamples the {probe.omega_ro / TWO_PI:g} GHz carrier")
    settle = 5.0 / r.kappa
    if probe.duration < settle:
        logger.warning(f"probe duration {probe.duration:g} ns is shorter than the {settle:.3g} ns ring-up")

    n = int(round(probe.duration * fs))
    t = _sample_times(n, fs)
    gain = math.sqrt(chain.total_gain)
    envelope = ring_up(r, qubit_state, probe.omega_ro, t)
    clean = gain * probe.amplitude * np.real(envelope * np.exp(1j * probe.omega_ro * t))
    sigma = gain * noise_sigma(chain, fs)
    signal = np.broadcast_to(clean, (n_shots, n)).copy()
    if sigma > 0:
        generator = rng or np.random.default_rng()
        signal += generator.normal(0.0, sigma, size=(n_shots, n))
    return signal


def _lowpass_length(fs: float, omega_sum: float) -> int:
    length = max(int(round(fs * TWO_PI / omega_sum)), 1)
    return length if length % 2 else length + 1


def moving_average_gain(length: int, omega: float, fs: float) -> float:
    """Amplitude response sin(Lx)/(L·sin x), x = ω/(2fs), of a centered L-sample average."""
    x = 0.5 * omega / fs
    if length == 1 or math.isclose(math.sin(x), 0.0, abs_tol=1e-15):
        return 1.0
    return math.sin(length * x) / (length * math.sin(x))


def analog_downconvert(
    rf: np.ndarray,
    fs: float,
    omega_lo: float,
    lo_amplitude: float = 1.0,
    omega_if: float = 0.0,
    average_samples: Optional[int] = None,
) -> Tuple[np.ndarray, np.ndarray]:
    """Mix the RF record with the LO and low-pass filter to the IF band.

    I = LPF[v·A_LO cos ω_LO t], Q = LPF[−v·A_LO sin ω_LO t]. The low-pass is a
    centered odd-length moving average spanning one period of the sum
    frequency 2ω_LO + Ω_IF by default, so it leaves the IF phase untouched.
    """
    v = np.asarray(rf, dtype=float)
    t = _sample_times(v.shape[-1], fs)
    omega_sum = 2.0 * omega_lo + omega_if
    length = average_samples or (_lowpass_length(fs, omega_sum) if omega_sum > 0 else 1)
    if length < 1 or length % 2 == 0:
        raise ParameterError(
            f"moving-average length must be odd and positive, got {length}",
            field_errors={"average_samples": ["must be odd and positive"]},
            context=make_context(__name__, "analog_downconvert", length=length),
        )
    i_mixed = v * lo_amplitude * np.cos(omega_lo * t)
    q_mixed = -v * lo_amplitude * np.sin(omega_lo * t)
    if length == 1:
        return i_mixed, q_mixed
    return (
        uniform_filter1d(i_mixed, size=length, axis=-1, mode="nearest"),
        uniform_filter1d(q_mixed, size=length, axis=-1, mode="nearest"),
    )


@dataclass(frozen=True)
class IQRecord:
    """IF-band quadrature record and the integration window [n₁, n₂)."""

    fs: float
    samples_I: np.ndarray
    samples_Q: np.ndarray
    omega_if: float
    window: Tuple[int, int]
    phasor: Optional[Union[complex, np.ndarray]] = None

    def __post_init__(self) -> None:
        n1, n2 = self.window
        length = np.shape(self.samples_I)[-1]
        problems = []
        if np.shape(self.samples_I) != np.shape(self.samples_Q):
            problems.append("samples_I and samples_Q differ in shape")
        if not 0 <= n1 < n2 <= length:
            problems.append(f"window {self.window} outside record of {length} samples")
        if not self.fs > 2.0 * abs(self.omega_if) / TWO_PI:
            problems.append(f"fs = {self.fs:g} cannot resolve the IF")
        if problems:
            raise ParameterError(
                "; ".join(problems),
                code=ErrorCode.INVALID_GRID,
                field_errors={"record": problems},
                context=make_context(__name__, "IQRecord", window=self.window, fs=self.fs),
            )

    @property
    def n_samples(self) -> int:
        return self.window[1] - self.window[0]


def heterodyne_demodulate(rec: IQRecord) -> Union[complex, np.ndarray]:
    """Digital demodulation: mean over the window of (I + jQ)e^{−jΩ_IF t_n}.

    Works on single records or on stacks of shots along the leading axis.
    Ω_IF = 0 is the homodyne case, where the phasor is the windowed mean of
    I + jQ.

    Raises:
        ParameterError: insufficient-window when the window holds fewer
            than two IF periods
    """
    n1, n2 = rec.window
    if rec.omega_if != 0.0:
        periods = rec.n_samples / rec.fs * abs(rec.omega_if) / TWO_PI
        if periods < MIN_IF_PERIODS:
            raise ParameterError(
                f"window spans {periods:.2f} IF periods, need {MIN_IF_PERIODS:g}",
                code=ErrorCode.INSUFFICIENT_WINDOW,
                context=make_context(__name__, "heterodyne_demodulate", window=rec.window),
            )
    t = _sample_times(n2, rec.fs)[n1:n2]
    z = np.asarray(rec.samples_I)[..., n1:n2] + 1j * np.asarray(rec.samples_Q)[..., n1:n2]
    phasor = np.mean(z * np.exp(-1j * rec.omega_if * t), axis=-1)
    return complex(phasor) if np.ndim(phasor) == 0 else phasor


@dataclass(frozen=True)
class ReadoutSetup:
    """A complete single-resonator readout configuration.

    Attributes:
        resonator: resonator parameters
        chain: amplifier chain setting T_sys and the voltage gain
        amplitude: probe amplitude A_RO, V
        tau_rd: wait between probe turn-on and the window, ns
        tau_s: integration window, ns
        fs: sample rate, samples/ns
        omega_if: intermediate frequency Ω_IF, rad/ns
        omega_ro: probe frequency, rad/ns; the branch midpoint when None
        lo_amplitude: LO amplitude A_LO
    """

    resonator: ResonatorParams
    chain: AmplifierChain
    amplitude: float
    tau_rd: float
    tau_s: float
    fs: float = 2.0
    omega_if: float = 0.0
    omega_ro: Optional[float] = None
    lo_amplitude: float = 1.0

    def __post_init__(self) -> None:
        errors = {}
        if not self.amplitude >= 0:
            errors["amplitude"] = ["must be >= 0"]
        if not self.tau_rd >= 0:
            errors["tau_rd"] = ["must be >= 0"]
        if not self.tau_s > 0:
            errors["tau_s"] = ["must be > 0"]
        if not self.fs > 0:
            errors["fs"] = ["must be > 0"]
        if errors:
            raise ParameterError(
                f"invalid readout setup: {errors}",
                field_errors=errors,
                context=make_context(__name__, "ReadoutSetup"),
            )
        n1, n2 = self.window
        if n2 - n1 < 2:
            raise ParameterError(
                f"window of {n2 - n1} samples",
                code=ErrorCode.INSUFFICIENT_WINDOW,
                field_errors={"tau_s": ["window must hold at least two samples"]},
                context=make_context(__name__, "ReadoutSetup", tau_s=self.tau_s, fs=self.fs),
            )

    @property
    def probe_frequency(self) -> float:
        return self.omega_ro if self.omega_ro is not None else optimal_probe_frequency(self.resonator)

    @property
    def omega_lo(self) -> float:
        return self.probe_frequency - self.omega_if

    @property
    def window(self) -> Tuple[int, int]:
        n1 = int(round(self.tau_rd * self.fs))
        return n1, n1 + int(round(self.tau_s * self.fs))

    @property
    def lowpass_length(self) -> int:
        """Moving-average length nulling the sum frequency 2ω_LO + Ω_IF."""
        omega_sum = 2.0 * self.omega_lo + self.omega_if
        return _lowpass_length(self.fs, omega_sum) if omega_sum > 0 else 1

    @property
    def lowpass_gain(self) -> float:
        """Gain of the analog low-pass at the IF; 1 for homodyne."""
        return moving_average_gain(self.lowpass_length, self.omega_if, self.fs)

    @property
    def record_samples(self) -> int:
        """Window end plus room for the analog low-pass kernel."""
        return self.window[1] + self.lowpass_length

    @property
    def duration(self) -> float:
        return self.record_samples / self.fs

    def probe(self) -> ProbeTone:
        return ProbeTone(self.amplitude, self.probe_frequency, self.duration)

    def with_amplitude(self, amplitude: float) -> "ReadoutSetup":
        return replace(self, amplitude=amplitude)


def record_signal(
    setup: ReadoutSetup,
    qubit_state: int,
    rng: Optional[np.random.Generator] = None,
    n_shots: int = 1,
) -> IQRecord:
    """Full sampled chain: synthesis, analog mixing and the IQ record."""
    rf = synthesize_readout_signal(
        setup.resonator, setup.probe(), qubit_state, setup.chain, setup.fs, rng, n_shots
    )
    i_if, q_if = analog_downconvert(
        rf, setup.fs, setup.omega_lo, setup.lo_amplitude, setup.omega_if, setup.lowpass_length
    )
    return IQRecord(setup.fs, i_if, q_if, setup.omega_if, setup.window)


def expected_phasor(setup: ReadoutSetup, qubit_state: int) -> complex:
    """Noise-free demodulated phasor (A_RO·A_LO/2)·√G·H(Ω_IF)·⟨S(t_n)⟩ over the window.

    Ring-up inside the window is included, and H(Ω_IF) is the analog
    low-pass gain at the IF, so the value matches the sampled chain.
    """
    n1, n2 = setup.window
    t = _sample_times(n2, setup.fs)[n1:n2]
    envelope = ring_up(setup.resonator, qubit_state, setup.probe_frequency, t)
    scale = 0.5 * setup.amplitude * setup.lo_amplitude * math.sqrt(setup.chain.total_gain) * setup.lowpass_gain
    return complex(scale * np.mean(envelope))


def phasor_noise_std(setup: ReadoutSetup) -> float:
    """Per-quadrature std of a demodulated phasor, A_LO·√G·H(Ω_IF)·σ_v/√(2M).

    The white noise near the probe carrier passes the low-pass with the
    same gain H(Ω_IF) as the signal, so the SNR does not depend on it.
    """
    n1, n2 = setup.window
    sigma_v = noise_sigma(setup.chain, setup.fs)
    gain = setup.lo_amplitude * math.sqrt(setup.chain.total_gain) * setup.lowpass_gain
    return gain * sigma_v / math.sqrt(2.0 * (n2 - n1))


def readout_phasors(
    setup: ReadoutSetup,
    qubit_state: int,
    n_shots: int,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """Per-shot demodulated phasors from the analytic shot model."""
    generator = rng or np.random.default_rng()
    std = phasor_noise_std(setup)
    noise = generator.normal(0.0, std, n_shots) + 1j * generator.normal(0.0, std, n_shots)
    return expected_phasor(setup, qubit_state) + noise


def chain_phasors(
    setup: ReadoutSetup,
    qubit_state: int,
    n_shots: int,
    rng: Optional[np.random.Generator] = None,
    batch: int = CHAIN_BATCH_SHOTS,
) -> np.ndarray:
    """Per-shot phasors from the sampled chain: synthesis, mixing and demodulation.

    Shots are generated ``batch`` at a time to bound the record memory.
    """
    generator = rng or np.random.default_rng()
    phasors = np.empty(n_shots, dtype=complex)
    for start in range(0, n_shots, batch):
        count = min(batch, n_shots - start)
        record = record_signal(setup, qubit_state, generator, n_shots=count)
        phasors[start : start + count] = heterodyne_demodulate(record)
    logger.debug(f"Demodulated {n_shots} chain shots of state {qubit_state}")
    return phasors


def simulate_phasors(
    setup: ReadoutSetup,
    qubit_state: int,
    n_shots: int,
    rng: Optional[np.random.Generator] = None,
    method: str = "analytic",
) -> np.ndarray:
    """Shot phasors from the analytic model or the full sampled chain."""
    if method == "analytic":
        return readout_phasors(setup, qubit_state, n_shots, rng)
    if method == "chain":
        return chain_phasors(setup, qubit_state, n_shots, rng)
    raise ParameterError(
        f"unknown phasor method {method!r}, expected {PHASOR_METHODS}",
        field_errors={"method": [f"must be one of {list(PHASOR_METHODS)}"]},
        context=make_context(__name__, "simulate_phasors", method=method),
    )


def expected_snr(setup: ReadoutSetup) -> float:
    """|μ₁ − μ₀|/(√2·σ) for the analytic shot model."""
    separation = abs(expected_phasor(setup, 1) - expected_phasor(setup, 0))
    std = phasor_noise_std(setup)
    if std == 0.0:
        return math.inf if separation > 0 else 0.0
    return separation / (math.sqrt(2.0) * std)


def amplitude_for_snr(setup: ReadoutSetup, target_snr: float) -> float:
    """Probe amplitude giving ``target_snr``; SNR is linear in A_RO."""
    unit = expected_snr(setup.with_amplitude(1.0))
    if not (target_snr >= 0 and math.isfinite(unit) and unit > 0):
        raise ParameterError(
            f"cannot reach SNR {target_snr} (unit-amplitude SNR {unit})",
            field_errors={"snr": ["target must be >= 0 with finite noise and separable states"]},
            context=make_context(__name__, "amplitude_for_snr", target=target_snr),
        )
    return target_snr / unit
