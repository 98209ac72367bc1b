"""Microwave drive pulses, DRAG shaping and drive Hamiltonians.

Rates are angular (rad/ns), times in ns. ``omega_coupling`` is the drive
coupling Ω in rad/(ns·V), so Ω·V₀ is a Rabi rate.
"""

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple, Union

import numpy as np

from ..core.errors import ErrorCode, ParameterError, make_context
from ..core.operators import Basis, HermitianOperator, annihilation
from ..device.circuits import DuffingParams, QubitCircuitParams
from ..device.hamiltonians import build_duffing_hamiltonian, build_hamiltonian
from ..device.spectrum import spectrum
from .envelopes import Envelope

HamiltonianSource = Callable[[float], np.ndarray]


@dataclass(frozen=True)
class DrivePulse:
    """IQ drive pulse.

    Attributes:
        envelope: V₀·s(t)
        detuning: carrier detuning δω from the frame frequency, rad/ns
        phase: IQ phase φ, rad
        drag_lambda: DRAG scale λ (0 disables DRAG)
        drag_detuning: DRAG frequency detuning δf, rad/ns
    """

    envelope: Envelope
    detuning: float = 0.0
    phase: float = 0.0
    drag_lambda: float = 0.0
    drag_detuning: float = 0.0

    @property
    def I(self) -> float:  # noqa: E743
        return math.cos(self.phase)

    @property
    def Q(self) -> float:
        return math.sin(self.phase)

    @property
    def duration(self) -> float:
        return self.envelope.duration

    def with_phase(self, phase: float) -> "DrivePulse":
        return replace(self, phase=phase)


def drag_waveform(
    pulse: DrivePulse, alpha: float, t: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """DRAG quadratures I′ = s(t), Q′ = λṡ(t)/α, rotated by e^{iδf t}.

    Args:
        pulse: pulse with ``drag_lambda`` and ``drag_detuning``
        alpha: qubit anharmonicity, rad/ns
        t: sample times, ns

    Returns:
        (I′, Q′) dimensionless sample arrays

    Raises:
        ParameterError: invalid-params for α = 0
    """
    if alpha == 0.0:
        raise ParameterError(
            "DRAG needs a non-zero anharmonicity",
            context=make_context(__name__, "drag_waveform", alpha=alpha),
        )
    t = np.asarray(t, dtype=float)
    shaped = pulse.envelope.shape(t) + 1j * pulse.drag_lambda * pulse.envelope.derivative(t) / alpha
    if pulse.drag_detuning != 0.0:
        shaped = shaped * np.exp(1j * pulse.drag_detuning * t)
    return shaped.real, shaped.imag


def complex_envelope(
    pulse: DrivePulse, t: Union[float, np.ndarray], alpha: Optional[float] = None
) -> np.ndarray:
    """ε(t) = (I′ + iQ′)·e^{i(δω t + φ)}, dimensionless."""
    t_arr = np.asarray(t, dtype=float)
    if pulse.drag_lambda != 0.0:
        if alpha is None:
            raise ParameterError(
                "DRAG pulses need the anharmonicity",
                context=make_context(__name__, "complex_envelope"),
            )
        i_part, q_part = drag_waveform(pulse, alpha, t_arr)
        base = i_part + 1j * q_part
    else:
        base = pulse.envelope.shape(t_arr).astype(complex)
    return base * np.exp(1j * (pulse.detuning * t_arr + pulse.phase))


def rwa_drive_hamiltonian(
    pulse: DrivePulse, omega_coupling: float, t: float, alpha: Optional[float] = None
) -> HermitianOperator:
    """Two-level rotating-frame drive −(ΩV₀/2)[[0, ε],[ε*, 0]].

    With ε = s(t)e^{i(δω t+φ)} this is −(ΩV₀s/2)(cos φ σ_x − sin φ σ_y) at δω = 0:
    φ = 0 gives −(ΩV₀s/2)σ_x and φ = π/2 gives +(ΩV₀s/2)σ_y.
    """
    eps = complex(complex_envelope(pulse, t, alpha))
    scale = -0.5 * omega_coupling * pulse.envelope.amplitude
    H = scale * np.array([[0.0, eps], [np.conj(eps), 0.0]], dtype=complex)
    return HermitianOperator(matrix=H, basis=Basis.OSCILLATOR, truncation={"levels": 2})


def rwa_drive_source(
    pulse: DrivePulse, omega_coupling: float, alpha: Optional[float] = None, start: float = 0.0
) -> HamiltonianSource:
    """t ↦ 2×2 rotating-frame drive matrix for the evolver."""
    scale = -0.5 * omega_coupling * pulse.envelope.amplitude

    def H(t: float) -> np.ndarray:
        eps = complex(complex_envelope(pulse, t - start, alpha))
        return scale * np.array([[0.0, eps], [np.conj(eps), 0.0]], dtype=complex)

    return H


def rabi_angle(
    pulse: DrivePulse, omega_coupling: float, t: Optional[float] = None, dt: float = 0.01
) -> float:
    """Θ(t) = −ΩV₀∫₀ᵗ s(t′)dt′ (Simpson's rule, matching RK4 on a scalar drive)."""
    return -omega_coupling * pulse.envelope.amplitude * pulse.envelope.area(t, dt=dt)


def calibrate_amplitude(
    pulse: DrivePulse, omega_coupling: float, target_angle: float, dt: float = 0.01
) -> DrivePulse:
    """Return ``pulse`` with V₀ set so that Θ(T) = ``target_angle``."""
    area = pulse.envelope.area(dt=dt)
    if area == 0.0 or omega_coupling == 0.0:
        raise ParameterError(
            "cannot calibrate a pulse with zero area or zero coupling",
            context=make_context(__name__, "calibrate_amplitude"),
        )
    amplitude = -target_angle / (omega_coupling * area)
    return replace(pulse, envelope=pulse.envelope.with_amplitude(amplitude))


def _as_duffing(device: Union[QubitCircuitParams, DuffingParams]) -> DuffingParams:
    if isinstance(device, DuffingParams):
        return device
    return DuffingParams.from_spectrum(spectrum(build_hamiltonian(device), k=3))


def drive_hamiltonian_source(
    device: Union[QubitCircuitParams, DuffingParams],
    pulse: DrivePulse,
    levels: int,
    omega_coupling: float,
    drive_frequency: Optional[float] = None,
    frame: str = "lab",
) -> HamiltonianSource:
    """t ↦ multilevel Duffing drive Hamiltonian in rad/ns.

    lab: ω_q n + (α/2)n(n−1) + ΩV_d(t)·i(a − a†), V_d = −V₀ Im[ε(t)e^{iω_d t}]
    rotating (at ω_d): (ω_q−ω_d)n + (α/2)n(n−1) − (ΩV₀/2)(εa + ε*a†)

    DRAG quadratures use the device anharmonicity.

    Raises:
        ParameterError: invalid-truncation for levels < 2
    """
    if levels < 2:
        raise ParameterError(
            f"need at least two levels, got {levels}",
            code=ErrorCode.INVALID_TRUNCATION,
            context=make_context(__name__, "build_drive_hamiltonian_multilevel", levels=levels),
        )
    if frame not in ("lab", "rotating"):
        raise ParameterError(
            f"unknown frame {frame!r}",
            context=make_context(__name__, "build_drive_hamiltonian_multilevel", frame=frame),
        )
    duffing = _as_duffing(device)
    omega_d = duffing.omega_q if drive_frequency is None else drive_frequency
    a = annihilation(levels)
    adag = a.conj().T
    V0 = pulse.envelope.amplitude
    alpha = duffing.alpha

    if frame == "lab":
        H0 = build_duffing_hamiltonian(duffing, levels)
        charge = 1j * (a - adag)

        def H_lab(t: float) -> np.ndarray:
            eps = complex(complex_envelope(pulse, t, alpha))
            V_d = -V0 * (eps * np.exp(1j * omega_d * t)).imag
            return H0 + omega_coupling * V_d * charge

        return H_lab

    H0_rot = build_duffing_hamiltonian(
        DuffingParams(omega_q=duffing.omega_q - omega_d, alpha=alpha), levels
    )

    def H_rot(t: float) -> np.ndarray:
        eps = complex(complex_envelope(pulse, t, alpha))
        return H0_rot - 0.5 * omega_coupling * V0 * (eps * a + np.conj(eps) * adag)

    return H_rot


def build_drive_hamiltonian_multilevel(
    device: Union[QubitCircuitParams, DuffingParams],
    pulse: DrivePulse,
    levels: int,
    t: float,
    omega_coupling: float,
    drive_frequency: Optional[float] = None,
    frame: str = "lab",
) -> HermitianOperator:
    """Multilevel drive Hamiltonian at a single time; see drive_hamiltonian_source."""
    source = drive_hamiltonian_source(
        device, pulse, levels, omega_coupling, drive_frequency, frame
    )
    return HermitianOperator(
        matrix=source(t), basis=Basis.OSCILLATOR, truncation={"levels": levels}
    )
