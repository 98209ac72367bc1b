"""Schrödinger evolution under time-dependent Hamiltonians.

Two fixed-step integrators share one interface:

* ``rk4``: classic 4th-order Runge-Kutta with substeps sized so that
  ‖H‖·h ≤ RK4_PHASE_PER_STEP on every grid interval.
* ``expm``: 4th-order Magnus (two Gauss points, one commutator) with one
  matrix exponential per grid interval, for stiff flux ramps.

Hamiltonians are in rad/ns and times in ns.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
import scipy.linalg as la

from ..config.config import NumericsConfig
from ..core.errors import ErrorCode, NumericError, ParameterError, make_context
from ..core.operators import HermitianOperator

logger = logging.getLogger(__name__)

OperatorLike = Union[np.ndarray, HermitianOperator]
OperatorSource = Callable[[float], OperatorLike]

STEPS_PER_PERIOD = 50
GRID_SAMPLES = 64
RK4_PHASE_PER_STEP = 0.01
NORM_TOL = 1e-8
METHODS = ("rk4", "expm")
DEFAULT_METHOD = NumericsConfig().evolution_method


@dataclass
class EvolutionResult:
    """States on the time grid.

    Attributes:
        times: grid, ns
        states: (n_times, dim) complex state vectors
        leakage: population outside the computational subspace per grid point
        propagator: final propagator U(t_end, t_0) when requested
    """

    times: np.ndarray
    states: np.ndarray
    leakage: np.ndarray
    propagator: Optional[np.ndarray] = None

    @property
    def final_state(self) -> np.ndarray:
        return np.asarray(self.states[-1])

    def populations(self) -> np.ndarray:
        """|ψ_k(t)|², shape (n_times, dim)."""
        return np.abs(self.states) ** 2

    def expectation(self, operator: np.ndarray) -> np.ndarray:
        """⟨ψ(t)|O|ψ(t)⟩ (real part) on the grid."""
        return np.real(np.einsum("ti,ij,tj->t", self.states.conj(), operator, self.states))


def _as_matrix(value: OperatorLike) -> np.ndarray:
    if isinstance(value, HermitianOperator):
        return value.dense()
    return np.asarray(value, dtype=complex)


def _evaluate(H_of_t: OperatorSource, t: float) -> np.ndarray:
    H = _as_matrix(H_of_t(t))
    if not np.all(np.isfinite(H)):
        raise NumericError(
            f"Hamiltonian is not finite at t = {t:.6g} ns",
            code=ErrorCode.NUMERIC_FAILURE,
            context=make_context(__name__, "evolve", t=t),
            diagnostics={"t": t},
        )
    return H


def spectral_frequency(H_of_t: OperatorSource, times: np.ndarray) -> float:
    """Largest eigenvalue spread of H over sampled times, in GHz."""
    count = min(GRID_SAMPLES, len(times))
    picks = np.unique(np.linspace(0, len(times) - 1, count).astype(int))
    spread = 0.0
    for t in times[picks]:
        eigenvalues = np.linalg.eigvalsh(_evaluate(H_of_t, float(t)))
        spread = max(spread, float(eigenvalues[-1] - eigenvalues[0]))
    return spread / (2.0 * math.pi)


def uniform_grid(
    H_of_t: OperatorSource, t0: float, t1: float, margin: float = 0.5
) -> np.ndarray:
    """Uniform grid on [t0, t1] whose step is ``margin`` times the allowed maximum."""
    probe = np.linspace(t0, t1, GRID_SAMPLES * 4)
    frequency = spectral_frequency(H_of_t, probe)
    if frequency == 0.0:
        return np.array([t0, t1])
    step = margin / (STEPS_PER_PERIOD * frequency)
    return np.linspace(t0, t1, max(2, int(math.ceil((t1 - t0) / step))) + 1)


def _check_grid(H_of_t: OperatorSource, times: np.ndarray) -> None:
    if times.ndim != 1 or len(times) < 2 or np.any(np.diff(times) <= 0):
        raise ParameterError(
            "time grid needs at least two strictly increasing points",
            code=ErrorCode.INVALID_GRID,
            context=make_context(__name__, "evolve", points=len(times)),
        )
    frequency = spectral_frequency(H_of_t, times)
    if frequency == 0.0:
        return
    limit = 1.0 / (STEPS_PER_PERIOD * frequency)
    dt = float(np.max(np.diff(times)))
    if dt > limit * (1.0 + 1e-9):
        raise ParameterError(
            f"grid step {dt:.4g} ns exceeds {limit:.4g} ns "
            f"({STEPS_PER_PERIOD} steps per period at {frequency:.4g} GHz)",
            code=ErrorCode.INVALID_GRID,
            context=make_context(
                __name__, "evolve", dt=dt, limit=limit, frequency_GHz=frequency
            ),
        )


def _rk4_interval(
    H_of_t: OperatorSource, y: np.ndarray, t0: float, t1: float, H0: np.ndarray
) -> np.ndarray:
    """Advance y from t0 to t1 with substeps; H0 = H(t0)."""
    H_mid = _evaluate(H_of_t, 0.5 * (t0 + t1))
    bound = max(np.linalg.norm(H0, 2), np.linalg.norm(H_mid, 2))
    substeps = max(1, int(math.ceil(bound * (t1 - t0) / RK4_PHASE_PER_STEP)))
    h = (t1 - t0) / substeps
    t = t0
    H_start = H0
    for _ in range(substeps):
        H_half = _evaluate(H_of_t, t + 0.5 * h)
        H_end = _evaluate(H_of_t, t + h)
        k1 = -1j * (H_start @ y)
        k2 = -1j * (H_half @ (y + 0.5 * h * k1))
        k3 = -1j * (H_half @ (y + 0.5 * h * k2))
        k4 = -1j * (H_end @ (y + h * k3))
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
        H_start = H_end
    return y


def magnus_step(H_of_t: OperatorSource, t0: float, t1: float) -> np.ndarray:
    """Fourth-order Magnus propagator over [t0, t1]."""
    h = t1 - t0
    offset = math.sqrt(3.0) / 6.0
    A1 = -1j * _evaluate(H_of_t, t0 + h * (0.5 - offset))
    A2 = -1j * _evaluate(H_of_t, t0 + h * (0.5 + offset))
    generator = 0.5 * h * (A1 + A2) + (math.sqrt(3.0) * h * h / 12.0) * (A2 @ A1 - A1 @ A2)
    return np.asarray(la.expm(generator))


def _leakage(states: np.ndarray, computational: Sequence[int]) -> np.ndarray:
    kept = np.sum(np.abs(states[:, list(computational)]) ** 2, axis=1)
    return np.clip(1.0 - kept, 0.0, 1.0)


def evolve(
    H_of_t: OperatorSource,
    psi0: np.ndarray,
    t_grid: np.ndarray,
    method: str = DEFAULT_METHOD,
    propagator: bool = False,
    computational: Optional[Sequence[int]] = None,
) -> EvolutionResult:
    """Integrate i dψ/dt = H(t)ψ on ``t_grid``.

    Args:
        H_of_t: callable returning H(t) as an array or HermitianOperator
        psi0: normalized initial state
        t_grid: strictly increasing times, ns
        method: "rk4" or "expm"
        propagator: also accumulate U(t_end, t_0); states are then U(t)ψ0
        computational: indices of the computational subspace, default the
            two lowest levels

    Returns:
        EvolutionResult

    Raises:
        ParameterError: invalid-grid when the step exceeds 1/(50·f_max) with
            f_max the largest spectral spread of H, invalid-params for an
            unnormalized psi0 or an unknown method
        NumericError: non-finite H or a norm drift above 1e-8
    """
    if method not in METHODS:
        raise ParameterError(
            f"unknown evolution method {method!r}, expected one of {METHODS}",
            context=make_context(__name__, "evolve", method=method),
        )
    times = np.asarray(t_grid, dtype=float)
    psi = np.asarray(psi0, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
        raise ParameterError(
            f"initial state norm {np.linalg.norm(psi):.12f} differs from 1",
            context=make_context(__name__, "evolve"),
        )
    _check_grid(H_of_t, times)

    dim = psi.shape[0]
    H_first = _evaluate(H_of_t, float(times[0]))
    if H_first.shape != (dim, dim):
        raise ParameterError(
            f"Hamiltonian shape {H_first.shape} does not match state dimension {dim}",
            code=ErrorCode.INVALID_OPERATOR,
            context=make_context(__name__, "evolve"),
        )

    y = np.eye(dim, dtype=complex) if propagator else psi.reshape(dim, 1)
    states = np.empty((len(times), dim), dtype=complex)
    states[0] = psi
    H_current = H_first
    for k in range(len(times) - 1):
        t0, t1 = float(times[k]), float(times[k + 1])
        if method == "rk4":
            y = _rk4_interval(H_of_t, y, t0, t1, H_current)
            H_current = _evaluate(H_of_t, t1)
        else:
            y = magnus_step(H_of_t, t0, t1) @ y
        states[k + 1] = (y @ psi) if propagator else y[:, 0]

    drift = float(np.max(np.abs(np.linalg.norm(states, axis=1) - 1.0)))
    if drift > NORM_TOL:
        raise NumericError(
            f"norm drift {drift:.2e} exceeds {NORM_TOL:.0e}; "
            "refine the grid or use method='expm'",
            context=make_context(__name__, "evolve", method=method),
            diagnostics={"norm_drift": drift, "method": method},
        )
    logger.debug(f"Evolved {dim}-level state over {len(times)} grid points ({method})")

    if computational is None:
        computational = range(min(2, dim))
    return EvolutionResult(
        times=times,
        states=states,
        leakage=_leakage(states, computational),
        propagator=y if propagator else None,
    )


def to_rotating_frame(
    H_lab: OperatorSource, frame_freqs: Union[np.ndarray, Sequence[float]]
) -> Callable[[float], np.ndarray]:
    """Move ``H_lab`` into the frame U = e^{iFt} of a diagonal generator F.

    H̃(t) = U H U† + i U̇ U† = U H(t) U† − F

    Args:
        H_lab: lab-frame Hamiltonian source
        frame_freqs: per-level frame rates (diagonal of F) or a diagonal matrix

    Raises:
        ParameterError: invalid-operator for a non-diagonal generator
    """
    F = np.asarray(frame_freqs)
    if F.ndim == 2:
        if np.any(np.abs(F - np.diag(np.diag(F))) > 0):
            raise ParameterError(
                "frame generator must be diagonal",
                code=ErrorCode.INVALID_OPERATOR,
                context=make_context(__name__, "to_rotating_frame"),
            )
        F = np.diag(F)
    freqs = np.real(F).astype(float)

    def H_rot(t: float) -> np.ndarray:
        phases = np.exp(1j * freqs * t)
        H = _as_matrix(H_lab(t))
        return np.asarray(phases[:, None] * H * phases.conj()[None, :] - np.diag(freqs))

    return H_rot
