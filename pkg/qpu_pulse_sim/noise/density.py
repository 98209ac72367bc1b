"""Qubit density-matrix decay laws and a Lindblad reference integrator.

Density matrices are in the {|0⟩, |1⟩} basis; times in μs, detunings
δω = ω_q − ω_d in rad/μs.
"""

import math
from typing import Callable, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike
from scipy.integrate import solve_ivp

from ..core.errors import ErrorCode, NumericError, ParameterError, make_context
from .rates import DecoherenceRates

ChiSource = Union[Callable[[np.ndarray], np.ndarray], ArrayLike]
NORM_TOL = 1e-9


def _check_amplitudes(alpha: complex, beta: complex, operation: str) -> None:
    norm = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm - 1.0) > NORM_TOL:
        raise ParameterError(
            f"|α|² + |β|² = {norm:.12g}, expected 1",
            context=make_context(__name__, operation, norm=norm),
        )


def _assemble(
    alpha: complex,
    beta: complex,
    t: np.ndarray,
    gamma1: float,
    coherence: np.ndarray,
    delta_omega: float,
) -> np.ndarray:
    decay = np.exp(-gamma1 * t)
    rho = np.empty(t.shape + (2, 2), dtype=complex)
    rho[..., 0, 0] = 1.0 + (abs(alpha) ** 2 - 1.0) * decay
    rho[..., 1, 1] = abs(beta) ** 2 * decay
    rho[..., 0, 1] = alpha * np.conj(beta) * np.exp(1j * delta_omega * t) * coherence
    rho[..., 1, 0] = np.conj(rho[..., 0, 1])
    return rho


def bloch_redfield_rho(
    alpha: complex,
    beta: complex,
    rates: DecoherenceRates,
    delta_omega: float,
    t: ArrayLike,
) -> np.ndarray:
    """ρ(t) of α|0⟩ + β|1⟩ relaxing towards |0⟩ with exponential T₁ and T₂.

    Returns a 2×2 matrix for scalar ``t``, otherwise shape (len(t), 2, 2).
    Rates are validated on construction of ``DecoherenceRates``
    (Γ₂ ≥ Γ₁/2 there).
    """
    _check_amplitudes(alpha, beta, "bloch_redfield_rho")
    times = np.asarray(t, dtype=float)
    coherence = np.exp(-rates.Gamma2 * times)
    return _assemble(alpha, beta, times, rates.Gamma1, coherence, delta_omega)


def gaussian_chi(T_phi_G: float) -> Callable[[np.ndarray], np.ndarray]:
    """χ(t) = (t/T_φ,G)² of Gaussian 1/f dephasing."""
    return lambda t: (np.asarray(t, dtype=float) / T_phi_G) ** 2


def rho_with_1f(
    alpha: complex,
    beta: complex,
    Gamma1: float,
    chi_N: ChiSource,
    delta_omega: float,
    t: ArrayLike,
) -> np.ndarray:
    """ρ(t) with T₁ relaxation and a general coherence function χ_N(t).

    Off-diagonals carry e^{−Γ₁t/2}e^{−χ_N(t)}; ``chi_N`` is a callable of t
    or values sampled on ``t``.
    """
    _check_amplitudes(alpha, beta, "rho_with_1f")
    if Gamma1 < 0:
        raise ParameterError(
            "Γ₁ must be >= 0",
            code=ErrorCode.INVALID_RATES,
            context=make_context(__name__, "rho_with_1f", Gamma1=Gamma1),
        )
    times = np.asarray(t, dtype=float)
    chi = np.asarray(chi_N(times) if callable(chi_N) else chi_N, dtype=float)
    if chi.shape != times.shape:
        raise ParameterError(
            f"χ_N samples {chi.shape} do not match times {times.shape}",
            context=make_context(__name__, "rho_with_1f"),
        )
    coherence = np.exp(-Gamma1 * times / 2.0 - chi)
    return _assemble(alpha, beta, times, Gamma1, coherence, delta_omega)


def purity(rho: np.ndarray) -> Union[float, np.ndarray]:
    """Tr(ρ²) for one density matrix or a stack."""
    value = np.real(np.einsum("...ij,...ji->...", rho, rho))
    return float(value) if np.ndim(value) == 0 else value


def polarization(rho: np.ndarray) -> Union[float, np.ndarray]:
    """⟨σ_z⟩ = ρ₀₀ − ρ₁₁: +1 for |0⟩, −1 for |1⟩."""
    value = np.real(rho[..., 0, 0] - rho[..., 1, 1])
    return float(value) if np.ndim(value) == 0 else value


def lindblad_evolve(
    H: np.ndarray,
    rho0: np.ndarray,
    collapse: Sequence[np.ndarray],
    times: ArrayLike,
    rates: Optional[Sequence[float]] = None,
) -> np.ndarray:
    """Integrate dρ/dt = −i[H, ρ] + Σ γ_k(L_k ρ L_k† − ½{L_k†L_k, ρ}).

    H in rad/μs, times in μs; returns ρ at every time, shape (len(times), d, d).

    Raises:
        NumericError: numeric-failure when the integrator stops early
    """
    H = np.asarray(H, dtype=complex)
    d = H.shape[0]
    t = np.asarray(times, dtype=float)
    L = np.array(collapse, dtype=complex).reshape(-1, d, d)
    gammas = np.ones(len(L)) if rates is None else np.asarray(rates, dtype=float)
    L_dag = L.conj().transpose(0, 2, 1)
    L_sq = L_dag @ L
    g = gammas.reshape(-1, 1, 1)

    def rhs(_: float, y: np.ndarray) -> np.ndarray:
        rho = y.reshape(d, d)
        drho = -1j * (H @ rho - rho @ H)
        if len(L):
            drho = drho + np.sum(g * (L @ rho @ L_dag - 0.5 * (L_sq @ rho + rho @ L_sq)), axis=0)
        return drho.ravel()

    rho_init = np.asarray(rho0, dtype=complex)
    if rho_init.ndim == 1:
        rho_init = np.outer(rho_init, rho_init.conj())
    solution = solve_ivp(
        rhs, (t[0], t[-1]), rho_init.ravel(), t_eval=t, method="DOP853", rtol=1e-10, atol=1e-12
    )
    if not solution.success:
        raise NumericError(
            f"Lindblad integration failed: {solution.message}",
            context=make_context(__name__, "lindblad_evolve"),
            diagnostics={"t_reached": float(solution.t[-1]) if len(solution.t) else None},
        )
    result: np.ndarray = solution.y.T.reshape(-1, d, d)
    if math.isnan(float(np.abs(result).max())):
        raise NumericError("Lindblad integration produced NaN", context=make_context(__name__, "lindblad_evolve"))
    return result
