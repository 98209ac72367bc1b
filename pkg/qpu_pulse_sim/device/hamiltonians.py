"""Circuit Hamiltonian builders for transmon, split transmon, flux qubit and fluxonium.

Classes:
    none

Functions:
    build_transmon_hamiltonian: charge-basis transmon / split transmon
    effective_josephson_energy: flux-tuned SQUID energy with asymmetry
    build_flux_qubit_hamiltonian: quasi-1D flux qubit on a periodic phase grid
    build_fluxonium_hamiltonian: fluxonium in the oscillator basis
    build_oscillator_hamiltonian: LC oscillator reference
    build_duffing_hamiltonian: truncated Duffing ladder
"""

import logging
import math
from typing import Optional

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from ..config.config import NumericsConfig
from ..core.errors import ErrorCode, ParameterError, make_context
from ..core.operators import Basis, HermitianOperator, annihilation, number
from ..core.units import TWO_PI
from .circuits import DuffingParams, FluxBias, QubitCircuitParams, QubitKind
from .spectrum import spectrum

logger = logging.getLogger(__name__)

MIN_CHARGE_CUTOFF = 5
MIN_GRID_POINTS = 201
MIN_FLUXONIUM_LEVELS = 20
_NUMERICS = NumericsConfig()
DEFAULT_CHARGE_CUTOFF = _NUMERICS.charge_cutoff
DEFAULT_GRID_POINTS = _NUMERICS.phase_grid_points
DEFAULT_FLUXONIUM_LEVELS = _NUMERICS.fluxonium_levels
CONVERGENCE_RTOL = _NUMERICS.convergence_rtol


def _require_kind(p: QubitCircuitParams, operation: str, *kinds: QubitKind) -> None:
    if p.kind not in kinds:
        raise ParameterError(
            f"{operation} expects kind in {[k.value for k in kinds]}, got {p.kind}",
            context=make_context(__name__, operation, kind=p.kind),
        )


def effective_josephson_energy(EJ_sum: float, d: float, bias: FluxBias) -> float:
    """E_JΣ·√(cos²φ_e + d²sin²φ_e) for an asymmetric SQUID.

    Raises:
        ParameterError: invalid-params when |d| > 1
    """
    if not abs(d) <= 1:
        raise ParameterError(
            f"|d| must be <= 1, got {d}",
            field_errors={"d": ["|d| must be <= 1"]},
            context=make_context(__name__, "effective_josephson_energy", d=d),
        )
    c = math.cos(bias.phi_e)
    s = math.sin(bias.phi_e)
    return EJ_sum * math.sqrt(c * c + d * d * s * s)


def build_transmon_hamiltonian(
    p: QubitCircuitParams,
    cutoff: int = DEFAULT_CHARGE_CUTOFF,
    bias: Optional[FluxBias] = None,
) -> HermitianOperator:
    """Charge-basis Hamiltonian 4E_C(n−n_g)² − E_J cos φ.

    cos φ is exact in the charge basis: ½(|n⟩⟨n+1| + h.c.). A split transmon
    uses the flux-tuned E_J at ``bias`` (zero flux when omitted).

    Args:
        p: transmon or split-transmon parameters
        cutoff: charge states −cutoff..+cutoff
        bias: SQUID flux bias for split transmons

    Returns:
        HermitianOperator of dimension 2·cutoff+1

    Raises:
        ParameterError: invalid-truncation for cutoff < 5
    """
    _require_kind(
        p, "build_transmon_hamiltonian", QubitKind.TRANSMON, QubitKind.SPLIT_TRANSMON
    )
    if cutoff < MIN_CHARGE_CUTOFF:
        raise ParameterError(
            f"charge cutoff must be >= {MIN_CHARGE_CUTOFF}, got {cutoff}",
            code=ErrorCode.INVALID_TRUNCATION,
            context=make_context(__name__, "build_transmon_hamiltonian", cutoff=cutoff),
        )

    EJ = p.EJ
    if p.kind == QubitKind.SPLIT_TRANSMON:
        EJ = effective_josephson_energy(p.EJ, p.d, bias or FluxBias(0.0))

    n = np.arange(-cutoff, cutoff + 1, dtype=float)
    H = np.diag(4.0 * p.EC * (n - p.ng) ** 2)
    hop = -0.5 * EJ * np.ones(len(n) - 1)
    H += np.diag(hop, k=1) + np.diag(hop, k=-1)
    return HermitianOperator(
        matrix=H.astype(complex),
        basis=Basis.CHARGE,
        truncation={"cutoff": cutoff, "n_g": p.ng, "EJ_eff": EJ},
    )


def flux_qubit_potential(p: QubitCircuitParams, bias: FluxBias, phi: np.ndarray) -> np.ndarray:
    """U(φ) = −E_J cos(2φ+φ_e) − 2γE_J cos φ."""
    return -p.EJ * np.cos(2.0 * phi + bias.phi_e) - 2.0 * p.gamma * p.EJ * np.cos(phi)


def phase_grid(points: int) -> np.ndarray:
    """Periodic grid over one 2π cell, [−π, π)."""
    return -np.pi + TWO_PI * np.arange(points) / points


def _flux_qubit_matrix(p: QubitCircuitParams, bias: FluxBias, points: int) -> sp.csr_matrix:
    phi = phase_grid(points)
    h = TWO_PI / points
    kinetic = 4.0 * p.EC / h**2
    main = 2.0 * kinetic + flux_qubit_potential(p, bias, phi)
    off = -kinetic * np.ones(points - 1)
    H = sp.diags([off, main, off], offsets=[-1, 0, 1], format="lil")
    # periodic boundary
    H[0, points - 1] = -kinetic
    H[points - 1, 0] = -kinetic
    return H.tocsr()


def build_flux_qubit_hamiltonian(
    p: QubitCircuitParams,
    bias: FluxBias,
    points: int = DEFAULT_GRID_POINTS,
    check_convergence: bool = True,
    rtol: float = CONVERGENCE_RTOL,
) -> HermitianOperator:
    """Quasi-1D flux qubit 4E_C n² − E_J cos(2φ+φ_e) − 2γE_J cos φ.

    n² = −∂²/∂φ² is discretized with second-order central differences on one
    periodic 2π cell. The convergence check compares ω₀₁ against a grid with
    half the points and extrapolates the second-order error to this grid.

    Raises:
        ParameterError: invalid-truncation for fewer than 201 points or when
            the estimated relative ω₀₁ error exceeds ``rtol``
    """
    _require_kind(p, "build_flux_qubit_hamiltonian", QubitKind.FLUX_QUBIT)
    if points < MIN_GRID_POINTS:
        raise ParameterError(
            f"phase grid needs >= {MIN_GRID_POINTS} points, got {points}",
            code=ErrorCode.INVALID_TRUNCATION,
            context=make_context(__name__, "build_flux_qubit_hamiltonian", points=points),
        )

    H = _flux_qubit_matrix(p, bias, points)
    if check_convergence:
        fine = spectrum(H, k=2).omega_01
        coarse = spectrum(_flux_qubit_matrix(p, bias, points // 2), k=2).omega_01
        estimated = abs(fine - coarse) / 3.0 / abs(fine)
        logger.debug(f"Flux qubit grid {points}: estimated ω01 error {estimated:.2e}")
        if estimated > rtol:
            raise ParameterError(
                f"phase grid of {points} points not converged "
                f"(estimated relative ω01 error {estimated:.2e} > {rtol:.1e})",
                code=ErrorCode.INVALID_TRUNCATION,
                context=make_context(
                    __name__,
                    "build_flux_qubit_hamiltonian",
                    points=points,
                    estimated_error=estimated,
                ),
            )
    return HermitianOperator(
        matrix=H,
        basis=Basis.PHASE_GRID,
        truncation={"points": points, "extent": (-math.pi, math.pi)},
    )


def _fluxonium_matrix(p: QubitCircuitParams, bias: FluxBias, levels: int) -> np.ndarray:
    EL = p.inductive_energy
    omega_p = math.sqrt(8.0 * EL * p.EC)
    phi_zpf = (2.0 * p.EC / EL) ** 0.25

    padded = levels + 20
    a = annihilation(padded)
    phi = phi_zpf * (a + a.conj().T)
    displacement = la.expm(1j * phi)[:levels, :levels]
    cos_term = 0.5 * (np.exp(1j * bias.phi_e) * displacement)
    cos_term = cos_term + cos_term.conj().T

    H = omega_p * (number(levels) + 0.5 * np.eye(levels)) - p.EJ * cos_term
    return 0.5 * (H + H.conj().T)


def build_fluxonium_hamiltonian(
    p: QubitCircuitParams,
    bias: FluxBias,
    levels: int = DEFAULT_FLUXONIUM_LEVELS,
    check_convergence: bool = True,
    rtol: float = CONVERGENCE_RTOL,
) -> HermitianOperator:
    """Fluxonium 4E_C n² − E_J cos(φ+φ_e) + ½E_L φ² in the LC oscillator basis.

    cos(φ+φ_e) is assembled from the matrix exponential of the φ operator.

    Raises:
        ParameterError: invalid-truncation for levels < 20 or when ω₀₁ moves
            by more than ``rtol`` (relative) with 10 extra levels
    """
    _require_kind(p, "build_fluxonium_hamiltonian", QubitKind.FLUXONIUM)
    if levels < MIN_FLUXONIUM_LEVELS:
        raise ParameterError(
            f"fluxonium needs >= {MIN_FLUXONIUM_LEVELS} levels, got {levels}",
            code=ErrorCode.INVALID_TRUNCATION,
            context=make_context(__name__, "build_fluxonium_hamiltonian", levels=levels),
        )

    H = _fluxonium_matrix(p, bias, levels)
    if check_convergence:
        base = spectrum(H, k=2).omega_01
        extended = spectrum(_fluxonium_matrix(p, bias, levels + 10), k=2).omega_01
        shift = abs(extended - base) / abs(base)
        if shift > rtol:
            raise ParameterError(
                f"fluxonium basis of {levels} levels not converged "
                f"(ω01 shift {shift:.2e} > {rtol:.1e})",
                code=ErrorCode.INVALID_TRUNCATION,
                context=make_context(
                    __name__, "build_fluxonium_hamiltonian", levels=levels, shift=shift
                ),
            )
    return HermitianOperator(
        matrix=H, basis=Basis.OSCILLATOR, truncation={"levels": levels}
    )


def build_oscillator_hamiltonian(EC: float, EL: float, levels: int) -> HermitianOperator:
    """LC oscillator 4E_C n² + ½E_L φ² = √(8E_L E_C)(a†a + ½)."""
    if not (EC > 0 and EL > 0) or levels < 2:
        raise ParameterError(
            "oscillator needs EC > 0, EL > 0 and at least two levels",
            context=make_context(__name__, "build_oscillator_hamiltonian"),
        )
    omega_p = math.sqrt(8.0 * EL * EC)
    H = omega_p * (number(levels) + 0.5 * np.eye(levels))
    return HermitianOperator(
        matrix=H, basis=Basis.OSCILLATOR, truncation={"levels": levels}
    )


def build_duffing_hamiltonian(device: DuffingParams, levels: int) -> np.ndarray:
    """Duffing ladder ω_q n + (α/2) n(n−1) in rad/ns."""
    n = np.arange(levels, dtype=float)
    return np.diag(device.omega_q * n + 0.5 * device.alpha * n * (n - 1)).astype(complex)


def build_hamiltonian(
    p: QubitCircuitParams,
    bias: Optional[FluxBias] = None,
    cutoff: int = DEFAULT_CHARGE_CUTOFF,
    points: int = DEFAULT_GRID_POINTS,
    levels: int = DEFAULT_FLUXONIUM_LEVELS,
    rtol: float = CONVERGENCE_RTOL,
) -> HermitianOperator:
    """Dispatch to the builder matching ``p.kind``."""
    bias = bias or FluxBias(0.0)
    if p.kind in (QubitKind.TRANSMON, QubitKind.SPLIT_TRANSMON):
        return build_transmon_hamiltonian(p, cutoff=cutoff, bias=bias)
    if p.kind == QubitKind.FLUX_QUBIT:
        return build_flux_qubit_hamiltonian(p, bias, points=points, rtol=rtol)
    return build_fluxonium_hamiltonian(p, bias, levels=levels, rtol=rtol)
