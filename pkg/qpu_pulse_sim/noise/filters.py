"""Dynamical-decoupling filter functions and the filtered dephasing integral."""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike
from scipy import integrate

from ..config.config import NoiseQuadratureConfig
from ..core.errors import ErrorCode, NumericError, ParameterError, make_context
from .psd import NoisePSD, psd_eval

logger = logging.getLogger(__name__)

QUAD_LIMIT = 400
SEGMENTS_PER_DECADE = 4


@dataclass(frozen=True)
class PulseSequenceSpec:
    """π pulses at normalized centres δ_j inside a free-evolution time τ.

    Attributes:
        delta: pulse centres in (0, 1), strictly increasing
        tau: free-evolution time, μs
        tau_pi: π-pulse length, μs
    """

    delta: Tuple[float, ...]
    tau: float
    tau_pi: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "delta", tuple(float(d) for d in self.delta))
        d = np.asarray(self.delta)
        problems = []
        if len(d) and (np.any(d <= 0) or np.any(d >= 1) or np.any(np.diff(d) <= 0)):
            problems.append("delta must be strictly increasing inside (0, 1)")
        if not self.tau > 0:
            problems.append("tau must be > 0")
        if self.tau_pi < 0:
            problems.append("tau_pi must be >= 0")
        if problems:
            raise ParameterError(
                "; ".join(problems),
                field_errors={"sequence": problems},
                context=make_context(__name__, "PulseSequenceSpec", N=len(d)),
            )

    @property
    def N(self) -> int:
        return len(self.delta)

    @property
    def total_length(self) -> float:
        """τ + N·τ_π, μs."""
        return self.tau + self.N * self.tau_pi

    @classmethod
    def ramsey(cls, tau: float) -> "PulseSequenceSpec":
        return cls((), tau)

    @classmethod
    def hahn(cls, tau: float, tau_pi: float = 0.0) -> "PulseSequenceSpec":
        return cls((0.5,), tau, tau_pi)

    @classmethod
    def cpmg(cls, N: int, tau: float, tau_pi: float = 0.0) -> "PulseSequenceSpec":
        """N equally spaced π pulses, δ_j = (j − ½)/N."""
        if N < 0:
            raise ParameterError(
                f"CPMG needs N >= 0 pulses, got {N}",
                context=make_context(__name__, "PulseSequenceSpec.cpmg", N=N),
            )
        return cls(tuple((j - 0.5) / N for j in range(1, N + 1)), tau, tau_pi)

    def with_tau(self, tau: float) -> "PulseSequenceSpec":
        return PulseSequenceSpec(self.delta, tau, self.tau_pi)


def filter_function(seq: PulseSequenceSpec, omega: ArrayLike) -> Union[float, np.ndarray]:
    """g_N(ω, τ) for ω in rad/s.

    g_N = |1 + (−1)^{1+N}e^{iωτ} + 2Σ_j(−1)^j e^{iωδ_jτ}cos(ωτ_π/2)|²/(ωτ)².
    The bracket vanishes at ω = 0, so it is evaluated as a sum of
    e^{ix} − 1 terms; ω = 0 takes the analytic limit
    |(−1)^{1+N} + 2Σ_j(−1)^jδ_j|².
    """
    w = np.asarray(omega, dtype=float)
    tau = seq.tau * 1e-6
    tau_pi = seq.tau_pi * 1e-6
    x = w * tau
    signs = np.array([(-1.0) ** j for j in range(1, seq.N + 1)])
    deltas = np.asarray(seq.delta)
    edge = (-1.0) ** (1 + seq.N)

    # 1 + edge + 2Σ(−1)^j = 0 for every N
    cos_minus_one = -2.0 * np.sin(w * tau_pi / 4.0) ** 2
    bracket = edge * np.expm1(1j * x)
    if seq.N:
        phases = np.expm1(1j * np.multiply.outer(x, deltas))
        cos_pi = 1.0 + cos_minus_one
        bracket = bracket + 2.0 * cos_pi * (phases @ signs) + 2.0 * cos_minus_one * signs.sum()
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.abs(bracket) ** 2 / x**2
    limit = (edge + 2.0 * float(signs @ deltas)) ** 2 if seq.N else 1.0
    values = np.where(x == 0.0, limit, values)
    if np.ndim(omega) == 0:
        return float(values)
    return values


def _quad_log(fn, f_lo: float, f_hi: float, operation: str) -> float:
    """∫ fn(f) df over [f_lo, f_hi] in log f, split into sub-decade segments.

    Segments are integrated from the top down; once a total exists, each
    segment only needs to be resolved relative to it.
    """
    u_lo, u_hi = math.log(f_lo), math.log(f_hi)
    segments = max(1, int(math.ceil((u_hi - u_lo) / math.log(10.0) * SEGMENTS_PER_DECADE)))
    edges = np.linspace(u_lo, u_hi, segments + 1)
    total = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        for a, b in zip(edges[-2::-1], edges[:0:-1]):
            try:
                value, _ = integrate.quad(
                    lambda u: fn(math.exp(u)) * math.exp(u), a, b, limit=QUAD_LIMIT, epsabs=1e-10 * abs(total), epsrel=1e-7
                )
            except integrate.IntegrationWarning as exc:
                raise NumericError(
                    f"dephasing quadrature failed on [{math.exp(a):.3g}, {math.exp(b):.3g}] Hz: {exc}",
                    code=ErrorCode.QUADRATURE_FAILURE,
                    context=make_context(__name__, operation),
                    diagnostics={"f_lo_Hz": math.exp(a), "f_hi_Hz": math.exp(b)},
                ) from exc
            total += value
    return total


def coherence_function(
    psd: NoisePSD,
    seq: PulseSequenceSpec,
    dOmega_dLambda: float,
    quadrature: Optional[NoiseQuadratureConfig] = None,
) -> float:
    """χ_N(τ) = (τ²/2)(∂ω_q/∂λ)²∫g_N(ω,τ)S(ω)dω/2π.

    The integral runs over both signs of ω inside the band
    ω_ir/2π = 1/(10·wall time), ω_uv/2π = uv_factor/τ.

    Args:
        psd: two-sided noise density
        seq: pulse sequence; τ in μs
        dOmega_dLambda: qubit sensitivity, rad/s per noise unit
        quadrature: cutoff settings (defaults from ``NoiseQuadratureConfig``)

    Raises:
        NumericError: quadrature-failure when the adaptive integral does not converge
    """
    q = quadrature or NoiseQuadratureConfig()
    tau_s = seq.tau * 1e-6
    f_ir = 1.0 / (10.0 * q.wall_time_s)
    f_uv = q.uv_factor / tau_s
    if dOmega_dLambda == 0.0 or f_uv <= f_ir:
        return 0.0

    def integrand(f: float) -> float:
        w = 2.0 * math.pi * f
        return float(filter_function(seq, w)) * float(psd_eval(psd, w))

    one_side = _quad_log(integrand, f_ir, f_uv, "coherence_function")
    chi = tau_s**2 / 2.0 * dOmega_dLambda**2 * 2.0 * one_side
    logger.debug(f"χ_{seq.N}(τ={seq.tau:.4g} μs) = {chi:.4e}")
    return float(chi)


def coherence_decay(
    psd: NoisePSD,
    seq: PulseSequenceSpec,
    dOmega_dLambda: float,
    quadrature: Optional[NoiseQuadratureConfig] = None,
) -> float:
    """Ensemble decay factor e^{−χ_N(τ)}."""
    return math.exp(-coherence_function(psd, seq, dOmega_dLambda, quadrature))
