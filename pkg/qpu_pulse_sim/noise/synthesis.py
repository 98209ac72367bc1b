"""Time-domain noise realizations with a prescribed spectral density."""

import logging
from typing import Optional

import numpy as np

from ..core.errors import ParameterError, make_context
from .psd import NoisePSD, psd_eval

logger = logging.getLogger(__name__)


def _frequencies(n_samples: int, dt: float) -> np.ndarray:
    if n_samples < 2 or not dt > 0:
        raise ParameterError(
            "need n_samples >= 2 and dt > 0",
            context=make_context(__name__, "synthesize_noise", n_samples=n_samples, dt=dt),
        )
    return np.fft.fftfreq(n_samples, d=dt)


def _density_on_grid(psd: NoisePSD, freqs: np.ndarray) -> np.ndarray:
    density = np.zeros_like(freqs)
    nonzero = freqs != 0.0
    density[nonzero] = psd_eval(psd, 2.0 * np.pi * freqs[nonzero])
    return density


def band_variance(psd: NoisePSD, n_samples: int, dt: float) -> float:
    """Σ_{k≠0} S(f_k)Δf over the discrete two-sided grid of a realization."""
    freqs = _frequencies(n_samples, dt)
    return float(_density_on_grid(psd, freqs).sum() / (n_samples * dt))


def synthesize_noise(
    psd: NoisePSD,
    n_samples: int,
    dt: float,
    n_realizations: int = 1,
    rng: Optional[np.random.Generator] = None,
) -> np.ndarray:
    """Stationary real noise λ(t) whose two-sided density is ``psd``.

    White Gaussian samples are shaped in the Fourier domain by √(S(f)/dt);
    the DC bin is zeroed. Returns shape (n_realizations, n_samples).

    Args:
        psd: two-sided spectral density
        n_samples: samples per realization
        dt: sample spacing, s
        n_realizations: independent realizations
        rng: generator for the white samples
    """
    freqs = _frequencies(n_samples, dt)
    generator = rng or np.random.default_rng()
    white = generator.standard_normal((n_realizations, n_samples))
    shaping = np.sqrt(_density_on_grid(psd, freqs) / dt)
    realizations = np.fft.ifft(np.fft.fft(white, axis=1) * shaping, axis=1).real
    logger.debug(
        f"synthesized {n_realizations}×{n_samples} samples, target variance "
        f"{band_variance(psd, n_samples, dt):.4e}"
    )
    return realizations
