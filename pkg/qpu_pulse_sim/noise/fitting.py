"""Least-squares fits of decay curves with confidence intervals and AICc selection.

Decay models are parameterized by rates (1/μs) so that a vanishing rate
stays inside the Levenberg-Marquardt search space.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy import optimize, stats

from ..core.errors import FitError, make_context

logger = logging.getLogger(__name__)

CONFIDENCE = 0.95
RSS_FLOOR = 1e-30
FFT_PADDING = 16


def exponential(t: np.ndarray, a: float, b: float, gamma: float) -> np.ndarray:
    return a + b * np.exp(-gamma * t)


def gaussian_exponential(t: np.ndarray, a: float, b: float, gamma: float, sigma: float) -> np.ndarray:
    """a + b·exp(−Γt − (σt)²)."""
    return a + b * np.exp(-gamma * t - (sigma * t) ** 2)


def damped_cosine(
    t: np.ndarray, a: float, b: float, gamma: float, omega: float, phase: float
) -> np.ndarray:
    return a + b * np.exp(-gamma * t) * np.cos(omega * t + phase)


def gaussian_damped_cosine(
    t: np.ndarray, a: float, b: float, gamma: float, sigma: float, omega: float, phase: float
) -> np.ndarray:
    return a + b * np.exp(-gamma * t - (sigma * t) ** 2) * np.cos(omega * t + phase)


MODELS: Dict[str, Callable[..., np.ndarray]] = {
    "exponential": exponential,
    "gaussian_exponential": gaussian_exponential,
    "damped_cosine": damped_cosine,
    "gaussian_damped_cosine": gaussian_damped_cosine,
}


@dataclass
class FitResult:
    """Fitted parameters with standard errors and 95 % confidence intervals."""

    model: str
    params: Dict[str, float]
    stderr: Dict[str, float]
    ci95: Dict[str, List[float]]
    rss: float
    aicc: float
    n_points: int
    residuals: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))

    @property
    def decay_time(self) -> float:
        """1/e time of the fitted envelope, μs."""
        gamma = self.params.get("gamma", 0.0)
        sigma = abs(self.params.get("sigma", 0.0))
        if sigma == 0.0:
            return 1.0 / gamma if gamma > 0 else math.inf
        # positive root of Γt + (σt)² = 1
        return 2.0 / (gamma + math.sqrt(gamma**2 + 4.0 * sigma**2))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "model": self.model,
            "params": self.params,
            "stderr": self.stderr,
            "ci95": self.ci95,
            "rss": self.rss,
            "aicc": self.aicc,
            "n_points": self.n_points,
            "decay_time_us": self.decay_time,
        }


def aicc(rss: float, n: int, k: int) -> float:
    """Corrected Akaike information criterion for Gaussian residuals."""
    rss = max(rss, n * RSS_FLOOR)
    value = n * math.log(rss / n) + 2 * k
    if n - k - 1 > 0:
        value += 2 * k * (k + 1) / (n - k - 1)
    else:
        value = math.inf
    return value


def fit_model(
    model: str,
    t: np.ndarray,
    y: np.ndarray,
    p0: Sequence[float],
    sigma: Optional[np.ndarray] = None,
) -> FitResult:
    """Levenberg-Marquardt fit of one of ``MODELS``.

    Raises:
        FitError: fit-failure when the optimizer does not converge or the
            covariance is not finite
    """
    fn = MODELS[model]
    names = list(fn.__code__.co_varnames[1 : fn.__code__.co_argcount])
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    weights = None
    if sigma is not None and np.all(np.asarray(sigma) > 0):
        weights = np.asarray(sigma, dtype=float)
    try:
        popt, pcov = optimize.curve_fit(
            fn, t, y, p0=list(p0), sigma=weights, absolute_sigma=weights is not None, method="lm", maxfev=20000
        )
    except (RuntimeError, ValueError) as exc:
        raise FitError(
            f"{model} fit did not converge: {exc}",
            context=make_context(__name__, "fit_model", model=model, n_points=len(t)),
            residuals=y - fn(t, *p0),
        ) from exc
    residuals = y - fn(t, *popt)
    rss = float(np.sum(residuals**2))
    n, k = len(t), len(popt)
    if not np.all(np.isfinite(popt)):
        raise FitError(
            f"{model} fit returned non-finite parameters",
            context=make_context(__name__, "fit_model", model=model),
            residuals=residuals,
        )
    errors = np.sqrt(np.abs(np.diag(pcov))) if np.all(np.isfinite(pcov)) else np.zeros(k)
    quantile = stats.t.ppf(0.5 + CONFIDENCE / 2.0, max(n - k, 1))
    params = {name: float(v) for name, v in zip(names, popt)}
    stderr = {name: float(e) for name, e in zip(names, errors)}
    ci95 = {name: [float(v - quantile * e), float(v + quantile * e)] for name, v, e in zip(names, popt, errors)}
    return FitResult(
        model=model,
        params=params,
        stderr=stderr,
        ci95=ci95,
        rss=rss,
        aicc=aicc(rss, n, k),
        n_points=n,
        residuals=residuals,
    )


def _rate_guess(t: np.ndarray, y: np.ndarray, asymptote: float) -> float:
    """Log-slope estimate of a decay rate."""
    distance = np.abs(y - asymptote)
    usable = distance > 0.05 * distance.max()
    if usable.sum() >= 2 and np.ptp(t[usable]) > 0:
        slope = np.polyfit(t[usable], np.log(distance[usable]), 1)[0]
        if slope < 0:
            return float(-slope)
    return 1.0 / max(float(np.ptp(t)), 1e-12)


def fit_exponential_decay(t: np.ndarray, y: np.ndarray, sigma: Optional[np.ndarray] = None) -> FitResult:
    """a + b·e^{−Γt} with the asymptote seeded from the tail."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    tail = float(np.mean(y[-max(1, len(y) // 10):]))
    p0 = [tail, float(y[0] - tail), _rate_guess(t, y, tail)]
    return fit_model("exponential", t, y, p0, sigma)


def fit_dephasing_decay(
    t: np.ndarray, y: np.ndarray, sigma: Optional[np.ndarray] = None, asymptote: float = 0.0
) -> FitResult:
    """Exponential and Gaussian-times-exponential envelopes, chosen by AICc."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    exp_fit = fit_model("exponential", t, y, [asymptote, float(y[0] - asymptote), _rate_guess(t, y, asymptote)], sigma)
    try:
        gauss_fit = fit_model(
            "gaussian_exponential",
            t,
            y,
            [exp_fit.params["a"], exp_fit.params["b"], 0.5 * exp_fit.params["gamma"], 0.5 * abs(exp_fit.params["gamma"])],
            sigma,
        )
    except FitError:
        return exp_fit
    return select_model([exp_fit, gauss_fit])


def ramsey_frequency_guess(t: np.ndarray, y: np.ndarray) -> float:
    """Angular frequency (rad/μs) of the largest non-DC discrete Fourier peak."""
    t = np.asarray(t, dtype=float)
    grid = np.linspace(t[0], t[-1], len(t))
    samples = np.interp(grid, t, np.asarray(y, dtype=float))
    # zero padding refines the peak below one Fourier bin
    n_fft = FFT_PADDING * len(grid)
    spectrum = np.abs(np.fft.rfft(samples - samples.mean(), n=n_fft))
    freqs = np.fft.rfftfreq(n_fft, d=grid[1] - grid[0])
    if len(spectrum) < 2:
        return 0.0
    peak = int(np.argmax(spectrum[1:]) + 1)
    return float(2.0 * math.pi * freqs[peak])


def fit_ramsey(t: np.ndarray, y: np.ndarray, sigma: Optional[np.ndarray] = None) -> FitResult:
    """Detuned damped cosine, exponential or Gaussian-times-exponential envelope by AICc."""
    t = np.asarray(t, dtype=float)
    y = np.asarray(y, dtype=float)
    omega0 = ramsey_frequency_guess(t, y)
    amplitude = float(np.max(np.abs(y - y.mean())))
    envelope = np.abs(y - y.mean())
    gamma0 = _rate_guess(t, envelope, 0.0) if np.ptp(envelope) > 0 else 1.0 / float(np.ptp(t))
    candidates = []
    for phase in (0.0, math.pi):
        try:
            candidates.append(
                fit_model("damped_cosine", t, y, [float(y.mean()), amplitude, gamma0, omega0, phase], sigma)
            )
        except FitError as exc:
            logger.debug(f"Ramsey start phase {phase:.2f} failed: {exc.message}")
    if not candidates:
        raise FitError(
            "Ramsey fit failed for every starting phase",
            context=make_context(__name__, "fit_ramsey", n_points=len(t)),
            residuals=y - y.mean(),
        )
    best = min(candidates, key=lambda r: r.rss)
    p = best.params
    try:
        gauss = fit_model(
            "gaussian_damped_cosine",
            t,
            y,
            [p["a"], p["b"], 0.5 * p["gamma"], 0.5 * abs(p["gamma"]), p["omega"], p["phase"]],
            sigma,
        )
        candidates.append(gauss)
    except FitError:
        pass
    return select_model(candidates)


def select_model(results: Sequence[FitResult]) -> FitResult:
    """Lowest AICc wins."""
    best = min(results, key=lambda r: r.aicc)
    logger.debug(
        "AICc selection: " + ", ".join(f"{r.model}={r.aicc:.2f}" for r in results) + f" → {best.model}"
    )
    return best
