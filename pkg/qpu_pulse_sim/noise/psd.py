"""Noise power spectral densities S_λ(ω).

All densities are two-sided, in (noise unit)²/Hz, and even in ω. Angular
frequencies are in rad/s; 1/f amplitudes are quoted at ω/2π = 1 Hz.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike

from ..core.errors import ErrorCode, NumericError, ParameterError, make_context

ONE_HZ = 2.0 * math.pi  # rad/s


class PSDKind(str, Enum):
    ONE_OVER_F = "one_over_f"
    OHMIC = "ohmic"
    LORENTZIAN = "lorentzian"
    WHITE = "white"
    COMPOSITE = "composite"


@dataclass(frozen=True)
class NoisePSD:
    """Spectral density of a noise variable λ.

    Attributes:
        kind: spectral shape
        amplitude: A² for 1/f, B² for ohmic, S₀ for white noise
        exponent: γ of a 1/f^γ spectrum
        omega_ir: optional lower band edge, rad/s (S = 0 below)
        omega_uv: optional upper band edge, rad/s (S = 0 above)
        chi, kappa: dispersive shift and resonator linewidth of a
            photon-number Lorentzian, rad/s
        eta, n_bar: measurement efficiency factor and thermal photon number
        components: summands of a composite density
    """

    kind: PSDKind
    amplitude: float = 0.0
    exponent: float = 1.0
    omega_ir: Optional[float] = None
    omega_uv: Optional[float] = None
    chi: float = 0.0
    kappa: float = 0.0
    eta: float = 1.0
    n_bar: float = 0.0
    components: Tuple["NoisePSD", ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        errors: Dict[str, List[str]] = {}
        if self.kind == PSDKind.COMPOSITE:
            if not self.components:
                errors.setdefault("components", []).append("composite needs at least one term")
        elif self.kind == PSDKind.LORENTZIAN:
            if not self.kappa > 0:
                errors.setdefault("kappa", []).append("must be > 0")
            if self.eta < 0 or self.n_bar < 0:
                errors.setdefault("eta", []).append("eta and n_bar must be >= 0")
        elif not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            errors.setdefault("amplitude", []).append("must be finite and >= 0")
        if self.kind == PSDKind.ONE_OVER_F and not self.exponent > 0:
            errors.setdefault("exponent", []).append("must be > 0")
        if self.omega_ir is not None and self.omega_uv is not None and self.omega_uv <= self.omega_ir:
            errors.setdefault("omega_uv", []).append("must exceed omega_ir")
        if errors:
            raise ParameterError(
                f"invalid noise PSD: {errors}",
                field_errors=errors,
                context=make_context(__name__, "NoisePSD", kind=self.kind),
            )

    @classmethod
    def one_over_f(cls, amplitude: float, exponent: float = 1.0, **band: float) -> "NoisePSD":
        """A²(2π·1 Hz/|ω|)^γ with A² = ``amplitude``."""
        return cls(PSDKind.ONE_OVER_F, amplitude=amplitude, exponent=exponent, **band)

    @classmethod
    def ohmic(cls, amplitude: float, **band: float) -> "NoisePSD":
        return cls(PSDKind.OHMIC, amplitude=amplitude, **band)

    @classmethod
    def white(cls, level: float, **band: float) -> "NoisePSD":
        return cls(PSDKind.WHITE, amplitude=level, **band)

    @classmethod
    def lorentzian(cls, chi: float, kappa: float, n_bar: float, eta: float = 1.0) -> "NoisePSD":
        """Photon shot noise 4χ²·2ηn̄κ/(ω² + κ²)."""
        return cls(PSDKind.LORENTZIAN, chi=chi, kappa=kappa, n_bar=n_bar, eta=eta)

    @classmethod
    def composite(cls, *parts: "NoisePSD") -> "NoisePSD":
        return cls(PSDKind.COMPOSITE, components=tuple(parts))

    def __add__(self, other: "NoisePSD") -> "NoisePSD":
        left = self.components if self.kind == PSDKind.COMPOSITE else (self,)
        right = other.components if other.kind == PSDKind.COMPOSITE else (other,)
        return NoisePSD.composite(*left, *right)

    def __call__(self, omega: ArrayLike) -> Union[float, np.ndarray]:
        return psd_eval(self, omega)

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == PSDKind.COMPOSITE:
            return {"kind": self.kind.value, "components": [c.to_dict() for c in self.components]}
        data: Dict[str, Any] = {"kind": self.kind.value}
        if self.kind == PSDKind.LORENTZIAN:
            data.update(chi=self.chi, kappa=self.kappa, eta=self.eta, n_bar=self.n_bar)
        else:
            data["amplitude"] = self.amplitude
        if self.kind == PSDKind.ONE_OVER_F:
            data["exponent"] = self.exponent
        for key in ("omega_ir", "omega_uv"):
            if getattr(self, key) is not None:
                data[key] = getattr(self, key)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "NoisePSD":
        kind = PSDKind(data["kind"])
        if kind == PSDKind.COMPOSITE:
            return cls.composite(*(cls.from_dict(c) for c in data["components"]))
        fields = {k: v for k, v in data.items() if k != "kind"}
        return cls(kind, **fields)


def _shape(psd: NoisePSD, w: np.ndarray) -> np.ndarray:
    if psd.kind == PSDKind.ONE_OVER_F:
        if np.any(w == 0.0) and psd.omega_ir is None:
            raise NumericError(
                "1/f spectral density is singular at ω = 0",
                code=ErrorCode.SINGULARITY,
                context=make_context(__name__, "psd_eval", kind=psd.kind.value),
            )
        with np.errstate(divide="ignore"):
            return np.where(w > 0, psd.amplitude * (ONE_HZ / np.where(w > 0, w, 1.0)) ** psd.exponent, 0.0)
    if psd.kind == PSDKind.OHMIC:
        return psd.amplitude * w / ONE_HZ
    if psd.kind == PSDKind.WHITE:
        return np.full_like(w, psd.amplitude)
    if psd.kind == PSDKind.LORENTZIAN:
        return 8.0 * psd.chi**2 * psd.eta * psd.n_bar * psd.kappa / (w**2 + psd.kappa**2)
    return sum((psd_eval(c, w) for c in psd.components), np.zeros_like(w))


def psd_eval(psd: NoisePSD, omega: ArrayLike) -> Union[float, np.ndarray]:
    """S(ω) for a scalar or array of angular frequencies (rad/s).

    Raises:
        NumericError: singularity for ω = 0 on a 1/f density without an IR edge
    """
    w = np.abs(np.asarray(omega, dtype=float))
    values = _shape(psd, w)
    if psd.kind != PSDKind.COMPOSITE:
        if psd.omega_ir is not None:
            values = np.where(w < psd.omega_ir, 0.0, values)
        if psd.omega_uv is not None:
            values = np.where(w > psd.omega_uv, 0.0, values)
    if np.ndim(omega) == 0:
        return float(values)
    return np.asarray(values, dtype=float)
