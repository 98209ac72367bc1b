"""Flux-tunable transmon pair: level maps, coupled Hamiltonians and ζ.

Qubit 1 is a split transmon tuned by its SQUID flux φ_e; qubit 2 sits at a
fixed bias. Energies here are angular, in rad/ns, measured from the bare
ground state |00⟩. States are labelled |n₁n₂⟩ with qubit 1 first.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set, Tuple

import numpy as np
from numpy.typing import ArrayLike
from scipy import optimize
from scipy.interpolate import CubicSpline

from ..config.config import NumericsConfig
from ..core.errors import ErrorCode, ParameterError, make_context
from ..core.operators import Basis, HermitianOperator
from ..device import FluxBias, QubitCircuitParams, QubitKind, build_transmon_hamiltonian, spectrum

logger = logging.getLogger(__name__)

_NUMERICS = NumericsConfig()
FLUX_MAP_POINTS = _NUMERICS.flux_map_points
DEFAULT_PHI_MAX = 1.2

TWO_EXCITATION_LABELS: Tuple[str, ...] = ("00", "01", "10", "11", "02", "20")
COMPUTATIONAL_LABELS: Tuple[str, ...] = TWO_EXCITATION_LABELS[:4]


def _transmon_levels(params: QubitCircuitParams, bias: FluxBias, cutoff: int) -> Tuple[float, float]:
    """(E₁ − E₀, E₂ − E₀) in rad/ns."""
    spec = spectrum(build_transmon_hamiltonian(params, cutoff=cutoff, bias=bias), k=3)
    return spec.omega_01, spec.omega_01 + float(spec.omega_12 or 0.0)


@dataclass(frozen=True)
class TransmonPair:
    """Capacitively coupled transmons with XY exchange g (rad/ns)."""

    tunable: QubitCircuitParams
    fixed: QubitCircuitParams
    g: float
    idle: float = 0.0
    fixed_bias: float = 0.0
    cutoff: int = _NUMERICS.charge_cutoff

    def __post_init__(self) -> None:
        errors: Dict[str, List[str]] = {}
        if self.tunable.kind != QubitKind.SPLIT_TRANSMON:
            errors.setdefault("tunable", []).append("must be a split transmon")
        if self.fixed.kind not in (QubitKind.TRANSMON, QubitKind.SPLIT_TRANSMON):
            errors.setdefault("fixed", []).append("must be transmon-like")
        if not (math.isfinite(self.g) and self.g >= 0):
            errors.setdefault("g", []).append("must be finite and >= 0")
        if errors:
            raise ParameterError(
                f"invalid transmon pair: {errors}",
                field_errors=errors,
                context=make_context(__name__, "TransmonPair"),
            )

    def tunable_levels(self, phi_e: float) -> Tuple[float, float]:
        return _transmon_levels(self.tunable, FluxBias(phi_e), self.cutoff)

    def fixed_levels(self) -> Tuple[float, float]:
        return _transmon_levels(self.fixed, FluxBias(self.fixed_bias), self.cutoff)


@dataclass
class FrequencyMap:
    """Cubic splines of the tunable qubit's E₁, E₂ (rad/ns) on a flux grid."""

    pair: TransmonPair
    phi_max: float = DEFAULT_PHI_MAX
    points: int = FLUX_MAP_POINTS
    fixed: Tuple[float, float] = field(init=False)
    _e1: CubicSpline = field(init=False, repr=False)
    _e2: CubicSpline = field(init=False, repr=False)

    def __post_init__(self) -> None:
        lo, hi = sorted((self.pair.idle, self.phi_max))
        if self.points < 4 or not hi > lo:
            raise ParameterError(
                f"flux map needs >= 4 points on a non-empty range, got {self.points} on [{lo}, {hi}]",
                code=ErrorCode.INVALID_GRID,
                context=make_context(__name__, "FrequencyMap"),
            )
        self.grid = np.linspace(lo, hi, self.points)
        levels = np.array([self.pair.tunable_levels(float(p)) for p in self.grid])
        self._e1 = CubicSpline(self.grid, levels[:, 0])
        self._e2 = CubicSpline(self.grid, levels[:, 1])
        self.fixed = self.pair.fixed_levels()
        logger.debug(
            f"Frequency map on [{lo:.3f}, {hi:.3f}] rad with {self.points} points: "
            f"ω₁ {levels[0, 0] / (2 * math.pi):.4f} → {levels[-1, 0] / (2 * math.pi):.4f} GHz"
        )

    def _check(self, phi_e: np.ndarray) -> None:
        if np.any(phi_e < self.grid[0] - 1e-12) or np.any(phi_e > self.grid[-1] + 1e-12):
            raise ParameterError(
                f"flux outside the mapped range [{self.grid[0]:.4g}, {self.grid[-1]:.4g}] rad",
                code=ErrorCode.INVALID_GRID,
                context=make_context(__name__, "FrequencyMap"),
            )

    def omega(self, phi_e: ArrayLike) -> np.ndarray:
        """ω₁(φ_e) of the tunable qubit."""
        phi = np.asarray(phi_e, dtype=float)
        self._check(phi)
        return self._e1(phi)

    def levels(self, phi_e: float) -> Tuple[float, float]:
        phi = np.asarray(phi_e, dtype=float)
        self._check(phi)
        return float(self._e1(phi)), float(self._e2(phi))

    def alpha(self, phi_e: float) -> float:
        e1, e2 = self.levels(phi_e)
        return e2 - 2.0 * e1

    def bare_energies(self, phi_e: float) -> np.ndarray:
        """Uncoupled E_{n₁n₂} in the order of ``TWO_EXCITATION_LABELS``."""
        e1, e2 = self.levels(phi_e)
        f1, f2 = self.fixed
        return np.array([0.0, f1, e1, e1 + f1, f2, e2])

    def _root(self, fn: Callable[[float], float], label: str) -> float:
        values = np.array([fn(p) for p in self.grid])
        sign_change = np.nonzero(np.diff(np.sign(values)))[0]
        if len(sign_change) == 0:
            raise ParameterError(
                f"no {label} operating point within the mapped flux range",
                code=ErrorCode.INVALID_REGIME,
                context=make_context(__name__, "FrequencyMap", label=label),
            )
        i = int(sign_change[0])
        return float(optimize.brentq(fn, self.grid[i], self.grid[i + 1], xtol=1e-12))

    def iswap_flux(self) -> float:
        """Flux at which ω₁ = ω₂ (bare |01⟩/|10⟩ degeneracy)."""
        return self._root(lambda p: float(self._e1(p)) - self.fixed[0], "iSWAP")

    def cphase_flux(self) -> float:
        """Flux at which the bare |11⟩ and |20⟩ levels cross."""
        return self._root(lambda p: float(self._e1(p)) + self.fixed[0] - float(self._e2(p)), "CPHASE")


def _coupled_matrix(energies: np.ndarray, g: float) -> np.ndarray:
    H = np.diag(energies).astype(complex)
    root2 = math.sqrt(2.0)
    # |01⟩ ↔ |10⟩
    H[1, 2] = H[2, 1] = g
    if len(energies) == 6:
        # |11⟩ ↔ |02⟩, |20⟩
        H[3, 4] = H[4, 3] = root2 * g
        H[3, 5] = H[5, 3] = root2 * g
    return H


def two_excitation_hamiltonian(
    pair: TransmonPair, bias: float, fmap: Optional[FrequencyMap] = None
) -> HermitianOperator:
    """6×6 Hamiltonian on |00⟩, |01⟩, |10⟩, |11⟩, |02⟩, |20⟩ at tunable flux ``bias``.

    The |11⟩ level couples to |02⟩ and |20⟩ with √2·g; levels are exact
    transmon energies (from the spline map when ``fmap`` is given).
    """
    if fmap is not None:
        energies = fmap.bare_energies(bias)
    else:
        e1, e2 = pair.tunable_levels(bias)
        f1, f2 = pair.fixed_levels()
        energies = np.array([0.0, f1, e1, e1 + f1, f2, e2])
    return HermitianOperator(
        matrix=_coupled_matrix(energies, pair.g),
        basis=Basis.PRODUCT,
        truncation={"labels": TWO_EXCITATION_LABELS, "units": "rad/ns"},
    )


def coupled_qubit_hamiltonian(pair: TransmonPair, bias: float, fmap: FrequencyMap) -> np.ndarray:
    """4×4 two-level-qubit block (|00⟩, |01⟩, |10⟩, |11⟩) with XY exchange g."""
    return _coupled_matrix(fmap.bare_energies(bias)[:4], pair.g)


def dressed_levels(H: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenvalues and eigenvectors reordered so column k has largest weight on bare state k.

    Eigenvector phases are fixed so the bare-state component is real positive.
    """
    values, vectors = np.linalg.eigh(H)
    weights = np.abs(vectors) ** 2
    order = np.empty(len(values), dtype=int)
    taken: Set[int] = set()
    for bare in np.argsort(-weights.max(axis=1)):
        ranked = [int(k) for k in np.argsort(-weights[bare]) if int(k) not in taken]
        order[bare] = ranked[0]
        taken.add(ranked[0])
    vectors = vectors[:, order]
    diag = np.diag(vectors)
    vectors = vectors * (np.conj(diag) / np.abs(diag))
    return values[order], vectors


def zeta(pair: TransmonPair, bias: float, fmap: Optional[FrequencyMap] = None) -> float:
    """ζ = ω₁₁ − ω₀₁ − ω₁₀ + ω₀₀ of the dressed 6-level spectrum (rad/ns)."""
    energies, _ = dressed_levels(two_excitation_hamiltonian(pair, bias, fmap).dense())
    return float(energies[3] - energies[1] - energies[2] + energies[0])


@dataclass
class ZetaMap:
    """Cubic spline of ζ(φ_e) from the idle flux up to the |11⟩/|20⟩ crossing.

    ``relative`` subtracts the idle value so that an idle trajectory
    accumulates no conditional phase.
    """

    fmap: FrequencyMap
    points: int = FLUX_MAP_POINTS

    def __post_init__(self) -> None:
        pair = self.fmap.pair
        self.crossing = self.fmap.cphase_flux()
        self.grid = np.linspace(pair.idle, self.crossing, self.points)
        values = np.array([zeta(pair, float(p), self.fmap) for p in self.grid])
        self.idle_value = float(values[0])
        self._spline = CubicSpline(self.grid, values)
        logger.debug(
            f"ζ map to crossing at φ_e={self.crossing:.4f} rad: "
            f"ζ_idle={self.idle_value:.3e}, ζ_cross={values[-1]:.3e} rad/ns"
        )

    def __call__(self, phi_e: ArrayLike) -> np.ndarray:
        return self._spline(np.asarray(phi_e, dtype=float))

    def relative(self, phi_e: ArrayLike) -> np.ndarray:
        return self._spline(np.asarray(phi_e, dtype=float)) - self.idle_value
