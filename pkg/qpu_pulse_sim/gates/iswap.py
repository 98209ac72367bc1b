"""Resonant-exchange iSWAP: ideal unitary, chevron maps and Z-phase bookkeeping.

Simulations run in the two-level-qubit block (|00⟩, |01⟩, |10⟩, |11⟩) and are
reported in the frame of the dressed idle levels, so time spent at idle
contributes nothing.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
import scipy.linalg as la

from ..core.errors import ErrorCode, ParameterError, make_context
from ..pulse import FluxTrajectory, evolve, uniform_grid
from .library import GateOp, cz_phi, gate_fidelity, z_gate
from .two_qubit import FrequencyMap, coupled_qubit_hamiltonian, dressed_levels

logger = logging.getLogger(__name__)

FLUX_TARGETS = ("iswap", "sqrt_iswap", "cphase")
IDLE_ATOL = 1e-12
CHEVRON_COLUMNS = ["phi_e_rad", "tau_ns", "P01"]


def iswap_unitary(g: float, t: float) -> GateOp:
    """Exchange propagator exp(−i g t (σ⁺σ⁻ + h.c.)) on the single-excitation block.

    t = π/2g is iSWAP, t = π/4g is √iSWAP.

    Raises:
        ParameterError: invalid-params for g <= 0
    """
    if not (math.isfinite(g) and g > 0):
        raise ParameterError(
            f"coupling g must be > 0, got {g}",
            context=make_context(__name__, "iswap_unitary", g=g),
        )
    c, s = math.cos(g * t), math.sin(g * t)
    U = np.eye(4, dtype=complex)
    U[1, 1] = U[2, 2] = c
    U[1, 2] = U[2, 1] = -1j * s
    return GateOp("ISWAP", (0, 1), U, {"g": float(g), "t": float(t)})


@dataclass(frozen=True)
class TwoQubitFluxGateConfig:
    """Flux excursion of the tunable qubit realizing a two-qubit gate.

    ``tau`` is the time spent at the operating point; ``phase`` is the
    target conditional phase for ``cphase``.
    """

    g: float
    trajectory: FluxTrajectory
    tau: float
    target: str = "iswap"
    idle: float = 0.0
    phase: float = math.pi

    def __post_init__(self) -> None:
        errors: Dict[str, List[str]] = {}
        if self.target not in FLUX_TARGETS:
            errors.setdefault("target", []).append(f"must be one of {FLUX_TARGETS}")
        if not self.g > 0:
            errors.setdefault("g", []).append("must be > 0")
        if not 0 < self.tau <= self.trajectory.duration + 1e-12:
            errors.setdefault("tau", []).append("must satisfy 0 < tau <= trajectory duration")
        if abs(self.trajectory.idle - self.idle) > IDLE_ATOL:
            errors.setdefault("trajectory", []).append("must end at the idle bias")
        if errors:
            raise ParameterError(
                f"invalid flux gate configuration: {errors}",
                field_errors=errors,
                context=make_context(__name__, "TwoQubitFluxGateConfig", target=self.target),
            )

    def ideal(self) -> GateOp:
        if self.target == "iswap":
            return iswap_unitary(self.g, math.pi / (2 * self.g))
        if self.target == "sqrt_iswap":
            return iswap_unitary(self.g, math.pi / (4 * self.g))
        return cz_phi(self.phase)


@dataclass
class IdleFrame:
    """Dressed idle levels of the two-level-qubit block."""

    energies: np.ndarray
    vectors: np.ndarray

    @classmethod
    def of(cls, fmap: FrequencyMap) -> "IdleFrame":
        pair = fmap.pair
        energies, vectors = dressed_levels(coupled_qubit_hamiltonian(pair, pair.idle, fmap))
        return cls(energies=energies, vectors=vectors)

    @property
    def frequencies(self) -> Tuple[float, float]:
        """Dressed (ω̃₁, ω̃₂) of the tunable and the fixed qubit, rad/ns."""
        return (
            float(self.energies[2] - self.energies[0]),
            float(self.energies[1] - self.energies[0]),
        )

    def to_frame(self, U_lab: np.ndarray, duration: float) -> np.ndarray:
        """e^{iẼT} V† U V."""
        rotation = np.diag(np.exp(1j * self.energies * duration))
        return rotation @ self.vectors.conj().T @ U_lab @ self.vectors


@dataclass
class IswapSimulation:
    propagator: np.ndarray
    idle_frame: IdleFrame
    trajectory: FluxTrajectory


def simulate_iswap(
    trajectory: FluxTrajectory, fmap: FrequencyMap, dt: float = 0.01
) -> IswapSimulation:
    """Propagator of the coupled two-level qubits along ``trajectory``.

    ``hold`` trajectories are exact products of segment exponentials;
    ``linear`` ones go through the Magnus integrator on a grid no coarser
    than ``dt``.
    """
    pair = fmap.pair
    frame = IdleFrame.of(fmap)
    if trajectory.interpolation == "hold":
        U = np.eye(4, dtype=complex)
        for phi, span in zip(trajectory.phi_e[:-1], np.diff(trajectory.times)):
            H = coupled_qubit_hamiltonian(pair, float(phi), fmap)
            U = la.expm(-1j * H * span) @ U
        propagator = frame.to_frame(U, trajectory.duration)
    else:
        V, E = frame.vectors, frame.energies

        def H_frame(t: float) -> np.ndarray:
            H = coupled_qubit_hamiltonian(pair, float(trajectory(t)), fmap)
            rotation = np.exp(1j * E * t)
            return rotation[:, None] * (V.conj().T @ H @ V - np.diag(E)) * rotation.conj()

        grid = uniform_grid(H_frame, 0.0, trajectory.duration)
        if len(grid) - 1 < trajectory.duration / dt:
            grid = np.linspace(0.0, trajectory.duration, int(math.ceil(trajectory.duration / dt)) + 1)
        result = evolve(
            H_frame, np.eye(4)[2], grid, method="expm", propagator=True, computational=range(4)
        )
        assert result.propagator is not None
        propagator = result.propagator
    return IswapSimulation(propagator=propagator, idle_frame=frame, trajectory=trajectory)


@dataclass(frozen=True)
class IswapPhaseCorrection:
    """Virtual-Z angles cancelling the single-qubit phases of a flux excursion.

    ``theta_z`` holds ∫(ω̃_q − ω_q(t))dt per qubit over the excursion;
    ``frame_phase`` is (ω̃₁ − ω̃₂)·t_start, the relative frame phase at which
    the exchange begins.
    """

    theta_z: Tuple[float, float]
    frame_phase: float
    t_start: float = 0.0

    def correct(self, U: np.ndarray) -> np.ndarray:
        """Apply pre and post Z corrections to a 4×4 propagator."""
        n1 = np.array([0, 0, 1, 1], dtype=float)
        n2 = np.array([0, 1, 0, 1], dtype=float)
        theta1, theta2 = self.theta_z
        post = np.diag(np.exp(-1j * ((theta1 + self.frame_phase) * n1 + theta2 * n2)))
        pre = np.diag(np.exp(1j * self.frame_phase * n1))
        return post @ np.asarray(U) @ pre

    def gates(self) -> Tuple[Tuple[GateOp, ...], Tuple[GateOp, ...]]:
        """(before, after) virtual Z gates, equal to ``correct`` up to global phase."""
        theta1, theta2 = self.theta_z
        before = (z_gate(self.frame_phase, 0),)
        after = (z_gate(-(theta1 + self.frame_phase), 0), z_gate(-theta2, 1))
        return before, after


def _departure_time(trajectory: FluxTrajectory) -> float:
    away = np.nonzero(np.abs(trajectory.phi_e - trajectory.idle) > IDLE_ATOL)[0]
    if len(away) == 0:
        return 0.0
    first = int(away[0])
    if trajectory.interpolation == "linear" and first > 0:
        first -= 1
    return float(trajectory.times[first])


def iswap_phase_correction(
    trajectory: FluxTrajectory, fmap: FrequencyMap, dt: float = 0.01
) -> IswapPhaseCorrection:
    """Per-qubit Z angles θ_z = ∫(ω̃_q − ω_q(t)) dt accumulated away from idle.

    ω̃_q are the dressed idle frequencies; away from idle the bare mapped
    frequencies are used, so a trajectory that never leaves idle gives 0.
    """
    idle = trajectory.idle
    omega1, omega2 = IdleFrame.of(fmap).frequencies
    bare2 = fmap.fixed[0]

    def away(phi: np.ndarray) -> np.ndarray:
        return np.abs(np.asarray(phi) - idle) > IDLE_ATOL

    theta1 = trajectory.integrate(lambda phi: np.where(away(phi), omega1 - fmap.omega(phi), 0.0), dt)
    theta2 = trajectory.integrate(lambda phi: np.where(away(phi), omega2 - bare2, 0.0), dt)
    t_start = _departure_time(trajectory)
    correction = IswapPhaseCorrection(
        theta_z=(theta1, theta2), frame_phase=(omega1 - omega2) * t_start, t_start=t_start
    )
    logger.debug(f"iSWAP phase correction θ_z = ({theta1:.6f}, {theta2:.6f}) rad")
    return correction


@dataclass
class ChevronMap:
    """P(|01⟩) after preparing |10⟩ and holding at each flux for each τ."""

    phi_e: np.ndarray
    tau: np.ndarray
    population: np.ndarray = field(repr=False)

    def to_frame(self) -> pd.DataFrame:
        phi, tau = np.meshgrid(self.phi_e, self.tau, indexing="ij")
        return pd.DataFrame(
            {"phi_e_rad": phi.ravel(), "tau_ns": tau.ravel(), "P01": self.population.ravel()},
            columns=CHEVRON_COLUMNS,
        )


def iswap_chevron(
    fmap: FrequencyMap, flux_grid: Sequence[float], tau_grid: Sequence[float]
) -> ChevronMap:
    """Swap population map over hold flux and hold time.

    States are the dressed idle |10⟩ and |01⟩; each flux column is evolved
    exactly through the eigendecomposition of H(φ_e).

    Raises:
        ParameterError: invalid-grid for empty or negative grids
    """
    flux = np.asarray(flux_grid, dtype=float)
    taus = np.asarray(tau_grid, dtype=float)
    if flux.size == 0 or taus.size == 0 or np.any(taus < 0):
        raise ParameterError(
            "chevron needs non-empty flux and non-negative hold-time grids",
            code=ErrorCode.INVALID_GRID,
            context=make_context(__name__, "iswap_chevron"),
        )
    frame = IdleFrame.of(fmap)
    start = frame.vectors[:, 2]
    end = frame.vectors[:, 1]
    population = np.empty((flux.size, taus.size))
    for i, phi in enumerate(flux):
        values, vectors = np.linalg.eigh(coupled_qubit_hamiltonian(fmap.pair, float(phi), fmap))
        a = vectors.conj().T @ start
        b = vectors.conj().T @ end
        amplitudes = (np.conj(b) * a) @ np.exp(-1j * np.outer(values, taus))
        population[i] = np.abs(amplitudes) ** 2
    logger.info(f"Chevron map computed on {flux.size}×{taus.size} points")
    return ChevronMap(phi_e=flux, tau=taus, population=population)


@dataclass
class FluxGateReport:
    unitary: np.ndarray
    ideal: GateOp
    fidelity: float
    leakage: float = 0.0
    conditional_phase: Optional[float] = None


def corrected_iswap(config: TwoQubitFluxGateConfig, fmap: FrequencyMap) -> FluxGateReport:
    """Simulate an iSWAP-family excursion and apply the virtual-Z corrections."""
    if config.target not in ("iswap", "sqrt_iswap"):
        raise ParameterError(
            f"corrected_iswap handles iswap targets, got {config.target!r}",
            context=make_context(__name__, "corrected_iswap", target=config.target),
        )
    simulation = simulate_iswap(config.trajectory, fmap)
    correction = iswap_phase_correction(config.trajectory, fmap)
    U = correction.correct(simulation.propagator)
    unitary_part, _ = la.polar(U)
    ideal = config.ideal()
    fidelity = gate_fidelity(unitary_part, ideal.unitary)
    logger.info(f"{config.target} fidelity after phase correction: {fidelity:.8f}")
    return FluxGateReport(unitary=U, ideal=ideal, fidelity=fidelity)
