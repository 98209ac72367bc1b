"""Adiabatic CPHASE through the |11⟩–|20⟩ avoided crossing.

The conditional phase of an excursion ℓ(t) is ∫ζ_rel(ℓ(t))dt with ζ_rel the
ζ-map referenced to its idle value. ζ is negative on the approach side of
the crossing, so the accumulated phase is negative; a requested phase is a
magnitude and the signed value is reported. CZ_φ with φ = −π equals CZ_π.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np
from scipy.signal import windows

from ..core.errors import ErrorCode, NumericError, ParameterError, make_context
from ..pulse import FluxTrajectory, evolve, uniform_grid
from .library import GateOp, cz_phi
from .two_qubit import ZetaMap, _coupled_matrix, dressed_levels

logger = logging.getLogger(__name__)

RISE_NS = 8.0
PHASE_TOL = 1e-4
MAX_BISECTIONS = 200
LEAKAGE_WARNING = 0.05
SLEPIAN_NW = 2.0
SAMPLE_STEP_NS = 0.1


@dataclass
class CPhaseTrajectory:
    """Solved excursion and its ζ-integral."""

    trajectory: FluxTrajectory
    hold_depth: float
    target_phase: float
    conditional_phase: float
    rise: float = RISE_NS


def conditional_phase_integral(trajectory: FluxTrajectory, zmap: ZetaMap, dt: float = 0.01) -> float:
    """Signed ∫ζ_rel(ℓ(t)) dt in rad."""
    return trajectory.integrate(zmap.relative, dt)


def _raised_cosine(zmap: ZetaMap, depth: float, T: float, rise: float) -> FluxTrajectory:
    idle = zmap.fmap.pair.idle
    return FluxTrajectory.raised_cosine(idle, depth, rise, T - 2.0 * rise, T)


def mixing_angle(zmap: ZetaMap, phi_e: np.ndarray) -> np.ndarray:
    """θ = arctan(2√2·g / |E₁₁ − E₂₀|) of the bare |11⟩/|20⟩ pair; π/2 at the crossing."""
    fmap = zmap.fmap
    f1 = fmap.fixed[0]
    detuning = np.array([e1 + f1 - e2 for e1, e2 in (fmap.levels(float(p)) for p in phi_e)])
    return np.arctan2(2.0 * math.sqrt(2.0) * fmap.pair.g, np.abs(detuning))


def slepian_window(points: int, nw: float = SLEPIAN_NW) -> np.ndarray:
    """First discrete prolate spheroidal sequence, shifted to vanish at both ends, peak 1."""
    w = np.abs(windows.dpss(points, nw))
    w = (w - w[0]) / (w.max() - w[0])
    w[0] = w[-1] = 0.0
    return w


def _slepian(zmap: ZetaMap, depth: float, T: float, rise: float) -> FluxTrajectory:
    # rise is unused: the window spans the whole gate
    theta = mixing_angle(zmap, zmap.grid)
    if not np.all(np.diff(theta) > 0):
        raise ParameterError(
            "mixing angle is not monotonic between idle and crossing",
            code=ErrorCode.INVALID_REGIME,
            context=make_context(__name__, "_slepian", g=zmap.fmap.pair.g),
        )
    points = max(3, int(math.ceil(T / SAMPLE_STEP_NS)) + 1)
    times = np.linspace(0.0, T, points)
    peak = float(mixing_angle(zmap, np.array([depth]))[0])
    angles = theta[0] + (peak - theta[0]) * slepian_window(points)
    return FluxTrajectory(times=times, phi_e=np.interp(angles, theta, zmap.grid), interpolation="linear")


Builder = Callable[[ZetaMap, float, float, float], FluxTrajectory]
STRATEGY_BUILDERS: Dict[str, Builder] = {"raised_cosine": _raised_cosine, "slepian": _slepian}
STRATEGIES = tuple(STRATEGY_BUILDERS)


def cphase_trajectory(
    zmap: ZetaMap,
    target_phase: float,
    T: float,
    rise: float = RISE_NS,
    strategy: str = "raised_cosine",
    tol: float = PHASE_TOL,
) -> CPhaseTrajectory:
    """Flux excursion whose ζ-integral magnitude equals ``target_phase``.

    ``raised_cosine`` holds a flat depth between two edges of length ``rise``.
    ``slepian`` shapes the |11⟩/|20⟩ mixing angle with a prolate spheroidal
    window over the whole gate and maps it back to flux, which keeps the
    excursion's spectrum narrow and suppresses leakage to |20⟩. In both
    cases the peak depth is bisected between the idle flux and the crossing;
    the accumulated phase grows monotonically with depth, so the returned
    depth is the shallowest meeting ``tol``.

    Raises:
        ParameterError: invalid-params for an unknown strategy, T < 2·rise for
            raised cosines, a negative target or one beyond the phase
            reachable at the crossing
        NumericError: bisection failing to converge
    """
    context = make_context(__name__, "cphase_trajectory", target=target_phase, T=T, strategy=strategy)
    if strategy not in STRATEGY_BUILDERS:
        raise ParameterError(f"unknown CPHASE strategy {strategy!r}, expected {STRATEGIES}", context=context)
    if strategy == "raised_cosine" and not (T >= 2.0 * rise and rise > 0):
        raise ParameterError(f"gate time {T} ns shorter than two {rise} ns ramps", context=context)
    if not (math.isfinite(T) and T > 0):
        raise ParameterError(f"gate time must be positive, got {T} ns", context=context)
    if not (math.isfinite(target_phase) and target_phase >= 0):
        raise ParameterError("target phase must be a finite magnitude >= 0", context=context)

    build = STRATEGY_BUILDERS[strategy]
    idle = zmap.fmap.pair.idle
    if target_phase == 0.0:
        null = FluxTrajectory(times=np.array([0.0, T]), phi_e=np.array([idle, idle]))
        return CPhaseTrajectory(null, idle, 0.0, 0.0, rise)

    def accumulated(depth: float) -> float:
        return conditional_phase_integral(build(zmap, depth, T, rise), zmap)

    reachable = abs(accumulated(zmap.crossing))
    if target_phase > reachable:
        raise ParameterError(
            f"target phase {target_phase:.4f} rad exceeds the {reachable:.4f} rad "
            f"reachable in {T} ns",
            context=make_context(
                __name__, "cphase_trajectory", target=target_phase, max_phase=reachable
            ),
        )

    lo, hi = idle, zmap.crossing
    for iteration in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        phase = accumulated(mid)
        error = abs(phase) - target_phase
        if abs(error) <= tol:
            logger.info(
                f"CPHASE {strategy} depth φ_e={mid:.6f} rad after {iteration + 1} bisections "
                f"(phase {phase:.6f} rad)"
            )
            return CPhaseTrajectory(build(zmap, mid, T, rise), mid, target_phase, phase, rise)
        if error < 0:
            lo = mid
        else:
            hi = mid
    raise NumericError(
        f"hold-depth bisection did not reach {tol:.0e} rad",
        context=context,
        diagnostics={"lo": lo, "hi": hi},
    )


@dataclass
class CPhaseSimulation:
    """Six-level propagator in the dressed idle frame plus derived phases.

    ``phases`` are arg U_kk − arg U_00 for |01⟩, |10⟩, |11⟩;
    ``conditional_phase`` is φ of the equivalent CZ_φ.
    """

    propagator: np.ndarray
    phases: np.ndarray
    conditional_phase: float
    leakage: float
    max_leakage: float

    def unitary(self, single_qubit_phase_cancellation: bool = True) -> GateOp:
        if single_qubit_phase_cancellation:
            gate = cz_phi(self.conditional_phase)
            return GateOp("CZ", gate.qubits, gate.unitary, {"phi": self.conditional_phase})
        diagonal = np.exp(1j * np.concatenate([[0.0], self.phases]))
        return GateOp("CZ_raw", (0, 1), np.diag(diagonal), {"phi": self.conditional_phase})


def simulate_cphase(trajectory: FluxTrajectory, zmap: ZetaMap) -> CPhaseSimulation:
    """Full 6-level evolution along ``trajectory`` starting from every computational state."""
    fmap = zmap.fmap
    pair = fmap.pair
    energies, V = dressed_levels(_coupled_matrix(fmap.bare_energies(pair.idle), pair.g))
    Vh = V.conj().T
    frame = np.diag(energies)

    def H_frame(t: float) -> np.ndarray:
        # interaction picture of the dressed idle Hamiltonian
        H = _coupled_matrix(fmap.bare_energies(float(trajectory(t))), pair.g)
        rotation = np.exp(1j * energies * t)
        return rotation[:, None] * (Vh @ H @ V - frame) * rotation.conj()

    grid = uniform_grid(H_frame, 0.0, trajectory.duration)
    result = evolve(
        H_frame, np.eye(6)[3], grid, method="expm", propagator=True, computational=range(4)
    )
    assert result.propagator is not None
    U = result.propagator
    block = U[:4, :4]
    leakage = float(1.0 - np.sum(np.abs(block[:, 3]) ** 2))
    angles = np.angle(np.diag(block))
    phases = angles[1:] - angles[0]
    conditional = float(np.angle(np.exp(-1j * (phases[2] - phases[0] - phases[1]))))
    if leakage > LEAKAGE_WARNING:
        logger.warning(
            f"Non-adiabatic CPHASE excursion: {leakage:.2%} of |11⟩ left the computational space"
        )
    logger.debug(
        f"CPHASE simulation on {len(grid)} points: φ={conditional:.6f} rad, leakage {leakage:.2e}"
    )
    return CPhaseSimulation(
        propagator=U,
        phases=phases,
        conditional_phase=conditional,
        leakage=leakage,
        max_leakage=float(np.max(result.leakage)),
    )


def cphase_unitary(
    trajectory: FluxTrajectory,
    zmap: ZetaMap,
    single_qubit_phase_cancellation: bool = True,
    simulation: Optional[CPhaseSimulation] = None,
) -> GateOp:
    """CZ_φ realized by ``trajectory``; the raw phase diagonal without cancellation.

    Logs a warning when more than 5 % of |11⟩ leaks out of the computational space.
    """
    sim = simulation or simulate_cphase(trajectory, zmap)
    return sim.unitary(single_qubit_phase_cancellation)
