"""Ideal gate unitaries, circuit composition and fidelity metrics.

Conventions: R_n(θ) = cos(θ/2)I − i sin(θ/2) n·σ, so Z_θ = exp(−iθσ_z/2).
Multi-qubit matrices order qubit 0 as the most significant tensor factor.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la

from ..core.errors import ErrorCode, ParameterError, make_context
from ..core.operators import PAULI_I, PAULI_X, PAULI_Y, PAULI_Z

UNITARY_TOL = 1e-10
FIDELITY_UNITARY_TOL = 1e-6
AXIS_TOL = 1e-9

ZZ = np.kron(PAULI_Z, PAULI_Z)
ZI = np.kron(PAULI_Z, PAULI_I)
IZ = np.kron(PAULI_I, PAULI_Z)
ZX = np.kron(PAULI_Z, PAULI_X)


def unitarity_error(U: np.ndarray) -> float:
    """max |U†U − I|."""
    U = np.asarray(U, dtype=complex)
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


@dataclass(frozen=True)
class GateOp:
    """A named unitary acting on ``qubits`` (in matrix order)."""

    name: str
    qubits: Tuple[int, ...]
    unitary: np.ndarray
    params: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        U = np.asarray(self.unitary, dtype=complex)
        object.__setattr__(self, "unitary", U)
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        context = make_context(__name__, "GateOp", name=self.name)
        if U.ndim != 2 or U.shape != (2 ** len(self.qubits),) * 2:
            raise ParameterError(
                f"{self.name}: matrix shape {U.shape} does not match {len(self.qubits)} qubit(s)",
                code=ErrorCode.INVALID_OPERATOR,
                context=context,
            )
        if len(set(self.qubits)) != len(self.qubits) or min(self.qubits) < 0:
            raise ParameterError(
                f"{self.name}: qubit indices must be distinct and >= 0, got {self.qubits}",
                context=context,
            )
        error = unitarity_error(U)
        if error > UNITARY_TOL:
            raise ParameterError(
                f"{self.name} is not unitary (|U†U − I| = {error:.3g})",
                code=ErrorCode.INVALID_OPERATOR,
                context=context,
            )

    @property
    def dim(self) -> int:
        return int(self.unitary.shape[0])

    @property
    def is_diagonal(self) -> bool:
        return bool(np.allclose(self.unitary, np.diag(np.diag(self.unitary)), atol=UNITARY_TOL))

    def on(self, *qubits: int) -> "GateOp":
        """Same gate relabelled onto ``qubits``."""
        return GateOp(self.name, tuple(qubits), self.unitary, dict(self.params))


# --- single-qubit gates ---


def su2_gate(axis: Sequence[float], theta: float, qubit: int = 0, name: str = "R") -> GateOp:
    """Rotation by θ about the unit vector ``axis``.

    Raises:
        ParameterError: invalid-params for a non-unit axis
    """
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or not np.all(np.isfinite(n)) or abs(np.linalg.norm(n) - 1.0) > AXIS_TOL:
        raise ParameterError(
            f"rotation axis must be a unit 3-vector, got {axis}",
            context=make_context(__name__, "su2_gate", theta=theta),
        )
    generator = n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z
    U = math.cos(theta / 2) * PAULI_I - 1j * math.sin(theta / 2) * generator
    return GateOp(name, (qubit,), U, {"theta": float(theta)})


def x_gate(theta: float, qubit: int = 0) -> GateOp:
    return su2_gate((1.0, 0.0, 0.0), theta, qubit, name="X")


def y_gate(theta: float, qubit: int = 0) -> GateOp:
    return su2_gate((0.0, 1.0, 0.0), theta, qubit, name="Y")


def z_gate(theta: float, qubit: int = 0) -> GateOp:
    return su2_gate((0.0, 0.0, 1.0), theta, qubit, name="Z")


def phased_x_gate(theta: float, phase: float, qubit: int = 0) -> GateOp:
    """X_θ^(φ) = exp(−iθ/2 (cos φ σ_x − sin φ σ_y)), a drive pulse with IQ phase φ."""
    gate = su2_gate((math.cos(phase), -math.sin(phase), 0.0), theta, qubit, name="Xphi")
    return GateOp("Xphi", (qubit,), gate.unitary, {"theta": float(theta), "phase": float(phase)})


def hadamard(qubit: int = 0) -> GateOp:
    return GateOp("H", (qubit,), np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2))


def s_gate(qubit: int = 0) -> GateOp:
    return GateOp("S", (qubit,), np.diag([1.0, 1j]))


def t_gate(qubit: int = 0) -> GateOp:
    return GateOp("T", (qubit,), np.diag([1.0, np.exp(1j * math.pi / 4)]))


def phase_gate(theta: float, qubit: int = 0) -> GateOp:
    """Global phase Ph_θ = e^{iθ}I."""
    return GateOp("Ph", (qubit,), np.exp(1j * theta) * PAULI_I, {"theta": float(theta)})


# --- two-qubit gates ---


def cnot(control: int = 0, target: int = 1) -> GateOp:
    U = np.eye(4, dtype=complex)
    U[2:, 2:] = PAULI_X
    return GateOp("CNOT", (control, target), U)


def cz_phi(phi: float, qubits: Tuple[int, int] = (0, 1)) -> GateOp:
    """CZ_φ = diag(1, 1, 1, e^{−iφ})."""
    return GateOp("CZ", qubits, np.diag([1.0, 1.0, 1.0, np.exp(-1j * phi)]), {"phi": float(phi)})


def cphase(qubits: Tuple[int, int] = (0, 1)) -> GateOp:
    gate = cz_phi(math.pi, qubits)
    return GateOp("CPHASE", qubits, gate.unitary, gate.params)


def uzz(phi: float, qubits: Tuple[int, int] = (0, 1)) -> GateOp:
    """U_ZZ(φ) = exp(−i(φ/2) σ_z⊗σ_z)."""
    return GateOp("UZZ", qubits, la.expm(-0.5j * phi * ZZ), {"phi": float(phi)})


def zx_unitary(theta: float, qubits: Tuple[int, int] = (0, 1)) -> GateOp:
    """ZX_θ = exp(−i(θ/2) σ_z⊗σ_x); qubit order (control, target)."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    U = np.zeros((4, 4), dtype=complex)
    U[:2, :2] = c * PAULI_I - 1j * s * PAULI_X
    U[2:, 2:] = c * PAULI_I + 1j * s * PAULI_X
    return GateOp("ZX", qubits, U, {"theta": float(theta)})


def bswap_unitary(theta: float, phi: float, qubits: Tuple[int, int] = (0, 1)) -> GateOp:
    """Rotation by θ in span{|00⟩, |11⟩} with drive phase φ; θ = π/2 is bSWAP."""
    c, s = math.cos(theta), math.sin(theta)
    off = -1j * np.exp(-2j * phi) * s
    U = np.eye(4, dtype=complex)
    U[0, 0] = U[3, 3] = c
    U[0, 3] = U[3, 0] = off
    return GateOp("BSWAP", qubits, U, {"theta": float(theta), "phi": float(phi)})


def controlled(target_gate: GateOp, control: int = 0, target: int = 1) -> GateOp:
    """|0⟩⟨0|⊗I + |1⟩⟨1|⊗U for a single-qubit U."""
    U = np.eye(4, dtype=complex)
    U[2:, 2:] = target_gate.unitary
    return GateOp(f"C{target_gate.name}", (control, target), U, dict(target_gate.params))


# --- composition ---


def apply_gate(state: np.ndarray, op: GateOp, n_qubits: int) -> np.ndarray:
    """Apply ``op`` to a state vector (or to the columns of a matrix) of ``n_qubits``."""
    if max(op.qubits) >= n_qubits:
        raise ParameterError(
            f"{op.name} acts on qubit {max(op.qubits)} of a {n_qubits}-qubit register",
            context=make_context(__name__, "apply_gate", name=op.name),
        )
    psi = np.asarray(state, dtype=complex)
    batch = psi.shape[1:] if psi.ndim > 1 else ()
    k = len(op.qubits)
    tensor = psi.reshape((2,) * n_qubits + batch)
    gate = op.unitary.reshape((2,) * (2 * k))
    moved = np.tensordot(gate, tensor, axes=(list(range(k, 2 * k)), list(op.qubits)))
    out = np.moveaxis(moved, list(range(k)), list(op.qubits))
    return out.reshape(psi.shape)


def circuit_unitary(ops: Iterable[GateOp], n_qubits: int) -> np.ndarray:
    """Matrix of ``ops`` applied in time order."""
    U = np.eye(2**n_qubits, dtype=complex)
    for op in ops:
        U = apply_gate(U, op, n_qubits)
    return U


def run_circuit(
    ops: Iterable[GateOp], n_qubits: int, state: Optional[np.ndarray] = None
) -> np.ndarray:
    """Final state of ``ops`` acting on ``state`` (|0…0⟩ by default)."""
    if state is None:
        state = np.zeros(2**n_qubits, dtype=complex)
        state[0] = 1.0
    psi = np.asarray(state, dtype=complex)
    for op in ops:
        psi = apply_gate(psi, op, n_qubits)
    return psi


# --- metrics ---


def _check_pair(U_actual: np.ndarray, U_ideal: np.ndarray, operation: str) -> Tuple[np.ndarray, np.ndarray]:
    A = np.asarray(U_actual, dtype=complex)
    B = np.asarray(U_ideal, dtype=complex)
    if A.shape != B.shape or A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ParameterError(
            f"dimension mismatch: {A.shape} vs {B.shape}",
            context=make_context(__name__, operation),
        )
    return A, B


def gate_fidelity(U_actual: np.ndarray, U_ideal: np.ndarray) -> float:
    """Average gate fidelity (|Tr(U_ideal†U_actual)|² + d) / (d(d+1)).

    Raises:
        ParameterError: invalid-params for mismatched dimensions,
            invalid-operator for non-unitary input
    """
    A, B = _check_pair(U_actual, U_ideal, "gate_fidelity")
    for label, M in (("actual", A), ("ideal", B)):
        error = unitarity_error(M)
        if error > FIDELITY_UNITARY_TOL:
            raise ParameterError(
                f"{label} operator is not unitary (|U†U − I| = {error:.3g})",
                code=ErrorCode.INVALID_OPERATOR,
                context=make_context(__name__, "gate_fidelity"),
            )
    d = A.shape[0]
    overlap = abs(np.trace(B.conj().T @ A)) ** 2
    return float(min(1.0, (overlap + d) / (d * (d + 1))))


def operator_distance(U: np.ndarray, V: np.ndarray) -> float:
    """min over γ of ‖U − e^{iγ}V‖₂ with γ from the trace overlap."""
    A, B = _check_pair(U, V, "operator_distance")
    overlap = np.trace(B.conj().T @ A)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(A - phase * B, ord=2))


def rotation_error_angle(U_actual: np.ndarray, U_ideal: np.ndarray) -> float:
    """Largest residual rotation angle of polar(U_actual)·U_ideal†, global phase removed."""
    A, B = _check_pair(U_actual, U_ideal, "rotation_error_angle")
    unitary_part, _ = la.polar(A)
    V = unitary_part @ B.conj().T
    d = V.shape[0]
    V = V / np.linalg.det(V) ** (1.0 / d)
    phases = np.angle(np.linalg.eigvals(V))
    return float(np.max(phases) - np.min(phases))


@dataclass(frozen=True)
class ZXZXZDecomposition:
    """U = e^{iγ} Z_φ X_θ Z_λ, realized as Z_{φ−π/2} X_{π/2} Z_{π−θ} X_{π/2} Z_{λ−π/2}."""

    theta: float
    phi: float
    lam: float
    global_phase: float

    def sequence(self, qubit: int = 0) -> Tuple[GateOp, ...]:
        """The five gates in time order (rightmost factor first)."""
        half = math.pi / 2
        return (
            z_gate(self.lam - half, qubit),
            x_gate(half, qubit),
            z_gate(math.pi - self.theta, qubit),
            x_gate(half, qubit),
            z_gate(self.phi - half, qubit),
        )

    def matrix(self) -> np.ndarray:
        """Z_φ X_θ Z_λ without the global phase."""
        return z_gate(self.phi).unitary @ x_gate(self.theta).unitary @ z_gate(self.lam).unitary


def decompose_zxzxz(U: np.ndarray, atol: float = 1e-12) -> ZXZXZDecomposition:
    """Euler angles (θ, φ, λ) of a single-qubit unitary for two X_{π/2} pulses.

    Raises:
        ParameterError: invalid-operator for non-2×2 or non-unitary input
    """
    U = np.asarray(U, dtype=complex)
    if U.shape != (2, 2) or unitarity_error(U) > FIDELITY_UNITARY_TOL:
        raise ParameterError(
            "decompose_zxzxz needs a 2×2 unitary",
            code=ErrorCode.INVALID_OPERATOR,
            context=make_context(__name__, "decompose_zxzxz"),
        )
    theta = 2.0 * math.atan2(abs(U[1, 0]), abs(U[0, 0]))
    arg = np.angle
    if abs(U[1, 0]) <= atol:
        phi, lam = 0.0, float(arg(U[1, 1]) - arg(U[0, 0]))
    elif abs(U[0, 0]) <= atol:
        phi, lam = float(arg(U[1, 0]) - arg(U[0, 1])), 0.0
    else:
        phi = float(arg(U[1, 0]) - arg(U[0, 0]) + math.pi / 2)
        lam = float(arg(U[0, 1]) - arg(U[0, 0]) + math.pi / 2)
    bare = ZXZXZDecomposition(theta=theta, phi=phi, lam=lam, global_phase=0.0)
    gamma = float(arg(np.trace(bare.matrix().conj().T @ U)))
    return ZXZXZDecomposition(theta=theta, phi=phi, lam=lam, global_phase=gamma)


def cnot_from_zx(control: int = 0, target: int = 1) -> Tuple[GateOp, ...]:
    """ZX_{−π/2} then Z_{π/2} on the control and X_{π/2} on the target; CNOT up to e^{−iπ/4}."""
    return (
        zx_unitary(-math.pi / 2, (control, target)),
        z_gate(math.pi / 2, control),
        x_gate(math.pi / 2, target),
    )
