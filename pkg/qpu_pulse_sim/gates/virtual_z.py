"""Virtual-Z compilation: Z rotations become phase-frame updates.

A Z_θ on qubit q advances that qubit's frame by θ; every later X_θ or Y_θ
pulse on q is emitted as X_θ^(φ) with φ the current frame (Y_θ = X_θ^(−π/2)).
Diagonal two-qubit gates commute with the frames; exchange-type gates that
map Z⊗I to I⊗Z swap them. The compiled circuit equals the original up to
trailing Z rotations, which do not change z-basis statistics.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..core.errors import CompileError, make_context
from ..pulse import DrivePulse, PulseSchedule
from .library import (
    GateOp,
    circuit_unitary,
    decompose_zxzxz,
    operator_distance,
    phased_x_gate,
    z_gate,
)

logger = logging.getLogger(__name__)

SINGLE_QUBIT_KINDS = {"X": 0.0, "Y": -math.pi / 2, "Xphi": 0.0}
PROBE_ANGLE = 0.7
COMMUTE_TOL = 1e-9


@dataclass
class VirtualZProgram:
    """Physical gates plus the frames left over at the end of the circuit."""

    ops: List[GateOp]
    frames: Dict[int, float] = field(default_factory=dict)
    n_qubits: int = 1

    @property
    def physical_z_count(self) -> int:
        return sum(1 for op in self.ops if op.name == "Z")

    def unitary(self) -> np.ndarray:
        """Compiled gates only, without the trailing frame rotations."""
        return circuit_unitary(self.ops, self.n_qubits)

    def equivalent_unitary(self) -> np.ndarray:
        """Compiled gates followed by Z rotations by the final frames."""
        trailing = [z_gate(angle, q) for q, angle in sorted(self.frames.items()) if angle]
        return circuit_unitary([*self.ops, *trailing], self.n_qubits)


def _frame_action(op: GateOp) -> Optional[str]:
    """'keep' when the gate commutes with Z frames, 'swap' when it exchanges them."""
    if op.is_diagonal:
        return "keep"
    if len(op.qubits) != 2:
        return None
    zi = np.kron(z_gate(PROBE_ANGLE).unitary, np.eye(2))
    iz = np.kron(np.eye(2), z_gate(PROBE_ANGLE).unitary)
    moved = op.unitary @ zi @ op.unitary.conj().T
    if operator_distance(moved, iz) < COMMUTE_TOL:
        return "swap"
    return None


def virtual_z_compile(sequence: Sequence[GateOp], n_qubits: Optional[int] = None) -> VirtualZProgram:
    """Remove every Z_θ, offsetting the phases of later pulses.

    Raises:
        CompileError: compile-error for single-qubit gates other than X, Y, Z
            or phased X, and for two-qubit gates that neither commute with
            nor exchange the Z frames
    """
    width = n_qubits or (max((max(op.qubits) for op in sequence), default=0) + 1)
    frames: Dict[int, float] = {q: 0.0 for q in range(width)}
    compiled: List[GateOp] = []
    for index, op in enumerate(sequence):
        context = make_context(__name__, "virtual_z_compile", index=index, gate=op.name)
        if len(op.qubits) == 1:
            q = op.qubits[0]
            if op.name == "Z":
                frames[q] += op.params["theta"]
                continue
            if op.name not in SINGLE_QUBIT_KINDS:
                raise CompileError(
                    f"cannot compile single-qubit gate {op.name!r}", gate_name=op.name, context=context
                )
            phase = op.params.get("phase", 0.0) + SINGLE_QUBIT_KINDS[op.name] + frames[q]
            compiled.append(phased_x_gate(op.params["theta"], phase, q))
            continue
        action = _frame_action(op)
        if action is None:
            raise CompileError(
                f"two-qubit gate {op.name!r} does not commute with virtual Z frames",
                gate_name=op.name,
                context=context,
            )
        if action == "swap":
            a, b = op.qubits
            frames[a], frames[b] = frames[b], frames[a]
        compiled.append(op)
    logger.debug(
        f"Compiled {len(sequence)} gates into {len(compiled)} pulses; frames {frames}"
    )
    return VirtualZProgram(ops=compiled, frames=frames, n_qubits=width)


def any_su2_sequence(U: np.ndarray, qubit: int = 0) -> VirtualZProgram:
    """Any single-qubit unitary as two X_{π/2} pulses with virtual Z frames."""
    return virtual_z_compile(decompose_zxzxz(U).sequence(qubit), n_qubits=qubit + 1)


def schedule_sequence(
    sequence: Sequence[GateOp],
    reference: DrivePulse,
    reference_angle: float,
    channel: str = "d0",
    schedule: Optional[PulseSchedule] = None,
) -> PulseSchedule:
    """Emit a single-qubit X/Y/Z sequence onto one drive channel.

    Z gates become ``shift_frame`` calls; X_θ and Y_θ scale the calibrated
    ``reference`` pulse (rotation angle ``reference_angle``) linearly in
    amplitude, with Y at IQ phase −π/2.

    Raises:
        CompileError: compile-error for multi-qubit or unsupported gates
    """
    out = schedule or PulseSchedule()
    for op in sequence:
        context = make_context(__name__, "schedule_sequence", gate=op.name)
        if len(op.qubits) != 1 or (op.name != "Z" and op.name not in SINGLE_QUBIT_KINDS):
            raise CompileError(
                f"cannot schedule {op.name!r} on a single drive channel",
                gate_name=op.name,
                context=context,
            )
        theta = op.params["theta"]
        if op.name == "Z":
            out.shift_frame(channel, theta)
            continue
        scaled = replace(reference.envelope, amplitude=reference.envelope.amplitude * theta / reference_angle)
        phase = reference.phase + op.params.get("phase", 0.0) + SINGLE_QUBIT_KINDS[op.name]
        out.add_drive(channel, replace(reference, envelope=scaled, phase=phase))
    return out
