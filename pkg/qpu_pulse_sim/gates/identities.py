"""Gate identities: emit a circuit for a target and verify it up to global phase."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Tuple

import numpy as np

from ..core.errors import ParameterError, make_context
from .iswap import iswap_unitary
from .library import (
    GateOp,
    circuit_unitary,
    cnot,
    cz_phi,
    cphase,
    hadamard,
    operator_distance,
    run_circuit,
    uzz,
    x_gate,
    y_gate,
    z_gate,
)

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-9
HALF_PI = math.pi / 2


@dataclass
class IdentityReport:
    """Emitted circuit, its composed unitary and the verification outcome.

    For ``ghz_circuit`` the comparison is between the prepared state and
    (|0…0⟩ + |1…1⟩)/√2, and ``distance`` is 1 − |overlap|.
    """

    target: str
    sequence: Tuple[GateOp, ...]
    n_qubits: int
    actual: np.ndarray
    expected: np.ndarray
    distance: float

    @property
    def passed(self) -> bool:
        return self.distance < IDENTITY_TOL


def _iswap() -> GateOp:
    return iswap_unitary(1.0, HALF_PI)


def cnot_from_cphase() -> Tuple[GateOp, ...]:
    """(I⊗H)·CPHASE·(I⊗H)."""
    return (hadamard(1), cphase((0, 1)), hadamard(1))


def cnot_from_iswap() -> Tuple[GateOp, ...]:
    """Two iSWAPs dressed with single-qubit rotations."""
    return (
        z_gate(HALF_PI, 0),
        x_gate(3 * HALF_PI, 1),
        z_gate(HALF_PI, 1),
        _iswap(),
        x_gate(HALF_PI, 0),
        _iswap(),
        z_gate(HALF_PI, 1),
    )


def uzz_from_czphi_v1(phi: float) -> Tuple[GateOp, ...]:
    """U_ZZ(φ) from two CZ_{−φ} interleaved with X_π echoes."""
    return (
        x_gate(math.pi, 0),
        cz_phi(-phi),
        x_gate(math.pi, 0),
        x_gate(math.pi, 1),
        cz_phi(-phi),
        x_gate(math.pi, 1),
    )


def uzz_from_czphi_v2(phi: float) -> Tuple[GateOp, ...]:
    """U_ZZ(φ) = CNOT·(I⊗Z_φ)·CNOT."""
    return (cnot(0, 1), z_gate(phi, 1), cnot(0, 1))


def ghz_circuit(n_qubits: int = 2) -> Tuple[GateOp, ...]:
    """Y_{π/2} on qubit 0, then for each further qubit Y_{−π/2}, CZ with its neighbour, Y_{π/2}."""
    if n_qubits < 2:
        raise ParameterError(
            f"GHZ circuit needs at least two qubits, got {n_qubits}",
            context=make_context(__name__, "ghz_circuit", n_qubits=n_qubits),
        )
    ops = [y_gate(HALF_PI, 0)]
    for q in range(1, n_qubits):
        ops += [y_gate(-HALF_PI, q), cphase((q - 1, q)), y_gate(HALF_PI, q)]
    return tuple(ops)


def _ghz_state(n_qubits: int) -> np.ndarray:
    state = np.zeros(2**n_qubits, dtype=complex)
    state[0] = state[-1] = 1.0 / math.sqrt(2.0)
    return state


IDENTITY_TARGETS: Dict[str, Callable[..., Tuple[GateOp, ...]]] = {
    "cnot_from_cphase": cnot_from_cphase,
    "cnot_from_iswap": cnot_from_iswap,
    "uzz_from_czphi_v1": uzz_from_czphi_v1,
    "uzz_from_czphi_v2": uzz_from_czphi_v2,
    "ghz_circuit": ghz_circuit,
}


def synthesize_identity(target: str, phi: float = math.pi / 3, n_qubits: int = 2) -> IdentityReport:
    """Emit the circuit for ``target`` and verify it.

    Args:
        target: one of ``IDENTITY_TARGETS``
        phi: ZZ angle for the U_ZZ targets
        n_qubits: register size for ``ghz_circuit``

    Raises:
        ParameterError: invalid-params for an unknown target
    """
    if target not in IDENTITY_TARGETS:
        raise ParameterError(
            f"unknown identity {target!r}, expected one of {sorted(IDENTITY_TARGETS)}",
            context=make_context(__name__, "synthesize_identity", target=target),
        )
    if target == "ghz_circuit":
        sequence = ghz_circuit(n_qubits)
        actual = run_circuit(sequence, n_qubits)
        expected = _ghz_state(n_qubits)
        distance = float(1.0 - abs(np.vdot(expected, actual)))
    else:
        n_qubits = 2
        if target.startswith("uzz"):
            sequence = IDENTITY_TARGETS[target](phi)
            expected = uzz(phi).unitary
        else:
            sequence = IDENTITY_TARGETS[target]()
            expected = cnot().unitary
        actual = circuit_unitary(sequence, n_qubits)
        distance = operator_distance(actual, expected)
    report = IdentityReport(target, sequence, n_qubits, actual, expected, distance)
    log = logger.info if report.passed else logger.warning
    log(f"Identity {target}: distance {distance:.2e} ({'pass' if report.passed else 'FAIL'})")
    return report
