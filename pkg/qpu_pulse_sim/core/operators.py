"""Truncated-basis operators and the HermitianOperator container."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Union

import numpy as np
import scipy.sparse as sp

from .errors import ErrorCode, ParameterError, make_context

ArrayOrSparse = Union[np.ndarray, sp.spmatrix]

HERMITIAN_RTOL = 1e-12


class Basis(str, Enum):
    """Basis a Hamiltonian is expressed in."""

    CHARGE = "charge"
    PHASE_GRID = "phase_grid"
    OSCILLATOR = "oscillator"
    PRODUCT = "product"


@dataclass(frozen=True)
class HermitianOperator:
    """Hamiltonian matrix (GHz) in a truncated basis.

    ``truncation`` holds basis metadata: ``cutoff`` for the charge basis,
    ``points``/``extent`` for phase grids, ``levels`` for oscillators.
    Sparse matrices are kept sparse.
    """

    matrix: ArrayOrSparse
    basis: Basis
    truncation: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        shape = self.matrix.shape
        if len(shape) != 2 or shape[0] != shape[1] or shape[0] == 0:
            raise ParameterError(
                f"operator must be square, got shape {shape}",
                code=ErrorCode.INVALID_OPERATOR,
                context=make_context(__name__, "HermitianOperator"),
            )
        if not is_hermitian(self.matrix):
            raise ParameterError(
                "operator is not Hermitian",
                code=ErrorCode.INVALID_OPERATOR,
                context=make_context(__name__, "HermitianOperator"),
            )

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def is_sparse(self) -> bool:
        return sp.issparse(self.matrix)

    def dense(self) -> np.ndarray:
        if self.is_sparse:
            return np.asarray(self.matrix.toarray(), dtype=complex)
        return np.asarray(self.matrix, dtype=complex)


def is_hermitian(matrix: ArrayOrSparse, rtol: float = HERMITIAN_RTOL) -> bool:
    """Check ‖H − H†‖_max ≤ rtol·‖H‖_max."""
    if sp.issparse(matrix):
        diff = abs(matrix - matrix.conj().T)
        diff_max = diff.max() if diff.nnz else 0.0
        scale = abs(matrix).max() if matrix.nnz else 0.0
    else:
        m = np.asarray(matrix)
        if not np.all(np.isfinite(m)):
            return False
        diff_max = np.max(np.abs(m - m.conj().T))
        scale = np.max(np.abs(m))
    return bool(diff_max <= rtol * max(float(scale), 1e-300))


def annihilation(levels: int) -> np.ndarray:
    """Truncated ladder operator a with ⟨k−1|a|k⟩ = √k."""
    return np.diag(np.sqrt(np.arange(1, levels, dtype=float)), k=1).astype(complex)


def number(levels: int) -> np.ndarray:
    return np.diag(np.arange(levels, dtype=float)).astype(complex)


def embed(op: np.ndarray, position: int, dims: List[int]) -> np.ndarray:
    """Tensor ``op`` into slot ``position`` of a product space, q0 leftmost."""
    out = np.ones((1, 1), dtype=complex)
    for i, d in enumerate(dims):
        out = np.kron(out, op if i == position else np.eye(d, dtype=complex))
    return out


PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
