"""Eigenvalue solver wrapper and the Spectrum result type."""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..core.errors import ErrorCode, NumericError, ParameterError, make_context
from ..core.operators import HermitianOperator, is_hermitian
from ..core.units import TWO_PI


@dataclass(frozen=True)
class Spectrum:
    """Lowest eigenvalues of a Hamiltonian.

    Attributes:
        energies: ascending eigenvalues, GHz
        states: optional eigenvectors as columns
        omega_01: ω₀₁ in rad/ns
        omega_12: ω₁₂ in rad/ns, None with fewer than three levels
        alpha: anharmonicity ω₁₂ − ω₀₁ in rad/ns
    """

    energies: np.ndarray
    states: Optional[np.ndarray] = None

    @property
    def omega_01(self) -> float:
        return float(TWO_PI * (self.energies[1] - self.energies[0]))

    @property
    def omega_12(self) -> Optional[float]:
        if len(self.energies) < 3:
            return None
        return float(TWO_PI * (self.energies[2] - self.energies[1]))

    @property
    def alpha(self) -> Optional[float]:
        omega_12 = self.omega_12
        if omega_12 is None:
            return None
        return omega_12 - self.omega_01


def spectrum(
    H: Union[HermitianOperator, np.ndarray, sp.spmatrix],
    k: int = 3,
    return_states: bool = False,
) -> Spectrum:
    """Compute the ``k`` lowest eigenvalues of a Hamiltonian.

    Dense matrices go through LAPACK with an index subset; sparse matrices use
    shift-invert Lanczos below a Gershgorin lower bound of the spectrum.

    Args:
        H: HermitianOperator or raw matrix
        k: number of levels
        return_states: keep the eigenvectors

    Returns:
        Spectrum with ascending energies

    Raises:
        ParameterError: invalid-operator for non-Hermitian input or bad k
    """
    matrix = H.matrix if isinstance(H, HermitianOperator) else H
    if not isinstance(H, HermitianOperator) and not is_hermitian(matrix):
        raise ParameterError(
            "spectrum requires a Hermitian operator",
            code=ErrorCode.INVALID_OPERATOR,
            context=make_context(__name__, "spectrum"),
        )
    dim = matrix.shape[0]
    if not 1 <= k <= dim:
        raise ParameterError(
            f"k={k} outside 1..{dim}",
            code=ErrorCode.INVALID_OPERATOR,
            context=make_context(__name__, "spectrum", k=k, dim=dim),
        )

    if sp.issparse(matrix) and k < dim - 1:
        values, vectors = _sparse_lowest(matrix, k)
    else:
        dense = matrix.toarray() if sp.issparse(matrix) else np.asarray(matrix)
        values, vectors = la.eigh(dense, subset_by_index=[0, k - 1])

    order = np.argsort(values)
    values = np.asarray(values)[order]
    vectors = vectors[:, order]
    if not np.all(np.isfinite(values)):
        raise NumericError(
            "eigenvalues are not finite",
            context=make_context(__name__, "spectrum"),
        )
    return Spectrum(energies=values, states=vectors if return_states else None)


def _sparse_lowest(matrix: sp.spmatrix, k: int) -> Tuple[np.ndarray, np.ndarray]:
    csc = sp.csc_matrix(matrix)
    diagonal = csc.diagonal().real
    off_sum = np.asarray(abs(csc).sum(axis=1)).ravel() - np.abs(diagonal)
    sigma = float(np.min(diagonal - off_sum)) - 1.0
    v0 = np.ones(csc.shape[0], dtype=csc.dtype)
    try:
        values, vectors = spla.eigsh(csc, k=k, sigma=sigma, which="LM", v0=v0)
    except spla.ArpackNoConvergence as exc:
        raise NumericError(
            "sparse eigensolver did not converge",
            context=make_context(__name__, "spectrum", k=k),
            diagnostics={"converged": len(exc.eigenvalues)},
        ) from exc
    return values.real, vectors
