from typing import Optional

import numpy as np
import scipy.linalg

from irs_parafac.datastructures import Rank1Triple
from irs_parafac.exceptions import (
    DegenerateColumnError,
    DegenerateInputError,
    RankDeficiencyError,
    ValidationError,
)
from irs_parafac.utils.tensor_utils import (
    ComplexMatrix,
    as_complex_matrix,
)

ORTHOGONALITY_RTOL = 1e-10


def rank1_truncated_svd(W) -> Rank1Triple:
    """
    Dominant singular triple of a matrix, or of each matrix in a stack

    Parameters:
        W: array-like
            L x M matrix, or a stack of shape (N, L, M)
    Returns:
        Rank1Triple (u, sigma, v) with unit-norm u, v such that u * sigma * v^H is the best
        rank-1 Frobenius approximation of W. For a stack, u is N x L, sigma has length N
        and v is N x M.
    """
    W = np.asarray(W, dtype=np.complex128)
    if W.ndim == 2:
        if not np.any(W):
            raise DegenerateInputError("Rank-1 approximation of an all-zero matrix has no dominant direction")
        U, s, Vh = scipy.linalg.svd(W, full_matrices=False)
        return Rank1Triple(u=U[:, 0], sigma=float(s[0]), v=Vh[0].conj())

    if W.ndim != 3:
        raise ValidationError(f"Expected a matrix or a stack of matrices, got {W.ndim} dimensions")
    zero = np.flatnonzero(~np.any(W, axis=(1, 2)))
    if zero.size:
        raise DegenerateColumnError(
            int(zero[0]), f"Matrix {zero[0]} of the stack is all zero, no dominant direction")
    U, s, Vh = np.linalg.svd(W, full_matrices=False)
    return Rank1Triple(u=U[:, :, 0], sigma=s[:, 0], v=Vh[:, 0, :].conj())


def ls_solve(A: ComplexMatrix, B, step: str = None) -> np.ndarray:
    """
    Least squares solution argmin_X ||A X - B||_F, i.e. pinv(A) B

    Parameters:
        A: ComplexMatrix
            P x N with full column rank
        B: array-like
            P x Q matrix or length-P vector
        step: str (optional)
            algorithm step reported in a RankDeficiencyError
    Returns:
        N x Q solution (length-N vector for a vector B)
    """
    A = as_complex_matrix(A, "A")
    B = np.asarray(B, dtype=np.complex128)
    P, N = A.shape
    if B.shape[0] != P:
        raise ValidationError(f"Right-hand side has {B.shape[0]} rows, system has {P}")
    if P < N:
        raise RankDeficiencyError(f"{P} equations for {N} unknowns per column", step)

    U, s, Vh = scipy.linalg.svd(A, full_matrices=False)
    tolerance = np.finfo(np.float64).eps * max(P, N) * s[0]
    if s[0] == 0 or s[-1] < tolerance:
        raise RankDeficiencyError(
            f"smallest singular value {s[-1]:.3e} < eps * max(P, N) * largest = {tolerance:.3e}", step)

    projected = U.conj().T @ B
    if B.ndim == 1:
        return Vh.conj().T @ (projected / s)
    return Vh.conj().T @ (projected / s[:, np.newaxis])


def orthogonality_scale(A: ComplexMatrix, rtol: float = ORTHOGONALITY_RTOL) -> Optional[float]:
    """
    Returns c if A^H A = c I (column-orthogonal with equal column energy), otherwise None
    """
    A = as_complex_matrix(A, "A")
    gram = A.conj().T @ A
    c = float(np.real(np.trace(gram))) / A.shape[1]
    if c <= 0:
        return None
    if np.allclose(gram, c * np.eye(A.shape[1]), rtol=0, atol=rtol * c):
        return c
    return None
