"""
Complex dense third-order tensor primitives for the received-signal model

Conventions
-----------

* A tensor Y of dims (L, T, K) is stored as a complex128 ndarray indexed [l, t, k];
  the k-th frontal slice Y[:, :, k] is the L x T block received in block k.
* khatri_rao(A, B) has row index i * B.rows + j, i.e. column n is kron(a_n, b_n).
* vec stacks columns (Fortran order); unvec is its inverse.
* The three unfoldings are laid out as

    mode 1: L x TK, [Y[1], ..., Y[K]]                column k*T + t
    mode 2: T x LK, [Y[1]^T, ..., Y[K]^T]            column k*L + l
    mode 3: K x LT, row k = vec(Y[k])^T              column t*L + l

  which gives Y1 = G (S kr Z)^T, Y2 = Z (S kr G)^T and Y3 = S (Z kr G)^T for Y = [[G, Z, S]].
"""
from typing import (
    List,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from irs_parafac.exceptions import ValidationError

ComplexMatrix = np.ndarray

UNFOLDING_MODES = (1, 2, 3)


def as_complex_matrix(matrix, name: str = "matrix") -> ComplexMatrix:
    """
    Converts the argument into a 2-D complex128 array

    Parameters:
        matrix: array-like
        name: str
            argument name used in the error message
    Returns:
        2-D complex128 ndarray
    """
    array = np.asarray(matrix, dtype=np.complex128)
    if array.ndim != 2:
        raise ValidationError(f"{name} should be a 2-D matrix, got {array.ndim} dimensions")
    return array


class SignalTensor:
    """
    Third-order complex tensor holding the received signal (or its noise part)

    Attributes:
        data: np.ndarray
            complex128 array of shape (L, T, K)
    """

    def __init__(self, data):
        array = np.array(data, dtype=np.complex128, copy=True)
        if array.ndim != 3:
            raise ValidationError(f"SignalTensor needs 3 dimensions, got {array.ndim}")
        if 0 in array.shape:
            raise ValidationError(f"SignalTensor dims should be positive, got {array.shape}")
        self.data = array
        self.data.setflags(write=False)

    @classmethod
    def from_factors(cls, G: ComplexMatrix, Z: ComplexMatrix, S: ComplexMatrix) -> 'SignalTensor':
        """
        Builds [[G, Z, S]], entry (l, t, k) = sum_n G[l, n] Z[t, n] S[k, n]
        """
        G, Z, S = (as_complex_matrix(G, "G"), as_complex_matrix(Z, "Z"), as_complex_matrix(S, "S"))
        if not G.shape[1] == Z.shape[1] == S.shape[1]:
            raise ValidationError(
                f"Factors should share the column count, got {G.shape[1]}, {Z.shape[1]}, {S.shape[1]}")
        return cls(np.einsum('ln,tn,kn->ltk', G, Z, S))

    @property
    def dims(self) -> Tuple[int, int, int]:
        return self.data.shape

    def unfold(self, mode: int) -> ComplexMatrix:
        return unfold(self, mode)

    def slice(self, k: int) -> ComplexMatrix:
        return self.data[:, :, k]

    def __add__(self, other: 'SignalTensor') -> 'SignalTensor':
        if not isinstance(other, SignalTensor):
            return NotImplemented
        if other.dims != self.dims:
            raise ValidationError(f"Can't add tensors of dims {self.dims} and {other.dims}")
        return SignalTensor(self.data + other.data)

    def __sub__(self, other: 'SignalTensor') -> 'SignalTensor':
        if not isinstance(other, SignalTensor):
            return NotImplemented
        if other.dims != self.dims:
            raise ValidationError(f"Can't subtract tensors of dims {self.dims} and {other.dims}")
        return SignalTensor(self.data - other.data)

    def __eq__(self, other):
        if not isinstance(other, SignalTensor):
            return NotImplemented
        return self.dims == other.dims and np.array_equal(self.data, other.data)

    def __repr__(self):
        return f"{self.__class__.__name__}(dims={self.dims})"


def khatri_rao(A: ComplexMatrix, B: ComplexMatrix) -> ComplexMatrix:
    """
    Column-wise Kronecker product

    Parameters:
        A: ComplexMatrix
            K x N
        B: ComplexMatrix
            L x N
    Returns:
        KL x N matrix whose column n is kron(A[:, n], B[:, n])
    """
    A, B = as_complex_matrix(A, "A"), as_complex_matrix(B, "B")
    if A.shape[1] != B.shape[1]:
        raise ValidationError(
            f"Khatri-Rao product needs equal column counts, got {A.shape[1]} and {B.shape[1]}")
    return np.einsum('in,jn->ijn', A, B).reshape((-1, A.shape[1]))


def kronecker(A: ComplexMatrix, B: ComplexMatrix) -> ComplexMatrix:
    """
    Kronecker product, block (i, j) equals A[i, j] * B
    """
    return np.kron(as_complex_matrix(A, "A"), as_complex_matrix(B, "B"))


def vec(matrix: ComplexMatrix) -> np.ndarray:
    return as_complex_matrix(matrix).reshape(-1, order='F')


def unvec(vector, rows: int, cols: int) -> ComplexMatrix:
    vector = np.asarray(vector, dtype=np.complex128).reshape(-1)
    if vector.size != rows * cols:
        raise ValidationError(f"Can't unvec {vector.size} entries into a {rows} x {cols} matrix")
    return vector.reshape((rows, cols), order='F')


def unfold(tensor: Union[SignalTensor, np.ndarray], mode: int) -> ComplexMatrix:
    """
    Matrix unfolding of a received-signal tensor

    Parameters:
        tensor: SignalTensor
        mode: int
            1 (L x TK), 2 (T x LK) or 3 (K x LT)
    Returns:
        the unfolded matrix
    """
    data = tensor.data if isinstance(tensor, SignalTensor) else np.asarray(tensor, dtype=np.complex128)
    if mode not in UNFOLDING_MODES:
        raise ValidationError(f"Unfolding mode should be one of {UNFOLDING_MODES}, got {mode}")
    L, T, K = data.shape
    if mode == 1:
        return data.transpose(0, 2, 1).reshape((L, K * T))
    if mode == 2:
        return data.transpose(1, 2, 0).reshape((T, K * L))
    return data.transpose(2, 1, 0).reshape((K, T * L))


def fold(matrix: ComplexMatrix, mode: int, dims: Sequence[int]) -> SignalTensor:
    """
    Inverse of unfold for the given tensor dims (L, T, K)
    """
    matrix = as_complex_matrix(matrix)
    if mode not in UNFOLDING_MODES:
        raise ValidationError(f"Unfolding mode should be one of {UNFOLDING_MODES}, got {mode}")
    L, T, K = dims
    expected = {1: (L, T * K), 2: (T, L * K), 3: (K, L * T)}[mode]
    if matrix.shape != expected:
        raise ValidationError(f"Mode-{mode} unfolding of dims {tuple(dims)} is {expected}, got {matrix.shape}")
    if mode == 1:
        return SignalTensor(matrix.reshape((L, K, T)).transpose(0, 2, 1))
    if mode == 2:
        return SignalTensor(matrix.reshape((T, K, L)).transpose(2, 0, 1))
    return SignalTensor(matrix.reshape((K, T, L)).transpose(2, 1, 0))


def fold_from_slices(slices: List[ComplexMatrix]) -> SignalTensor:
    """
    Stacks K frontal slices of size L x T into a tensor

    Parameters:
        slices: list
            K matrices Y[1], ..., Y[K], all L x T
    Returns:
        SignalTensor with entry (l, t, k) = slices[k][l, t]
    """
    if len(slices) < 1:
        raise ValidationError("At least one slice is needed to fold a tensor")
    matrices = [as_complex_matrix(s, f"slice {k}") for k, s in enumerate(slices)]
    shape = matrices[0].shape
    for k, matrix in enumerate(matrices):
        if matrix.shape != shape:
            raise ValidationError(f"Slice {k} has dims {matrix.shape}, expected {shape}")
    return SignalTensor(np.stack(matrices, axis=2))


def frobenius_norm_sq(value: Union[SignalTensor, np.ndarray]) -> float:
    """
    Sum of squared magnitudes of all entries of a matrix or tensor
    """
    data = value.data if isinstance(value, SignalTensor) else np.asarray(value)
    flat = data.reshape(-1)
    return float(np.vdot(flat, flat).real)
