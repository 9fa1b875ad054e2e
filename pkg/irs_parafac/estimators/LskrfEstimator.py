import numpy as np

from irs_parafac.config import ScenarioDims
from irs_parafac.datastructures import TrainingPair
from irs_parafac.estimators.base_estimator import (
    BaseEstimator,
    ChannelEstimate,
)
from irs_parafac.estimators.identifiability import LSKRF
from irs_parafac.exceptions import (
    IdentifiabilityError,
    PreconditionError,
    ValidationError,
)
from irs_parafac.utils.linalg_utils import (
    ORTHOGONALITY_RTOL,
    orthogonality_scale,
    rank1_truncated_svd,
)
from irs_parafac.utils.tensor_utils import (
    SignalTensor,
    as_complex_matrix,
    kronecker,
)


def bilinear_filter(Y3: np.ndarray, S: np.ndarray, X: np.ndarray, s_scale: float = 1.0) -> np.ndarray:
    """
    Left and right filtering of the mode-3 unfolding with the known training

        W^T = S^H Y3 (X^* kron I_L) / s_scale

    With S^H S = s_scale I_N and X^H X = I_M the noiseless result is exactly H^T kr G.

    Parameters:
        Y3: np.ndarray
            K x LT mode-3 unfolding
        S: np.ndarray
            K x N IRS matrix
        X: np.ndarray
            T x M pilot matrix
        s_scale: float
            c with S^H S = c I_N (K for unit-modulus DFT designs, 1 for semi-unitary ones)
    Returns:
        ML x N filtered matrix W
    """
    Y3 = as_complex_matrix(Y3, "Y3")
    S = as_complex_matrix(S, "S")
    X = as_complex_matrix(X, "X")
    K, LT = Y3.shape
    T = X.shape[0]
    if S.shape[0] != K:
        raise ValidationError(f"S has {S.shape[0]} rows, Y3 has {K}")
    if LT % T:
        raise ValidationError(f"Y3 has {LT} columns, not a multiple of T={T}")
    if not s_scale or s_scale <= 0:
        raise ValidationError(f"s_scale should be positive, got {s_scale}")
    L = LT // T
    W_t = S.conj().T @ Y3 @ kronecker(X.conj(), np.eye(L))
    return W_t.T / s_scale


def lskrf(W: np.ndarray, L: int, M: int) -> ChannelEstimate:
    """
    Least squares Khatri-Rao factorization of W ~ H^T kr G

    Column n is reshaped to W_n = unvec_{L x M}(w_n) and replaced by its best rank-1
    approximation sigma u v^H, giving g_n = sqrt(sigma) u and h_n = sqrt(sigma) v^*.

    Parameters:
        W: np.ndarray
            ML x N
        L: int
        M: int
    Returns:
        ChannelEstimate with H_hat (N x M), G_hat (L x N) and iterations = 0
    """
    W = as_complex_matrix(W, "W")
    if W.shape[0] != M * L:
        raise ValidationError(f"W should have M*L={M * L} rows, got {W.shape[0]}")
    N = W.shape[1]
    # column-stacking unvec of every column at once: blocks[n][l, m] = W[m*L + l, n]
    blocks = W.T.reshape((N, M, L)).transpose(0, 2, 1)
    u, sigma, v = rank1_truncated_svd(blocks)
    root = np.sqrt(sigma)
    H_hat = root[:, np.newaxis] * v.conj()
    G_hat = (root[:, np.newaxis] * u).T
    return ChannelEstimate(H_hat=H_hat, G_hat=G_hat, iterations=0)


class Lskrf(BaseEstimator):
    """
    Closed-form estimator: bilinear filtering of Y3 followed by N rank-1 approximations

    Attributes:
        settings: BalsSettings
            unused, kept for the common estimator interface
    """
    name = LSKRF

    def __init__(self, settings=None):
        super().__init__(settings)

    def estimate(self, tensor: SignalTensor, training: TrainingPair, rng: np.random.Generator = None) -> ChannelEstimate:
        L, T, K = tensor.dims
        M, N = training.X.shape[1], training.S.shape[1]
        report = self.check_identifiability(ScenarioDims(M=M, L=L, N=N, T=T, K=K))
        if not report:
            raise IdentifiabilityError(report.violations, cell="lskrf")
        s_scale = orthogonality_scale(training.S)
        if s_scale is None:
            raise PreconditionError("LSKRF needs a column-orthogonal S (S^H S = c I_N)")
        if training.s_scale is not None and not np.isclose(training.s_scale, s_scale, rtol=ORTHOGONALITY_RTOL, atol=0):
            raise ValidationError(f"s_scale {training.s_scale} doesn't match S^H S = {s_scale} I_N")
        x_scale = orthogonality_scale(training.X)
        if x_scale is None:
            raise PreconditionError("LSKRF needs a column-orthogonal X")
        W = bilinear_filter(tensor.unfold(3), training.S, training.X, s_scale * x_scale)
        return lskrf(W, L, M)
