import logging

import numpy as np

from irs_parafac.config import (
    BalsSettings,
    ScenarioDims,
)
from irs_parafac.datastructures import TrainingPair
from irs_parafac.estimators.base_estimator import (
    BaseEstimator,
    ChannelEstimate,
)
from irs_parafac.estimators.identifiability import (
    BALS,
    check_identifiability,
)
from irs_parafac.exceptions import (
    DegenerateInputError,
    IdentifiabilityError,
    PreconditionError,
    RankDeficiencyError,
    ValidationError,
)
from irs_parafac.system_model import complex_gaussian
from irs_parafac.utils.linalg_utils import (
    ls_solve,
    orthogonality_scale,
)
from irs_parafac.utils.tensor_utils import (
    SignalTensor,
    as_complex_matrix,
    frobenius_norm_sq,
    khatri_rao,
)

logger = logging.getLogger(__name__)

STEP_G = "step 3"
STEP_H = "step 4"


def _column_energy(matrix: np.ndarray, name: str, step: str) -> np.ndarray:
    energy = np.einsum('in,in->n', matrix.conj(), matrix).real
    if np.any(energy == 0):
        raise RankDeficiencyError(f"column {int(np.flatnonzero(energy == 0)[0])} of {name} is zero", step)
    return energy


def _require_scale(matrix: np.ndarray, name: str, scale: float = None) -> float:
    if scale is None:
        scale = orthogonality_scale(matrix)
    if scale is None:
        raise PreconditionError(f"The fast path needs a column-orthogonal {name} ({name}^H {name} = c I)")
    return scale


def bals_fast_step_g(Y1: np.ndarray, S: np.ndarray, Z: np.ndarray, s_scale: float = None) -> np.ndarray:
    """
    G update without a pseudo-inverse

    (S kr Z)^H (S kr Z) = (S^H S) * (Z^H Z) (entrywise) = c diag(||z_n||^2) when S^H S = c I_N,
    so the normal equations decouple per column: g_n = Y1 conj(s_n kron z_n) / (c ||z_n||^2).

    Parameters:
        Y1: np.ndarray
            L x TK mode-1 unfolding
        S: np.ndarray
            K x N IRS matrix with S^H S = c I_N
        Z: np.ndarray
            T x N, X H^T of the current iterate
        s_scale: float (optional)
            c, checked from S when omitted
    Returns:
        L x N estimate of G
    """
    c = _require_scale(S, "S", s_scale)
    A = khatri_rao(S, Z)
    if A.shape[0] != Y1.shape[1]:
        raise ValidationError(f"(S kr Z) has {A.shape[0]} rows, Y1 has {Y1.shape[1]} columns")
    return (Y1 @ A.conj()) / (c * _column_energy(Z, "Z", STEP_G))


def bals_fast_step_h(Y2: np.ndarray, S: np.ndarray, G: np.ndarray, X: np.ndarray,
                     s_scale: float = None, x_scale: float = None) -> np.ndarray:
    """
    H update without pseudo-inverses, using X^+ = X^H / c_X and
    (S kr G)^H (S kr G) = c diag(||g_n||^2)

    Returns:
        N x M estimate of H
    """
    c = _require_scale(S, "S", s_scale)
    c_x = _require_scale(X, "X", x_scale)
    B = khatri_rao(S, G)
    if B.shape[0] != Y2.shape[1]:
        raise ValidationError(f"(S kr G) has {B.shape[0]} rows, Y2 has {Y2.shape[1]} columns")
    Z = (Y2 @ B.conj()) / (c * _column_energy(G, "G", STEP_H))
    return (X.conj().T @ Z / c_x).T


def bals_step_g(Y1: np.ndarray, S: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """
    G = Y1 [(S kr Z)^T]^+
    """
    return ls_solve(khatri_rao(S, Z), Y1.T, step=STEP_G).T


def bals_step_h(Y2: np.ndarray, S: np.ndarray, G: np.ndarray, X: np.ndarray) -> np.ndarray:
    """
    H^T = X^+ Y2 [(S kr G)^T]^+
    """
    Z = ls_solve(khatri_rao(S, G), Y2.T, step=STEP_H).T
    return ls_solve(X, Z, step=STEP_H).T


def bals(Y1: np.ndarray, Y2: np.ndarray, S: np.ndarray, X: np.ndarray, settings: BalsSettings = None,
         rng: np.random.Generator = None) -> ChannelEstimate:
    """
    Bilinear alternating least squares estimation of H and G with S known

    Starting from a random CN(0, 1) H, alternates the G update (mode-1 unfolding) and the
    H update (mode-2 unfolding) until the reconstruction error e(i) = ||Y - [[G, X H^T, S]]||^2
    (divided by ||Y||^2 when settings.normalize_error) changes by at most settings.tolerance.

    Parameters:
        Y1: np.ndarray
            L x TK mode-1 unfolding of the received tensor
        Y2: np.ndarray
            T x LK mode-2 unfolding
        S: np.ndarray
            K x N IRS matrix
        X: np.ndarray
            T x M pilot matrix
        settings: BalsSettings (optional)
        rng: np.random.Generator (optional)
            stream of the initial H, seeded with settings.init_seed when omitted
    Returns:
        ChannelEstimate with the iteration count and the error after every iteration
    """
    settings = settings if settings is not None else BalsSettings()
    Y1, Y2 = as_complex_matrix(Y1, "Y1"), as_complex_matrix(Y2, "Y2")
    S, X = as_complex_matrix(S, "S"), as_complex_matrix(X, "X")
    L, TK = Y1.shape
    T, LK = Y2.shape
    K, N = S.shape
    M = X.shape[1]
    if X.shape[0] != T or TK != T * K or LK != L * K:
        raise ValidationError(
            f"Inconsistent dims: Y1 {Y1.shape}, Y2 {Y2.shape}, S {S.shape}, X {X.shape}")
    report = check_identifiability(ScenarioDims(M=M, L=L, N=N, T=T, K=K), BALS)
    if not report:
        raise IdentifiabilityError(report.violations, cell=BALS)

    total_energy = frobenius_norm_sq(Y1)
    if total_energy == 0:
        raise DegenerateInputError("BALS needs a nonzero received tensor")
    norm = total_energy if settings.normalize_error else 1.0

    s_scale = orthogonality_scale(S) if settings.fast_path else None
    x_scale = orthogonality_scale(X) if settings.fast_path else None
    fast = s_scale is not None and x_scale is not None
    if settings.fast_path and not fast:
        logger.debug("S or X is not column-orthogonal, BALS uses the pseudo-inverse updates")

    rng = rng if rng is not None else np.random.default_rng(settings.init_seed)
    H = complex_gaussian(rng, (N, M))
    G = None
    trace = []
    converged = False
    iteration = 0
    while iteration < settings.max_iterations:
        iteration += 1
        Z = X @ H.T
        if fast:
            G = bals_fast_step_g(Y1, S, Z, s_scale)
            H = bals_fast_step_h(Y2, S, G, X, s_scale, x_scale)
        else:
            G = bals_step_g(Y1, S, Z)
            H = bals_step_h(Y2, S, G, X)

        residual = Y1 - G @ khatri_rao(S, X @ H.T).T
        error = frobenius_norm_sq(residual) / norm
        trace.append(error)
        logger.debug("BALS iteration %d: error %.3e", iteration, error)
        if iteration > 1 and abs(trace[-1] - trace[-2]) <= settings.tolerance:
            converged = True
            break

    if not converged:
        logger.warning("BALS stopped at the iteration cap (%d) without converging, last error %.3e",
                       settings.max_iterations, trace[-1])
    return ChannelEstimate(H_hat=H, G_hat=G, iterations=iteration, error_trace=trace, converged=converged)


class Bals(BaseEstimator):
    """
    Iterative estimator alternating least squares updates of G and H with S fixed

    Attributes:
        settings: BalsSettings
            tolerance, iteration cap, error normalization, fast path and init seed
    """
    name = BALS

    def __init__(self, settings: BalsSettings = None):
        super().__init__(settings)

    def estimate(self, tensor: SignalTensor, training: TrainingPair, rng: np.random.Generator = None) -> ChannelEstimate:
        return bals(tensor.unfold(1), tensor.unfold(2), training.S, training.X, self.settings, rng=rng)
