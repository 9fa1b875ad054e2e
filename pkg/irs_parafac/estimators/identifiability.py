from irs_parafac.config import ScenarioDims
from irs_parafac.datastructures import IdentifiabilityReport

LSKRF = "lskrf"
BALS = "bals"


def check_identifiability(dims: ScenarioDims, method: str) -> IdentifiabilityReport:
    """
    Checks the training design requirements of an estimator

    LSKRF filters Y3 with S^H and X^*, which needs column-orthogonal S and X: K >= N and T >= M.
    BALS needs full column rank of (S kr X H^T) and (S kr G), K min(T, L) >= N, and a left
    inverse of X for the H update, T >= M.

    Parameters:
        dims: ScenarioDims
        method: str
            "lskrf" or "bals" (case insensitive)
    Returns:
        IdentifiabilityReport, falsy when any inequality is violated
    """
    method = method.lower()
    violations = []
    if method == LSKRF:
        if dims.K < dims.N:
            violations.append(f"K >= N violated (K={dims.K}, N={dims.N})")
    elif method == BALS:
        capacity = dims.K * min(dims.T, dims.L)
        if capacity < dims.N:
            violations.append(
                f"K*min(T,L) >= N violated ({dims.K}*min({dims.T},{dims.L})={capacity}, N={dims.N})")
    else:
        raise ValueError(f"Unknown estimator '{method}', expected '{LSKRF}' or '{BALS}'")
    if dims.T < dims.M:
        violations.append(f"T >= M violated (T={dims.T}, M={dims.M})")
    return IdentifiabilityReport(method=method, violations=violations)
