"""
Scaling ambiguities of the estimates

Both estimators return H_hat = D_H H and G_hat = G D_G with diagonal D_H D_G = I_N. The
cascaded channel G_hat H_hat is free of them; the per-channel estimates are aligned to
a reference with resolve_scaling. S is known, so no permutation ambiguity exists.
"""
import attr
import numpy as np

from irs_parafac.datastructures import ChannelPair
from irs_parafac.exceptions import (
    DegenerateColumnError,
    ValidationError,
)


def cascaded_channel(est: 'ChannelEstimate') -> np.ndarray:
    """
    End-to-end L x M channel G_hat H_hat, the sum over n of g_hat_n h_hat_n^T
    """
    return est.G_hat @ est.H_hat


def resolve_scaling(est: 'ChannelEstimate', truth: ChannelPair) -> 'ChannelEstimate':
    """
    Removes the per-element scaling ambiguity against known channels

    For each n, alpha_n = g_hat_n^H g_n / g_hat_n^H g_hat_n is the least squares scalar
    mapping g_hat_n onto g_n; column n of G_hat is multiplied by alpha_n and row n of H_hat
    divided by it, which leaves the cascaded channel unchanged.

    Parameters:
        est: ChannelEstimate
        truth: ChannelPair
    Returns:
        rescaled ChannelEstimate
    """
    if est.G_hat.shape != truth.G.shape or est.H_hat.shape != truth.H.shape:
        raise ValidationError(
            f"Estimate dims G {est.G_hat.shape}, H {est.H_hat.shape} don't match "
            f"G {truth.G.shape}, H {truth.H.shape}")
    energy = np.einsum('ln,ln->n', est.G_hat.conj(), est.G_hat).real
    zero = np.flatnonzero(energy == 0)
    if zero.size:
        raise DegenerateColumnError(int(zero[0]), f"Estimated column {zero[0]} of G is all zero")
    alpha = np.einsum('ln,ln->n', est.G_hat.conj(), truth.G) / energy
    orthogonal = np.flatnonzero(alpha == 0)
    if orthogonal.size:
        raise DegenerateColumnError(
            int(orthogonal[0]), f"Estimated column {orthogonal[0]} of G is orthogonal to the reference")
    return attr.evolve(est, G_hat=est.G_hat * alpha[np.newaxis, :], H_hat=est.H_hat / alpha[:, np.newaxis])
