"""

    Backward pass of decorrelated batch normalization, unsimplified.

    Walks the chain one intermediate at a time (x~, U, Lambda, D, Sigma, mu, x) the way the
    derivation is written, gradients as columns:

        dX~     = D^T dX_hat                       (ZCA; PCA uses dX_hat)
        dU      = dX~ Xc^T
        dLambda = dU D (-1/2 Lambda^{-3/2})
        dD      = dU^T Lambda^{-1/2} + dX_hat X~^T (second term ZCA only)
        dSigma  = D (K^T o (D^T dD) + diag(dLambda)) D^T,  then symmetrized
        dmu     = -U^T sum(dX~) - (2/m) dSigma_sym sum(Xc)
        dX      = U^T dX~ + (2/m) dSigma_sym Xc + dmu / m

    It costs more than the simplified form and exists to cross-check it.

"""
import numpy as np

from ..linalg import sym
from ..states import ForwardCache, GroupCache
from .batch_norm import bn_backward
from .output_stage import output_stage_backward
from .whitening_backward import gap_matrix, _check_gradient


def reference_group_backward(grad_hat: np.ndarray, group: GroupCache, mode: str, clamp: bool = False) -> np.ndarray:
    m = grad_hat.shape[1]
    eigenvalues = group.eigenvalues
    d = group.eigenvectors
    x_tilde = group.whitened
    xc = group.centered if group.centered is not None else (d * np.sqrt(eigenvalues)) @ x_tilde
    u = group.projection

    grad_tilde = d.T @ grad_hat if mode == 'zca' else grad_hat
    grad_u = grad_tilde @ xc.T
    grad_lambda = (grad_u @ d) * (-0.5 * eigenvalues ** -1.5)[None, :]
    grad_d = grad_u.T * (eigenvalues ** -0.5)[None, :]
    if mode == 'zca':
        grad_d = grad_d + grad_hat @ x_tilde.T

    k_matrix = gap_matrix(eigenvalues, clamp)
    grad_sigma = d @ (k_matrix.T * (d.T @ grad_d) + np.diag(np.diagonal(grad_lambda))) @ d.T
    grad_sigma = sym(grad_sigma)

    grad_mu = (-(u.T @ grad_tilde.sum(axis=1, keepdims=True))
               - (2.0 / m) * grad_sigma @ xc.sum(axis=1, keepdims=True))
    return u.T @ grad_tilde + (2.0 / m) * grad_sigma @ xc + grad_mu / m


def dbn_backward_reference(grad_out, cache: ForwardCache, state) -> np.ndarray:
    if state.mode == 'bn':
        return bn_backward(grad_out, cache, state, reference=True)

    grad_out = _check_gradient(grad_out, cache, state, 'logic.dbn_backward_reference')
    grad_hat = output_stage_backward(grad_out, cache, state)

    grad_in = np.empty_like(grad_hat)
    for (start, stop), group in zip(state.groups, cache.groups):
        grad_in[start:stop, :] = reference_group_backward(grad_hat[start:stop, :], group, state.mode,
                                                          state.clamp_degenerate)
    return grad_in
