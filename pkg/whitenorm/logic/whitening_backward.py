"""

    Backward pass of decorrelated batch normalization, simplified form.

    Per group, with column-vector gradients (each column is one example):

        dX~ = D^T dX_hat            (ZCA; PCA uses dX_hat directly)
        f   = mean of the columns of dX~
        F_c = (1/m) dX~ X~^T
        K_ij = 1 / (sigma_i - sigma_j), K_ii = 0
        S   = 2 sym(K^T o (Lambda F_c^T + Lambda^1/2 F_c Lambda^1/2))    (PCA drops the second term)
        M   = diag(F_c)
        dX  = U^T (dX~ - f 1^T + (S - M) X~)

    The eigenvalue differences in K must be resolvable: gaps below 1e-8 * sigma_1 raise
    DegenerateSpectrumError unless the state asks for clamping.

"""
import logging

import numpy as np

from ..errors import DegenerateSpectrumError, ShapeError
from ..states import ForwardCache, GroupCache
from .batch_norm import bn_backward
from .output_stage import output_stage_backward

logger = logging.getLogger(__name__)

RELATIVE_GAP = 1e-8


def gap_matrix(eigenvalues: np.ndarray, clamp: bool = False) -> np.ndarray:
    """K with K_ij = 1 / (sigma_i - sigma_j) off the diagonal and zeros on it."""
    k = eigenvalues.shape[0]
    diff = eigenvalues[:, None] - eigenvalues[None, :]
    off = ~np.eye(k, dtype=bool)
    if k < 2:
        return np.zeros((k, k))

    threshold = RELATIVE_GAP * float(np.max(np.abs(eigenvalues)))
    small = off & (np.abs(diff) < threshold)
    if np.any(small):
        gap = float(np.min(np.abs(diff[off])))
        if not clamp:
            raise DegenerateSpectrumError(
                'logic.gap_matrix: eigenvalue gap {:.3e} is below {:.3e}; the eigenvector derivative is undefined'.format(
                    gap, threshold), gap=gap)
        logger.warning('gap_matrix: clamping eigenvalue gap %.3e to %.3e', gap, threshold)
        upper = np.triu(np.ones((k, k), dtype=bool), 1)
        direction = np.where(diff != 0.0, np.sign(diff), np.where(upper, 1.0, -1.0))
        diff = np.where(small, direction * threshold, diff)

    out = np.zeros((k, k))
    out[off] = 1.0 / diff[off]
    return out


def _check_gradient(grad_out, cache: ForwardCache, state, where: str) -> np.ndarray:
    grad_out = np.asarray(grad_out, dtype=np.float64)
    if grad_out.shape != (state.dim, cache.batch_size):
        raise ShapeError('{}: gradient shape {} does not match the cached batch {}'.format(
            where, grad_out.shape, (state.dim, cache.batch_size)))
    if len(cache.groups) != state.num_groups:
        raise ShapeError('{}: cache holds {} groups, state expects {}'.format(
            where, len(cache.groups), state.num_groups))
    return grad_out


def whitened_group_backward(grad_hat: np.ndarray, group: GroupCache, mode: str, clamp: bool = False) -> np.ndarray:
    m = grad_hat.shape[1]
    eigenvalues = group.eigenvalues
    d = group.eigenvectors
    x_tilde = group.whitened

    grad_tilde = d.T @ grad_hat if mode == 'zca' else grad_hat
    f = grad_tilde.mean(axis=1, keepdims=True)
    f_c = grad_tilde @ x_tilde.T / m

    root = np.sqrt(eigenvalues)
    inner = eigenvalues[:, None] * f_c.T
    if mode == 'zca':
        inner = inner + root[:, None] * f_c * root[None, :]
    weighted = gap_matrix(eigenvalues, clamp).T * inner
    s = weighted + weighted.T
    s_minus_m = s - np.diag(np.diagonal(f_c))

    return group.projection.T @ (grad_tilde - f + s_minus_m @ x_tilde)


def dbn_backward(grad_out, cache: ForwardCache, state) -> np.ndarray:
    if state.mode == 'bn':
        return bn_backward(grad_out, cache, state)

    grad_out = _check_gradient(grad_out, cache, state, 'logic.dbn_backward')
    grad_hat = output_stage_backward(grad_out, cache, state)

    grad_in = np.empty_like(grad_hat)
    for (start, stop), group in zip(state.groups, cache.groups):
        grad_in[start:stop, :] = whitened_group_backward(grad_hat[start:stop, :], group, state.mode,
                                                         state.clamp_degenerate)
    return grad_in
