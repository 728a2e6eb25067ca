"""

    Batch Normalization, the per-feature baseline:

        x_hat = (x - mu) / sqrt(var + eps)

    with mu and var (biased) taken over the examples of the batch. The running whitening matrix
    of a BN state stays diagonal and holds the averaged 1 / sqrt(var + eps).

"""
import numpy as np

from ..errors import InsufficientBatchError, InvalidInputError, ShapeError, NotPositiveDefiniteError
from ..states import ForwardCache, GroupCache
from .output_stage import output_stage_forward, output_stage_backward


def check_batch(x: np.ndarray, state, where: str, training: bool = True) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != state.dim:
        raise ShapeError('{}: expected a {} x m batch, got shape {}'.format(where, state.dim, x.shape))
    if not np.all(np.isfinite(x)):
        raise InvalidInputError('{}: batch contains NaN or Inf'.format(where))
    if training and x.shape[1] < 2:
        raise InsufficientBatchError('{}: training needs at least 2 examples, got {}'.format(where, x.shape[1]))
    if x.shape[1] < 1:
        raise InsufficientBatchError('{}: empty batch'.format(where))
    return x


def standardize(x: np.ndarray, eps: float):
    mean = x.mean(axis=1, keepdims=True)
    xc = x - mean
    variance = np.mean(xc * xc, axis=1) + eps
    if np.any(variance <= 0.0):
        worst = float(np.min(variance))
        raise NotPositiveDefiniteError(
            'logic.batch_norm: zero variance with eps = {}; use eps > 0 for constant features'.format(eps),
            eigenvalue=worst)
    inv_std = 1.0 / np.sqrt(variance)
    return mean, xc, variance, xc * inv_std[:, None]


def bn_forward(x, state):
    x = check_batch(x, state, 'logic.bn_forward')
    m = x.shape[1]

    mean, xc, variance, x_hat = standardize(x, state.epsilon)

    lam = state.momentum
    state.running_mean = (1.0 - lam) * state.running_mean + lam * mean[:, 0]
    running_scale = np.diagonal(state.running_whitening)
    state.running_whitening = np.diag((1.0 - lam) * running_scale + lam / np.sqrt(variance))

    cache = ForwardCache(batch_size=m)
    cache.groups.append(GroupCache(mean=mean, eigenvalues=variance, eigenvectors=None,
                                   whitened=x_hat, centered=xc))
    return output_stage_forward(x_hat, state, cache), cache


def _bn_gradient_simplified(dx_hat, group: GroupCache) -> np.ndarray:
    x_hat = group.whitened
    inv_std = 1.0 / np.sqrt(group.eigenvalues)[:, None]
    return inv_std * (dx_hat - dx_hat.mean(axis=1, keepdims=True)
                      - x_hat * np.mean(dx_hat * x_hat, axis=1, keepdims=True))


def _bn_gradient_chain(dx_hat, group: GroupCache) -> np.ndarray:
    m = dx_hat.shape[1]
    xc = group.centered
    variance = group.eigenvalues[:, None]
    inv_std = 1.0 / np.sqrt(variance)
    d_var = np.sum(dx_hat * xc, axis=1, keepdims=True) * -0.5 * variance ** -1.5
    d_mean = (np.sum(-dx_hat * inv_std, axis=1, keepdims=True)
              + d_var * np.sum(-2.0 * xc, axis=1, keepdims=True) / m)
    return dx_hat * inv_std + d_var * 2.0 * xc / m + d_mean / m


def bn_backward(grad_out, cache: ForwardCache, state, reference: bool = False) -> np.ndarray:
    grad_out = np.asarray(grad_out, dtype=np.float64)
    if grad_out.shape != (state.dim, cache.batch_size):
        raise ShapeError('logic.bn_backward: gradient shape {} does not match the cached batch {}'.format(
            grad_out.shape, (state.dim, cache.batch_size)))
    dx_hat = output_stage_backward(grad_out, cache, state)
    group = cache.groups[0]
    if reference:
        return _bn_gradient_chain(dx_hat, group)
    return _bn_gradient_simplified(dx_hat, group)
