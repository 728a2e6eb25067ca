"""

    Forward pass of decorrelated batch normalization, per group of features:

        mu      = mean of the batch
        Sigma   = (1/m) (X - mu)(X - mu)^T + eps I  =  D Lambda D^T
        U       = Lambda^{-1/2} D^T                  (PCA whitening)
        x~      = U (x - mu)
        x_hat   = D x~                               (ZCA only; PCA stops at x~)

    Training updates the running mean and running whitening matrix by
        mu_E <- (1 - lambda) mu_E + lambda mu
        W_E  <- (1 - lambda) W_E  + lambda W
    where W is the whitening matrix applied to the batch (D U for ZCA, U for PCA).
    Inference applies W_E (x - mu_E) and touches nothing.

"""
import logging

import numpy as np

from ..linalg import EigDecomp, sym_eig, covariance, zca_from_decomp, pca_from_decomp
from ..states import ForwardCache, GroupCache
from .batch_norm import bn_forward, check_batch
from .output_stage import output_stage_forward

logger = logging.getLogger(__name__)


def whitening_matrix(decomp: EigDecomp, mode: str) -> np.ndarray:
    if mode == 'pca':
        return pca_from_decomp(decomp)
    return zca_from_decomp(decomp)


def whiten_group(xc: np.ndarray, decomp: EigDecomp, mode: str = 'zca'):
    """
    Whiten an already centered k x m block with the given decomposition of its covariance.
    Returns (x~, x_hat).
    """
    x_tilde = pca_from_decomp(decomp) @ xc
    if mode == 'pca':
        return x_tilde, x_tilde
    return x_tilde, decomp.eigenvectors @ x_tilde


def dbn_forward(x, state):
    if state.mode == 'bn':
        return bn_forward(x, state)

    x = check_batch(x, state, 'logic.dbn_forward')
    m = x.shape[1]
    lam = state.momentum

    cache = ForwardCache(batch_size=m)
    out = np.empty_like(x)
    updates = []

    for start, stop in state.groups:
        block = x[start:stop, :]
        mean = block.mean(axis=1, keepdims=True)
        xc = block - mean
        decomp = sym_eig(covariance(block, state.epsilon), method=state.eigensolver)

        x_tilde, x_hat = whiten_group(xc, decomp, state.mode)
        out[start:stop, :] = x_hat
        cache.groups.append(GroupCache(mean=mean, eigenvalues=decomp.eigenvalues,
                                       eigenvectors=decomp.eigenvectors, whitened=x_tilde, centered=xc))
        updates.append((start, stop, mean[:, 0], whitening_matrix(decomp, state.mode)))

    out = output_stage_forward(out, state, cache)

    # running statistics change only once every group has been whitened
    for start, stop, mean, whitening in updates:
        state.running_mean[start:stop] = (1.0 - lam) * state.running_mean[start:stop] + lam * mean
        state.running_whitening[start:stop, start:stop] = (
            (1.0 - lam) * state.running_whitening[start:stop, start:stop] + lam * whitening)

    return out, cache


def running_whiten(x: np.ndarray, state) -> np.ndarray:
    """W_E (x - mu_E) group by group, before the output stage."""
    out = np.empty_like(x)
    for index, (start, stop) in enumerate(state.groups):
        out[start:stop, :] = state.whitening_block(index) @ (x[start:stop, :] - state.running_mean[start:stop, None])
    return out


def dbn_infer(x, state) -> np.ndarray:
    x = check_batch(x, state, 'logic.dbn_infer', training=False)
    return output_stage_forward(running_whiten(x, state), state)


def bn_infer(x, state) -> np.ndarray:
    return dbn_infer(x, state)


def normalize(x, state):
    """Dispatch on state.training: (output, cache) in training, (output, None) in inference."""
    if state.training:
        return dbn_forward(x, state)
    infer = bn_infer if state.mode == 'bn' else dbn_infer
    return infer(x, state), None
