"""

    What happens after the whitening itself: the optional per-feature affine map
    y = gamma * x_hat + beta, then the optional TReLU max(y, t).

"""
import numpy as np

from .trelu import trelu_forward, trelu_backward


def output_stage_forward(x_hat: np.ndarray, state, cache=None) -> np.ndarray:
    y = x_hat
    if state.gamma is not None:
        y = state.gamma[:, None] * x_hat + state.beta[:, None]
    if cache is not None:
        cache.normalized = x_hat
        cache.pre_threshold = y if state.thresholds is not None else None
    if state.thresholds is not None:
        return trelu_forward(y, state.thresholds)
    return y


def output_stage_backward(grad_out: np.ndarray, cache, state) -> np.ndarray:
    """Gradient w.r.t. the whitened activations; parameter gradients land in cache.param_grads."""
    grads = {}
    dy = grad_out
    if state.thresholds is not None:
        dy, grads['thresholds'] = trelu_backward(grad_out, cache.pre_threshold, state.thresholds)
    if state.gamma is not None:
        grads['gamma'] = np.sum(dy * cache.normalized, axis=1)
        grads['beta'] = np.sum(dy, axis=1)
        dy = dy * state.gamma[:, None]
    cache.param_grads = grads
    return dy
