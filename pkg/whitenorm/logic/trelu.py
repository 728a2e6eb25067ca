"""

    Translated ReLU: max(x, t) with a learnable threshold t per feature (row).
    With t = 0 this is the ordinary ReLU.

"""
import numpy as np

from ..errors import ShapeError


def _thresholds_for(x: np.ndarray, thresholds) -> np.ndarray:
    t = np.asarray(thresholds, dtype=np.float64)
    if t.ndim == 0:
        t = np.full(x.shape[0], float(t))
    t = t.reshape(-1)
    if t.shape[0] != x.shape[0]:
        raise ShapeError('logic.trelu: {} thresholds for {} features'.format(t.shape[0], x.shape[0]))
    return t[:, None]


def trelu_forward(x: np.ndarray, thresholds) -> np.ndarray:
    return np.maximum(x, _thresholds_for(x, thresholds))


def trelu_backward(grad_out: np.ndarray, x: np.ndarray, thresholds):
    """
    Returns (dx, dt). The gradient passes to x where x > t and to t elsewhere.
    """
    if grad_out.shape != x.shape:
        raise ShapeError('logic.trelu_backward: gradient shape {} does not match input {}'.format(
            grad_out.shape, x.shape))
    t = _thresholds_for(x, thresholds)
    passes = x > t
    dx = np.where(passes, grad_out, 0.0)
    dt = np.where(passes, 0.0, grad_out).sum(axis=1)
    return dx, dt
