"""

    Stochastic gradient descent with momentum and L2 weight decay, in place:

        v <- momentum * v - lr * (g + weight_decay * p)
        p <- p + v

"""
import numpy as np

from ..errors import ShapeError


def sgd_step(params: dict, grads: dict, velocity: dict, config, lr: float = None):
    """
    params and grads map the same keys to arrays of equal shape. Missing velocity entries start
    at zero. Arrays in params and velocity are updated in place; both dicts are returned.
    """
    lr = config.lr if lr is None else lr
    momentum = config.momentum
    decay = config.weight_decay

    for key, p in params.items():
        if key not in grads:
            raise ShapeError('logic.sgd_step: no gradient for parameter {}'.format(key))
        g = np.asarray(grads[key])
        if g.shape != p.shape:
            raise ShapeError('logic.sgd_step: gradient of {} has shape {}, parameter has {}'.format(
                key, g.shape, p.shape))

        v = velocity.get(key)
        if v is None:
            v = velocity[key] = np.zeros_like(p)
        elif v.shape != p.shape:
            raise ShapeError('logic.sgd_step: velocity of {} has shape {}, parameter has {}'.format(
                key, v.shape, p.shape))

        step = g + decay * p if decay else g
        v[...] = momentum * v - lr * step
        p += v

    return params, velocity
