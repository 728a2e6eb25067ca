"""

    Convolutional feature maps are whitened by treating every spatial position as an example:
    an m x d x h x w tensor becomes a d x (m h w) batch, and back.

"""
import numpy as np

from ..errors import ShapeError


def unroll_conv(x4) -> np.ndarray:
    x4 = np.asarray(x4)
    if x4.ndim != 4:
        raise ShapeError('logic.unroll_conv: expected an m x d x h x w tensor, got shape {}'.format(x4.shape))
    m, d, h, w = x4.shape
    return np.ascontiguousarray(np.transpose(x4, (1, 0, 2, 3))).reshape(d, m * h * w)


def roll_conv(x, m: int, h: int, w: int) -> np.ndarray:
    x = np.asarray(x)
    if x.ndim != 2 or m < 1 or h < 1 or w < 1 or x.shape[1] != m * h * w:
        raise ShapeError('logic.roll_conv: cannot fold shape {} into m={}, h={}, w={}'.format(x.shape, m, h, w))
    d = x.shape[0]
    return np.ascontiguousarray(np.transpose(x.reshape(d, m, h, w), (1, 0, 2, 3)))
