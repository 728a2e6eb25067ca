"""

    Singular values of a normalization layer's training-mode Jacobian.

    The map takes the whole d x m batch to the whole output batch, so J is (d m) x (d m).
    Row r of J is the backward pass of the r-th unit vector; the singular values come from an SVD
    of J itself, not of J J^T. Translations of the batch are always in the null space, so at least
    d singular values are zero.

"""
import copy

import numpy as np

from ..errors import ShapeError
from ..states import DbnState
from .whiten_batch import dbn_forward
from .whitening_backward import dbn_backward

MAX_ENTRIES = 1024
ZERO_TOLERANCE = 1e-8


def batch_jacobian(x, state: DbnState) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    size = x.size
    if size > MAX_ENTRIES:
        raise ShapeError('logic.batch_jacobian: {} entries exceed the cap of {}'.format(size, MAX_ENTRIES))

    state = copy.deepcopy(state)
    _, cache = dbn_forward(x, state)
    jacobian = np.empty((size, size))
    unit = np.zeros(size)
    for r in range(size):
        unit[r] = 1.0
        jacobian[r, :] = dbn_backward(unit.reshape(x.shape), cache, state).reshape(-1)
        unit[r] = 0.0
    return jacobian


def isometry_report(x, state: DbnState, band: float = 0.1) -> dict:
    """Singular value summary; `near_one` is the fraction of nonzero ones within `band` of 1."""
    jacobian = batch_jacobian(x, state)
    singular = np.linalg.svd(jacobian, compute_uv=False)

    top = float(singular[0]) if singular.size else 0.0
    nonzero = singular[singular > ZERO_TOLERANCE * max(top, 1.0)]
    return {
        'mode': state.mode,
        'k_G': state.group_size,
        'singular_values': singular.tolist(),
        'zero_count': int(singular.size - nonzero.size),
        'max': top,
        'min_nonzero': float(nonzero.min()) if nonzero.size else 0.0,
        'mean_nonzero': float(nonzero.mean()) if nonzero.size else 0.0,
        'near_one': float(np.mean(np.abs(nonzero - 1.0) <= band)) if nonzero.size else 0.0,
    }
