"""

    Group whitening splits the d features of a batch into consecutive groups of k_G rows and
    whitens each group on its own. When k_G does not divide d the last group is smaller.

"""
import numpy as np

from ..errors import InvalidGroupError, ShapeError


def group_bounds(dim: int, group_size: int):
    """[(start, stop), ...] over consecutive features; the last group holds the remainder."""
    if group_size is None or int(group_size) < 1 or int(group_size) > dim:
        raise InvalidGroupError(
            'logic.group_bounds: group size must be in [1, {}], got {}'.format(dim, group_size))
    group_size = int(group_size)
    return [(start, min(start + group_size, dim)) for start in range(0, dim, group_size)]


def group_split(x: np.ndarray, group_size: int):
    if x.ndim != 2:
        raise ShapeError('logic.group_split: expected a d x m matrix, got shape {}'.format(x.shape))
    return [x[start:stop, :] for start, stop in group_bounds(x.shape[0], group_size)]


def group_merge(blocks):
    if len(blocks) == 0:
        raise InvalidGroupError('logic.group_merge: nothing to merge')
    widths = {b.shape[1] for b in blocks}
    if len(widths) != 1:
        raise ShapeError('logic.group_merge: blocks disagree on the number of examples {}'.format(sorted(widths)))
    return np.vstack(blocks)
