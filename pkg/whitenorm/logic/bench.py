"""

    Forward/backward timing of one normalization layer across group sizes.

"""
import logging
import time

import numpy as np

from ..errors import InsufficientBatchError
from ..seeds import stream
from ..states import DbnState
from .whiten_batch import dbn_forward
from .whitening_backward import dbn_backward

logger = logging.getLogger(__name__)

BENCH_COLUMNS = ['mode', 'd', 'm', 'k_G', 'fwd_us', 'bwd_us']


def time_layer(x: np.ndarray, state: DbnState, grad: np.ndarray, repeats: int = 5):
    """Median microseconds of (forward, backward) over `repeats` runs."""
    forward, backward = [], []
    for _ in range(repeats):
        started = time.perf_counter()
        _, cache = dbn_forward(x, state)
        middle = time.perf_counter()
        dbn_backward(grad, cache, state)
        ended = time.perf_counter()
        forward.append((middle - started) * 1e6)
        backward.append((ended - middle) * 1e6)
    return float(np.median(forward)), float(np.median(backward))


def bench(d: int = 256, m: int = 512, group_sizes=(1, 16, 64, None), modes=('zca',), repeats: int = 5,
          seed: int = 0, eigensolver: str = 'jacobi'):
    """One row per (mode, k_G); None stands for k_G = d."""
    if m is None or m < 2:
        raise InsufficientBatchError('logic.bench: need a batch of at least 2 examples, got {}'.format(m))
    rng = stream(seed, 'bench')
    x = rng.standard_normal((d, m))
    grad = rng.standard_normal((d, m))

    rows = []
    for mode in modes:
        for group_size in group_sizes:
            k = d if group_size is None else int(group_size)
            state = DbnState(d, group_size=k, mode=mode, eigensolver=eigensolver, clamp_degenerate=True)
            fwd, bwd = time_layer(x, state, grad, repeats)
            rows.append({'mode': mode, 'd': d, 'm': m, 'k_G': state.group_size, 'fwd_us': fwd, 'bwd_us': bwd})
            logger.info('bench: %s d=%d m=%d k_G=%d fwd %.1fus bwd %.1fus', mode, d, m, state.group_size, fwd, bwd)
    return rows
