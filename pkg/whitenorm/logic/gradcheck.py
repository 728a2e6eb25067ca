"""

    Central finite differences against analytic gradients.

    The error of a check is the largest per-coordinate relative error
        |a - n| / max(|a|, |n|, 1e-8)
    with n = (f(x + h e_i) - f(x - h e_i)) / 2h.

    gradcheck_suite() runs the check over a grid of (d, m, group size, mode) for every backward
    backend and also reports how far the backends disagree with each other.

"""
import copy
import logging
from typing import Callable, Iterable

import numpy as np

from ..errors import InvalidInputError, InsufficientBatchError
from ..seeds import stream
from ..states import DbnState
from .group_features import group_bounds
from .network import net_forward, net_backward
from .whiten_batch import dbn_forward
from .whitening_backward import dbn_backward
from .whitening_backward_reference import dbn_backward_reference

logger = logging.getLogger(__name__)

DENOMINATOR_FLOOR = 1e-8
DEFAULT_STEP = 1e-5
DEFAULT_TOLERANCE = 1e-5
BACKENDS = {'simplified': dbn_backward, 'reference': dbn_backward_reference}


def relative_error(analytic, numeric) -> float:
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    if analytic.size == 0:
        return 0.0
    scale = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), DENOMINATOR_FLOOR)
    return float(np.max(np.abs(analytic - numeric) / scale))


def numeric_gradient(f: Callable, x: np.ndarray, h: float = DEFAULT_STEP) -> np.ndarray:
    """Central differences of the scalar f, perturbing x in place and restoring it."""
    if not h > 0.0:
        raise ValueError('logic.numeric_gradient: h must be > 0, got {}'.format(h))
    grad = np.zeros_like(x, dtype=np.float64)
    flat = x.reshape(-1)
    out = grad.reshape(-1)
    for i in range(flat.shape[0]):
        old = flat[i]
        flat[i] = old + h
        right = f(x)
        flat[i] = old - h
        left = f(x)
        flat[i] = old
        if not (np.isfinite(right) and np.isfinite(left)):
            raise InvalidInputError('logic.numeric_gradient: non-finite function value at coordinate {}'.format(i))
        out[i] = (right - left) / (2.0 * h)
    return grad


def gradcheck(f: Callable, x, h: float = DEFAULT_STEP) -> float:
    """
    f(x) returns (value, analytic gradient). Returns the max relative error between the analytic
    and the central-difference gradient. x is not modified.
    """
    x = np.array(x, dtype=np.float64)
    value, analytic = f(x)
    if not np.isfinite(value):
        raise InvalidInputError('logic.gradcheck: non-finite value at the base point')
    numeric = numeric_gradient(lambda z: f(z)[0], x, h)
    return relative_error(analytic, numeric)


def gapped_batch(d: int, m: int, group_size: int = None, seed: int = 0, gap: float = 0.5) -> np.ndarray:
    """
    A d x m batch whose sample covariance is block diagonal per group with eigenvalues
    1, 1 + gap, 1 + 2 gap, ... in a random basis, so eigenvector derivatives stay well defined.
    """
    group_size = d if group_size is None else group_size
    bounds = group_bounds(d, group_size)
    if m <= max(stop - start for start, stop in bounds):
        raise InsufficientBatchError('logic.gapped_batch: need more examples than the largest group, got m={}'.format(m))

    rng = stream(seed, 'diagnostics.gapped_batch.{}.{}.{}'.format(d, m, group_size))
    x = np.empty((d, m))
    for start, stop in bounds:
        k = stop - start
        z = rng.standard_normal((k, m))
        z -= z.mean(axis=1, keepdims=True)
        # exact sample whitening, then the prescribed spectrum in a random basis
        vals, vecs = np.linalg.eigh(z @ z.T / m)
        z = (vecs / np.sqrt(vals)) @ vecs.T @ z
        q, _ = np.linalg.qr(rng.standard_normal((k, k)))
        spectrum = 1.0 + gap * np.arange(k)[::-1]
        x[start:stop, :] = (q * np.sqrt(spectrum)) @ z + rng.normal(0.0, 1.0, size=(k, 1))
    return x


def dbn_objective(state: DbnState, weights: np.ndarray, backend: str = 'simplified') -> Callable:
    """
    f(x) = sum(weights * dbn(x)) and its gradient through the chosen backward backend.
    Works on a private copy of the state so the caller's running statistics are untouched.
    """
    state = copy.deepcopy(state)
    backward = BACKENDS[backend]

    def f(x):
        out, cache = dbn_forward(x, state)
        return float(np.sum(weights * out)), backward(weights.copy(), cache, state)
    return f


def check_dbn(d: int, m: int, group_size: int, mode: str, seed: int = 0, h: float = DEFAULT_STEP,
              backends: Iterable[str] = ('simplified', 'reference'), affine: bool = False,
              eigensolver: str = 'jacobi') -> dict:
    """One grid case. The finite-difference gradient is shared by every backend."""
    backends = tuple(backends)
    x = gapped_batch(d, m, group_size, seed)
    state = DbnState(d, group_size=group_size, mode=mode, affine=affine, eigensolver=eigensolver)
    rng = stream(seed, 'diagnostics.gradcheck_target.{}.{}.{}'.format(d, m, group_size))
    if affine:
        state.gamma[:] = rng.uniform(0.5, 1.5, size=d)
        state.beta[:] = rng.normal(size=d)
    weights = rng.standard_normal((d, m))

    objectives = {backend: dbn_objective(state, weights, backend) for backend in backends}
    first = objectives[backends[0]]
    if not np.isfinite(first(x.copy())[0]):
        raise InvalidInputError('logic.check_dbn: non-finite value at the base point')
    numeric = numeric_gradient(lambda z: first(z)[0], x.copy(), h)

    case = {'d': d, 'm': m, 'k_G': state.group_size, 'mode': mode, 'errors': {}}
    analytic = {}
    for backend, f in objectives.items():
        analytic[backend] = f(x.copy())[1]
        case['errors'][backend] = relative_error(analytic[backend], numeric)
    if len(analytic) == 2:
        a, b = analytic.values()
        case['backend_difference'] = float(np.max(np.abs(a - b)))
    return case


def default_grid():
    grid = []
    for d in (2, 4, 8):
        for m in (16, 64):
            for mode in ('zca', 'pca', 'bn'):
                sizes = [1] if mode == 'bn' else sorted({1, d // 2, d})
                grid.extend((d, m, k, mode) for k in sizes)
    return grid


def gradcheck_suite(grid=None, tolerance: float = DEFAULT_TOLERANCE, h: float = DEFAULT_STEP, seed: int = 0,
                    backends=('simplified', 'reference'), eigensolver: str = 'jacobi') -> dict:
    """Report with one entry per case; `passed` iff every error is below tolerance."""
    grid = default_grid() if grid is None else [tuple(cell) for cell in grid]
    cases = []
    for d, m, k, mode in grid:
        case = check_dbn(d, m, k, mode, seed=seed, h=h, backends=backends, eigensolver=eigensolver)
        case['passed'] = all(err < tolerance for err in case['errors'].values())
        if not case['passed']:
            logger.warning('gradcheck: d=%d m=%d k_G=%d %s failed with %s', d, m, k, mode, case['errors'])
        cases.append(case)

    worst = max((err for case in cases for err in case['errors'].values()), default=0.0)
    return {'tolerance': tolerance, 'h': h, 'seed': seed, 'max_error': worst,
            'passed': all(case['passed'] for case in cases), 'cases': cases}


def network_gradcheck(net, x, labels, h: float = DEFAULT_STEP) -> dict:
    """
    Finite differences of the training-mode loss against net_backward for every parameter
    and the input. Returns {key: max relative error} with the input under 'input'.
    """
    x = np.array(x, dtype=np.float64)

    def loss_at(_):
        return net_forward(net, x, labels, training=True)[0]

    _, caches = net_forward(net, x, labels, training=True)
    grads = net_backward(net, caches)

    errors = {}
    for key, value in net.named_parameters():
        errors[key] = relative_error(grads.params[key], numeric_gradient(loss_at, value, h))
    errors['input'] = relative_error(grads.inputs, numeric_gradient(loss_at, x, h))
    net.caches = None
    return errors
