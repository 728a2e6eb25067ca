"""

    Stochastic axis swapping, demonstrated on two 2-D mini-batches.

    Both batches share the four core points (+-1, +-1). Batch A adds (+-sqrt2, 0), batch B adds
    (0, +-sqrt2), so their covariances are diag(4/3, 2/3) and diag(2/3, 4/3) and the order of the
    eigenvalues flips between them. The whole construction is rotated and scaled by a seeded
    random similarity, which whitening undoes.

    PCA whitening orders its output axes by eigenvalue, so the shared points come out with their
    coordinates permuted; ZCA whitening stays close to the original coordinates.

"""
import logging

import numpy as np

from ..errors import AxisSwapConstructionError
from ..linalg import covariance, sym_eig, zca_from_decomp, pca_from_decomp
from ..seeds import stream

logger = logging.getLogger(__name__)

VARIANTS = ('flip', 'control', 'identical')

CORE = np.array([[1.0, 1.0, -1.0, -1.0],
                 [1.0, -1.0, 1.0, -1.0]])


def _extras(axis: int, length: float) -> np.ndarray:
    e = np.zeros((2, 2))
    e[axis, 0] = length
    e[axis, 1] = -length
    return e


def row_matching(reference: np.ndarray, other: np.ndarray):
    """
    For every row of `other` the index of the row of `reference` with the largest absolute cosine
    similarity; ties go to the lower index.
    """
    a = reference / np.linalg.norm(reference, axis=1, keepdims=True)
    b = other / np.linalg.norm(other, axis=1, keepdims=True)
    return [int(i) for i in np.argmax(np.abs(b @ a.T), axis=1)]


def compare_batches(batch_a: np.ndarray, batch_b: np.ndarray, shared_a, shared_b, eps: float = 0.0) -> dict:
    """
    Whiten both batches with their own statistics and compare the representations of the points
    they share (columns shared_a of A are the same points as columns shared_b of B).
    """
    report = {}
    decomps = [sym_eig(covariance(batch, eps)) for batch in (batch_a, batch_b)]
    means = [batch.mean(axis=1, keepdims=True) for batch in (batch_a, batch_b)]
    points = [batch_a[:, shared_a], batch_b[:, shared_b]]

    for mode, builder in (('pca', pca_from_decomp), ('zca', zca_from_decomp)):
        wa, wb = (builder(decomp) for decomp in decomps)
        ya = wa @ (points[0] - means[0])
        yb = wb @ (points[1] - means[1])
        report[mode + '_permutation'] = row_matching(wa, wb)
        report[mode + '_displacement'] = float(np.max(np.linalg.norm(ya - yb, axis=0)))

    report['eigenvalues_a'] = decomps[0].eigenvalues.tolist()
    report['eigenvalues_b'] = decomps[1].eigenvalues.tolist()
    return report


def axis_swap_batches(seed: int = 0, variant: str = 'flip'):
    """(batch_a, batch_b, angle, scale); the first four columns of each batch are the shared points."""
    if variant not in VARIANTS:
        raise ValueError('logic.axis_swap_batches: variant must be one of {}, got {!r}'.format(VARIANTS, variant))

    rng = stream(seed, 'diagnostics.axis_swap')
    angle = float(rng.uniform(0.0, 2.0 * np.pi))
    scale = float(rng.uniform(0.5, 2.0))
    rotation = np.array([[np.cos(angle), -np.sin(angle)],
                         [np.sin(angle), np.cos(angle)]])

    root2 = np.sqrt(2.0)
    extras_a = _extras(0, root2)
    extras_b = {'flip': _extras(1, root2), 'control': _extras(0, 1.2 * root2), 'identical': extras_a}[variant]

    batch_a = scale * rotation @ np.hstack([CORE, extras_a])
    batch_b = scale * rotation @ np.hstack([CORE, extras_b])
    return batch_a, batch_b, angle, scale


def axis_swap_demo(seed: int = 0, variant: str = 'flip') -> dict:
    batch_a, batch_b, angle, scale = axis_swap_batches(seed, variant)
    shared = list(range(CORE.shape[1]))
    report = compare_batches(batch_a, batch_b, shared, shared)

    # in the eigenbasis of A, which direction carries the larger variance in each batch
    basis = sym_eig(covariance(batch_a)).eigenvectors
    leading = [int(np.argmax(np.diagonal(basis.T @ covariance(batch) @ basis))) for batch in (batch_a, batch_b)]
    flipped = leading[0] != leading[1]
    if flipped != (variant == 'flip'):
        raise AxisSwapConstructionError(
            'logic.axis_swap_demo: eigenvalue order {} for the {!r} construction'.format(
                'flipped' if flipped else 'did not flip', variant))

    report.update({'seed': seed, 'variant': variant, 'angle': angle, 'scale': scale, 'order_flipped': flipped})
    logger.info('axis swap (%s): pca %s moved %.3f, zca %s moved %.3f', variant, report['pca_permutation'],
                report['pca_displacement'], report['zca_permutation'], report['zca_displacement'])
    return report
