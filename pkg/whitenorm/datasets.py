"""

    Classification datasets held in memory, features d x n (one column per example).

    Datasets are immutable after construction: every transform returns a new Dataset.

"""
import logging
from dataclasses import dataclass

import numpy as np

from .errors import InvalidDatasetError, InvalidCovarianceError, LabelError, EmptyEpochError
from .seeds import stream

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    num_classes: int

    def __post_init__(self):
        features = np.array(self.features, dtype=np.float64)
        labels = np.asarray(self.labels)

        if features.ndim != 2 or features.shape[1] < 1:
            raise InvalidDatasetError('Dataset: features must be d x n with n >= 1, got shape {}'.format(features.shape))
        if not np.all(np.isfinite(features)):
            raise InvalidDatasetError('Dataset: features contain NaN or Inf')
        if labels.ndim != 1 or labels.shape[0] != features.shape[1]:
            raise InvalidDatasetError('Dataset: {} labels for {} examples'.format(labels.shape, features.shape[1]))
        if self.num_classes is None or self.num_classes < 1:
            raise InvalidDatasetError('Dataset: num_classes must be >= 1, got {}'.format(self.num_classes))
        if not np.issubdtype(labels.dtype, np.integer):
            if not np.all(np.equal(np.mod(labels, 1), 0)):
                raise LabelError('Dataset: labels must be integers')
        labels = labels.astype(np.int64)
        if labels.min() < 0 or labels.max() >= self.num_classes:
            raise LabelError('Dataset: labels must lie in [0, {})'.format(self.num_classes))

        features.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, 'features', features)
        object.__setattr__(self, 'labels', labels)
        object.__setattr__(self, 'num_classes', int(self.num_classes))

    @property
    def dim(self) -> int:
        return self.features.shape[0]

    @property
    def size(self) -> int:
        return self.features.shape[1]

    def take(self, indices) -> 'Dataset':
        indices = np.asarray(indices, dtype=np.intp)
        return Dataset(self.features[:, indices], self.labels[indices], self.num_classes)


def simplex_means(d: int, num_classes: int, separation: float) -> np.ndarray:
    """
    d x C matrix of class means: vertices of a regular simplex centered at the origin with
    pairwise distance `separation`. Needs d >= C - 1; smaller d keeps the leading coordinates.
    """
    if num_classes == 1:
        return np.zeros((d, 1))
    vertices = np.eye(num_classes) - 1.0 / num_classes
    # orthonormal coordinates of the (C-1)-dim affine hull, distances preserved
    _, _, vt = np.linalg.svd(vertices)
    coords = vertices @ vt[:num_classes - 1].T
    coords *= separation / np.sqrt(2.0)

    if d < num_classes - 1:
        logger.warning('simplex_means: %d classes need %d dimensions, got %d; means are truncated',
                       num_classes, num_classes - 1, d)
        return np.ascontiguousarray(coords[:, :d].T)
    out = np.zeros((d, num_classes))
    out[:num_classes - 1, :] = coords.T
    return out


def gen_correlated_gaussians(d: int, n: int, num_classes: int, correlation: float = 0.0,
                             separation: float = 1.0, seed: int = 0) -> Dataset:
    """
    Class c ~ Normal(mu_c, S) with S = 1 on the diagonal and `correlation` off it.
    Labels cycle through the classes and are then shuffled, so classes stay balanced.
    """
    if d < 1 or n < 1 or num_classes < 1:
        raise InvalidDatasetError('datasets.gen_correlated_gaussians: need d, n, C >= 1, got {}, {}, {}'.format(
            d, n, num_classes))
    if not abs(correlation) < 1.0:
        raise InvalidCovarianceError(
            'datasets.gen_correlated_gaussians: |correlation| must be < 1, got {}'.format(correlation))

    cov = np.full((d, d), float(correlation))
    np.fill_diagonal(cov, 1.0)
    try:
        chol = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise InvalidCovarianceError(
            'datasets.gen_correlated_gaussians: correlation {} is not positive definite in {} dimensions'.format(
                correlation, d))

    rng = stream(seed, 'data.gaussians')
    labels = rng.permutation(np.arange(n) % num_classes)
    noise = chol @ rng.standard_normal((d, n))
    means = simplex_means(d, num_classes, separation)
    return Dataset(means[:, labels] + noise, labels, num_classes)


def batches(dataset: Dataset, batch_size: int, seed: int = 0, shuffle: bool = True,
            drop_partial: bool = False, epoch: int = 0):
    """
    Yields (X, labels) covering every example once. The order depends only on (seed, epoch).
    The last batch is short unless drop_partial is set.
    """
    if batch_size is None or batch_size < 1:
        raise ValueError('datasets.batches: batch_size must be >= 1, got {}'.format(batch_size))
    n = dataset.size
    if drop_partial and batch_size > n:
        raise EmptyEpochError('datasets.batches: batch_size {} exceeds {} examples with drop_partial'.format(
            batch_size, n))

    if shuffle:
        order = stream(seed, 'data.batches.{}'.format(epoch)).permutation(n)
    else:
        order = np.arange(n)

    for start in range(0, n, batch_size):
        index = order[start:start + batch_size]
        if drop_partial and index.shape[0] < batch_size:
            break
        yield dataset.features[:, index], dataset.labels[index]


def split(dataset: Dataset, n_test: int, seed: int = 0):
    """(train, test), test holding n_test examples drawn at random."""
    if not 0 <= n_test < dataset.size:
        raise InvalidDatasetError('datasets.split: n_test must be in [0, {}), got {}'.format(dataset.size, n_test))
    order = stream(seed, 'data.split').permutation(dataset.size)
    train = dataset.take(np.sort(order[n_test:]))
    test = dataset.take(np.sort(order[:n_test])) if n_test else None
    return train, test


def subset(dataset: Dataset, n: int, seed: int = 0) -> Dataset:
    if n is None or n >= dataset.size:
        return dataset
    if n < 1:
        raise InvalidDatasetError('datasets.subset: n must be >= 1, got {}'.format(n))
    order = stream(seed, 'data.subset').permutation(dataset.size)
    return dataset.take(np.sort(order[:n]))


def subtract_pixel_mean(dataset: Dataset, mean=None):
    """Remove the per-feature mean. Pass the training mean to transform a test split. Returns (dataset, mean)."""
    if mean is None:
        mean = dataset.features.mean(axis=1)
    mean = np.asarray(mean, dtype=np.float64)
    if mean.shape != (dataset.dim,):
        raise InvalidDatasetError('datasets.subtract_pixel_mean: mean has shape {}, expected ({},)'.format(
            mean.shape, dataset.dim))
    return Dataset(dataset.features - mean[:, None], dataset.labels, dataset.num_classes), mean
