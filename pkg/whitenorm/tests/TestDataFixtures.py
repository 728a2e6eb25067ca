import os

import numpy as np

from ..adapters.datasets.DatasetAdapter import DatasetAdapter
from ..datasets import Dataset
from ..layers import LayerSpec, NetworkSpec
from ..logic.gradcheck import gapped_batch

"""
    Shared fixtures for the test suite.

    Batches are float64, d x m (features in rows, examples in columns). Everything is seeded
    so a failing case can be replayed.

    Experiment-scale checks are slow and only run with WHITENORM_SLOW=1.
"""

SLOW = os.environ.get('WHITENORM_SLOW', '') == '1'


class TestDataDatasetAdapter(DatasetAdapter):
    """Serves a Dataset held in memory."""

    def __init__(self, dataset: Dataset):
        self.dataset = dataset

    def get_dataset(self):
        return self.dataset

    def describe(self):
        return {'source': 'memory', 'd': self.dataset.dim, 'n': self.dataset.size}


def random_batch(d, m, seed=0, scale=1.0):
    return np.random.default_rng(seed).normal(0.0, scale, size=(d, m))


def well_conditioned_batch(d, m, group_size=None, seed=0):
    """A batch whose per-group covariance has eigenvalues 1, 1.5, 2, ... in a random basis."""
    return gapped_batch(d, m, group_size, seed=seed)


def correlated_batch(correlation, m, seed=0):
    """2 x m draws from a unit-variance Gaussian with the given correlation."""
    rng = np.random.default_rng(seed)
    chol = np.linalg.cholesky(np.array([[1.0, correlation], [correlation, 1.0]]))
    return chol @ rng.standard_normal((2, m))


def separable_dataset(n=200, seed=0):
    """Two 2-D clusters far apart: any sensible classifier separates them."""
    rng = np.random.default_rng(seed)
    labels = np.arange(n) % 2
    centers = np.where(labels == 0, -3.0, 3.0)
    features = np.vstack([centers + rng.normal(0.0, 0.5, n), rng.normal(0.0, 0.5, n)])
    return Dataset(features, labels, 2)


def small_spec(input_dim, num_classes, middle, hidden=5):
    """linear -> <middle layers> -> linear -> softmax_nll"""
    layers = [LayerSpec(kind='linear', out_features=hidden)]
    layers += list(middle)
    layers += [LayerSpec(kind='linear', out_features=num_classes), LayerSpec(kind='softmax_nll')]
    return NetworkSpec(input_dim=input_dim, num_classes=num_classes, layers=layers)
