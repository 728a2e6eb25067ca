"""

    Per-layer normalization state and per-batch forward caches.

    A DbnState is owned by one layer and only mutated by a training forward pass
    (running statistics). Read it and save it with a RunAdapter.

"""
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import ShapeError
from .linalg import EIGENSOLVERS
from .logic.group_features import group_bounds

MODES = ('zca', 'pca', 'bn')

DEFAULT_EPSILON = 1e-5
DEFAULT_MOMENTUM = 0.1


class DbnState:

    def __init__(self, dim: int, group_size: int = None, mode: str = 'zca', epsilon: float = None,
                 momentum: float = None, affine: bool = False, thresholds: bool = False,
                 clamp_degenerate: bool = False, eigensolver: str = 'jacobi', training: bool = True):

        if dim is None or int(dim) < 1:
            raise ShapeError('DbnState: dim must be >= 1, got {}'.format(dim))
        mode = (mode or 'zca').lower()
        if mode not in MODES:
            raise ValueError('DbnState: mode must be one of {}, got {!r}'.format(MODES, mode))

        self.dim = int(dim)
        self.mode = mode
        # BN is per-dimension standardization, i.e. groups of one
        self.group_size = 1 if mode == 'bn' else int(group_size if group_size is not None else dim)
        self.groups = group_bounds(self.dim, self.group_size)

        self.epsilon = DEFAULT_EPSILON if epsilon is None else float(epsilon)
        if self.epsilon < 0.0:
            raise ValueError('DbnState: epsilon must be >= 0, got {}'.format(self.epsilon))

        self.momentum = DEFAULT_MOMENTUM if momentum is None else float(momentum)
        if not 0.0 < self.momentum <= 1.0:
            raise ValueError('DbnState: momentum must be in (0, 1], got {}'.format(self.momentum))

        if eigensolver not in EIGENSOLVERS:
            raise ValueError('DbnState: eigensolver must be one of {}, got {!r}'.format(EIGENSOLVERS, eigensolver))
        self.eigensolver = eigensolver
        self.clamp_degenerate = bool(clamp_degenerate)
        self.training = bool(training)

        self.running_mean = np.zeros(self.dim)
        self.running_whitening = np.eye(self.dim)

        self.gamma = np.ones(self.dim) if affine else None
        self.beta = np.zeros(self.dim) if affine else None
        self.thresholds = np.zeros(self.dim) if thresholds else None

    @property
    def affine(self) -> bool:
        return self.gamma is not None

    @property
    def num_groups(self) -> int:
        return len(self.groups)

    def train(self):
        self.training = True
        return self

    def eval(self):
        self.training = False
        return self

    def parameters(self) -> dict:
        params = {}
        if self.gamma is not None:
            params['gamma'] = self.gamma
            params['beta'] = self.beta
        if self.thresholds is not None:
            params['thresholds'] = self.thresholds
        return params

    def whitening_block(self, index: int) -> np.ndarray:
        start, stop = self.groups[index]
        return self.running_whitening[start:stop, start:stop]


@dataclass
class GroupCache:
    """Saved tensors of one group: mean, eigenpairs and the PCA-whitened batch x~ (k x m)."""
    mean: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    whitened: np.ndarray
    # x - mu, kept for the unsimplified backward chain
    centered: Optional[np.ndarray] = None

    @property
    def projection(self) -> np.ndarray:
        """U = Lambda^{-1/2} D^T"""
        return (1.0 / np.sqrt(self.eigenvalues))[:, None] * self.eigenvectors.T


@dataclass
class ForwardCache:
    batch_size: int
    groups: List[GroupCache] = field(default_factory=list)
    # output of the whitening stage before the affine / threshold stage
    normalized: Optional[np.ndarray] = None
    # affine output, needed to route the threshold gradient
    pre_threshold: Optional[np.ndarray] = None
    # filled by the backward pass
    param_grads: dict = field(default_factory=dict)
