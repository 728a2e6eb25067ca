"""

    Dense matrix helpers and the spectral toolkit.

    A Matrix is a 2-D float64 numpy array. Activation batches are d x m: one row per feature,
    one column per example. All eigen decompositions in whitenorm go through sym_eig() so every
    consumer sees the same canonical ordering and sign convention:

      - eigenvalues non-increasing
      - first nonzero entry of every eigenvector positive
      - exactly equal eigenvalues ordered by descending lexicographic order of their vectors

"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import SymmetryError, NotPositiveDefiniteError, ShapeError, InvalidInputError
from .logic.jacobi_eigensolver import jacobi_eigh

SYMMETRY_TOLERANCE = 1e-12
EIGENSOLVERS = ('jacobi', 'lapack')


def as_matrix(data, name: str = 'matrix') -> np.ndarray:
    """Copy data into a finite float64 2-D array."""
    m = np.array(data, dtype=np.float64)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    if m.ndim != 2:
        raise ShapeError('linalg.as_matrix: {} must be 2-D, got shape {}'.format(name, m.shape))
    if not np.all(np.isfinite(m)):
        raise InvalidInputError('linalg.as_matrix: {} contains NaN or Inf'.format(name))
    return m


def column_mean(x: np.ndarray) -> np.ndarray:
    """Mean over examples, returned as a d x 1 column."""
    return x.mean(axis=1, keepdims=True)


def centered(x: np.ndarray) -> np.ndarray:
    return x - column_mean(x)


def covariance(x: np.ndarray, eps: float = 0.0) -> np.ndarray:
    """(1/m) Xc Xc^T + eps I, symmetrized so round-off never trips the symmetry check."""
    xc = centered(x)
    m = x.shape[1]
    s = xc @ xc.T / m
    s = 0.5 * (s + s.T)
    if eps:
        s = s + eps * np.eye(s.shape[0])
    return s


def outer(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.outer(np.ravel(u), np.ravel(v))


def sym(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.T)


def check_symmetric(s: np.ndarray, where: str = 'linalg.sym_eig'):
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ShapeError('{}: expected a square matrix, got shape {}'.format(where, s.shape))
    if s.shape[0] < 1:
        raise ShapeError('{}: matrix must be at least 1 x 1'.format(where))
    if not np.all(np.isfinite(s)):
        raise InvalidInputError('{}: matrix contains NaN or Inf'.format(where))
    asymmetry = float(np.max(np.abs(s - s.T)))
    if asymmetry > SYMMETRY_TOLERANCE * max(1.0, float(np.max(np.abs(s)))):
        raise SymmetryError('{}: matrix is not symmetric (max |S - S^T| = {:.3e})'.format(where, asymmetry))


@dataclass(frozen=True)
class EigDecomp:
    """
    eigenvalues: length-d vector (diagonal of Lambda)
    eigenvectors: d x d orthogonal matrix D, eigenvectors in columns
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        d = self.eigenvectors
        return (d * self.eigenvalues) @ d.T

    def reordered(self, order: Sequence[int], signs: Sequence[float] = None) -> 'EigDecomp':
        """
        Same eigenpairs under a different order and/or sign flips. The result is generally not
        canonical; it exists to show which downstream quantities depend on the convention.
        """
        order = np.asarray(order, dtype=np.intp)
        signs = np.ones(len(order)) if signs is None else np.asarray(signs, dtype=np.float64)
        return EigDecomp(eigenvalues=self.eigenvalues[order].copy(),
                         eigenvectors=self.eigenvectors[:, order] * signs)

    def is_canonical(self) -> bool:
        vals = self.eigenvalues
        if np.any(np.diff(vals) > 0):
            return False
        for j in range(self.dim):
            nz = np.flatnonzero(self.eigenvectors[:, j])
            if len(nz) and self.eigenvectors[nz[0], j] < 0:
                return False
        return True


def canonicalize(eigenvalues: np.ndarray, eigenvectors: np.ndarray) -> EigDecomp:
    vecs = np.array(eigenvectors, dtype=np.float64, copy=True)
    vals = np.array(eigenvalues, dtype=np.float64, copy=True)

    for j in range(vecs.shape[1]):
        nz = np.flatnonzero(vecs[:, j])
        if len(nz) and vecs[nz[0], j] < 0:
            vecs[:, j] = -vecs[:, j]

    order = sorted(range(len(vals)), key=lambda j: (-vals[j], tuple(-vecs[:, j])))
    return EigDecomp(eigenvalues=vals[order], eigenvectors=vecs[:, order])


def sym_eig(s, method: str = 'jacobi') -> EigDecomp:
    """
    Eigen decomposition of a symmetric matrix, canonicalized.

    method='jacobi' is the cyclic Jacobi solver (default, bit-for-bit deterministic);
    method='lapack' uses numpy's eigh and exists as an independent cross-check and for large experiments.
    """
    s = np.asarray(s, dtype=np.float64)
    check_symmetric(s)
    s = sym(s)

    if method == 'jacobi':
        vals, vecs = jacobi_eigh(s)
    elif method == 'lapack':
        vals, vecs = np.linalg.eigh(s)
    else:
        raise ValueError('linalg.sym_eig: unknown method {!r}, expected one of {}'.format(method, EIGENSOLVERS))

    return canonicalize(vals, vecs)


def _check_positive(decomp: EigDecomp, where: str):
    smallest = float(np.min(decomp.eigenvalues))
    if not smallest > 0.0:
        raise NotPositiveDefiniteError(
            '{}: matrix is not positive definite (eigenvalue {:.3e})'.format(where, smallest), eigenvalue=smallest)


def zca_from_decomp(decomp: EigDecomp) -> np.ndarray:
    """D Lambda^{-1/2} D^T. Independent of eigenpair order and eigenvector signs."""
    _check_positive(decomp, 'linalg.zca_from_decomp')
    d = decomp.eigenvectors
    return sym((d * (1.0 / np.sqrt(decomp.eigenvalues))) @ d.T)


def pca_from_decomp(decomp: EigDecomp) -> np.ndarray:
    """Lambda^{-1/2} D^T. Rows follow the eigenpair order, so reordering permutes rows."""
    _check_positive(decomp, 'linalg.pca_from_decomp')
    return (1.0 / np.sqrt(decomp.eigenvalues))[:, None] * decomp.eigenvectors.T


def inv_sqrt_zca(s, method: str = 'jacobi') -> np.ndarray:
    return zca_from_decomp(sym_eig(s, method=method))


def inv_sqrt_pca(s, method: str = 'jacobi') -> np.ndarray:
    return pca_from_decomp(sym_eig(s, method=method))


def condition_number(s, method: str = 'jacobi') -> float:
    """
    sigma_max / sigma_min. Returns inf when sigma_min is not resolvable from zero, i.e. at or below
    max(1e-300, d * machine-eps * sigma_max).
    """
    decomp = sym_eig(s, method=method)
    largest = float(decomp.eigenvalues[0])
    smallest = float(decomp.eigenvalues[-1])
    floor = max(1e-300, decomp.dim * np.finfo(np.float64).eps * abs(largest))
    if largest <= 0.0 or smallest <= floor:
        return float('inf')
    return largest / smallest


def block_diagonal(blocks) -> np.ndarray:
    size = sum(b.shape[0] for b in blocks)
    out = np.zeros((size, size))
    start = 0
    for b in blocks:
        k = b.shape[0]
        out[start:start + k, start:start + k] = b
        start += k
    return out
