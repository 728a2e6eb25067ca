"""

    How white is a normalized batch?

    With eps > 0 a whitened group is not exactly white: ZCA output has covariance I - eps Sigma^{-1},
    Sigma being the regularized covariance of the input group, and PCA output I - eps Lambda^{-1}.
    The report measures the deviation from that identity and from I, and the conditioning before and after.

"""
import numpy as np

from ..errors import ShapeError
from ..linalg import as_matrix, covariance, condition_number, sym_eig


def correlation_matrix(x: np.ndarray) -> np.ndarray:
    """Pearson correlation of the rows; constant rows correlate 0 with everything but themselves."""
    s = covariance(x)
    std = np.sqrt(np.diagonal(s))
    safe = np.where(std > 0.0, std, 1.0)
    out = s / safe[:, None] / safe[None, :]
    out[std == 0.0, :] = 0.0
    out[:, std == 0.0] = 0.0
    np.fill_diagonal(out, 1.0)
    return out


def expected_whitened_covariance(sigma: np.ndarray, eps: float, mode: str = 'zca') -> np.ndarray:
    """
    Covariance a training-mode batch comes out with, given the regularized input covariance sigma:
        zca  I - eps Sigma^{-1}
        pca  I - eps Lambda^{-1}, in the eigenbasis (eigenvalues in descending order)
        bn   the input correlation shrunk by the per-feature eps, diag(Sigma)^{-1/2} (Sigma - eps I) diag(Sigma)^{-1/2}
    """
    k = sigma.shape[0]
    if mode == 'bn':
        scale = 1.0 / np.sqrt(np.diagonal(sigma))
        return scale[:, None] * (sigma - eps * np.eye(k)) * scale[None, :]
    decomp = sym_eig(sigma, method='lapack')
    if mode == 'pca':
        return np.diag(1.0 - eps / decomp.eigenvalues)
    d = decomp.eigenvectors
    inverse = (d / decomp.eigenvalues) @ d.T
    return np.eye(k) - eps * inverse


def whiteness_report(x_hat, eps: float = 0.0, sigma=None, x=None, groups=None, mode: str = 'zca') -> dict:
    """
    x_hat: normalized batch. sigma: regularized input covariance (covariance(x) + eps I when
    only x is given). groups: [(start, stop)] feature groups; only within-group blocks are
    compared, since group whitening leaves cross-group correlations alone. mode picks the
    identity the batch is held to, see expected_whitened_covariance().
    """
    x_hat = as_matrix(x_hat, 'x_hat')
    d = x_hat.shape[0]
    groups = [(0, d)] if groups is None else list(groups)
    if x is not None:
        x = as_matrix(x, 'x')
        if x.shape != x_hat.shape:
            raise ShapeError('logic.whiteness_report: x has shape {}, x_hat {}'.format(x.shape, x_hat.shape))
    if sigma is None and x is not None:
        sigma = covariance(x, eps)
    if sigma is not None:
        sigma = as_matrix(sigma, 'sigma')
        if sigma.shape != (d, d):
            raise ShapeError('logic.whiteness_report: sigma has shape {}, expected {}'.format(sigma.shape, (d, d)))

    cov_out = covariance(x_hat)
    identity_deviation = 0.0
    formula_deviation = None
    for start, stop in groups:
        block = cov_out[start:stop, start:stop]
        identity_deviation = max(identity_deviation, float(np.max(np.abs(block - np.eye(stop - start)))))
        if sigma is not None:
            expected = expected_whitened_covariance(sigma[start:stop, start:stop], eps, mode)
            deviation = float(np.max(np.abs(block - expected)))
            formula_deviation = deviation if formula_deviation is None else max(formula_deviation, deviation)

    report = {
        'identity_deviation': identity_deviation,
        'formula_deviation': formula_deviation,
        'correlation': correlation_matrix(x_hat).tolist(),
        'max_abs_correlation': float(np.max(np.abs(correlation_matrix(x_hat) - np.eye(d)))) if d > 1 else 0.0,
        'condition_after': condition_number(cov_out, method='lapack'),
        'condition_before': condition_number(covariance(x), method='lapack') if x is not None else None,
    }
    return report
