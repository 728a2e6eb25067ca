"""

    Cyclic Jacobi eigensolver for real symmetric matrices.

    Each sweep visits every off-diagonal pair once using a round-robin (tournament) ordering:
    a round holds n/2 disjoint pairs, so their rotations commute and are applied together as
    whole-row and whole-column updates. A sweep is n-1 rounds.

    Returns unsorted eigenvalues and the accumulated rotation (columns are eigenvectors).
    Sorting and sign conventions are applied by linalg.sym_eig.

"""
import logging

import numpy as np

from ..errors import ConvergenceError

logger = logging.getLogger(__name__)

TOLERANCE = 1e-12
MAX_SWEEPS = 100
HUGE_TAU = 1e150


def round_robin_pairs(n: int):
    """
    The n-1 rounds of disjoint (p, q) pairs, p < q, covering every pair exactly once.
    Odd n gets a dummy player whose pairs are dropped.
    """
    players = list(range(n)) if n % 2 == 0 else list(range(n)) + [None]
    count = len(players)
    rounds = []
    for _ in range(count - 1):
        pairs = []
        for i in range(count // 2):
            a, b = players[i], players[count - 1 - i]
            if a is None or b is None:
                continue
            pairs.append((min(a, b), max(a, b)))
        rounds.append((np.array([p for p, _ in pairs], dtype=np.intp),
                       np.array([q for _, q in pairs], dtype=np.intp)))
        # keep the first player fixed, rotate the rest by one
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def off_diagonal_norm(a: np.ndarray) -> float:
    upper = np.triu(a, 1)
    return float(np.sqrt(2.0 * np.sum(upper * upper)))


def jacobi_eigh(s: np.ndarray, tol: float = TOLERANCE, max_sweeps: int = MAX_SWEEPS):

    a = np.array(s, dtype=np.float64, copy=True)
    n = a.shape[0]
    v = np.eye(n)

    scale = float(np.linalg.norm(a))
    if n == 1 or scale == 0.0:
        return np.diagonal(a).copy(), v

    threshold = tol * scale
    rounds = round_robin_pairs(n)

    residual = off_diagonal_norm(a)
    sweeps = 0
    while residual >= threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                'jacobi_eigensolver.jacobi_eigh: no convergence after {} sweeps, off-diagonal norm {:.3e}'.format(
                    sweeps, residual),
                residual=residual, sweeps=sweeps)

        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not np.any(active):
                continue

            safe_apq = np.where(active, apq, 1.0)
            tau = (a[q, q] - a[p, p]) / (2.0 * safe_apq)
            sign = np.where(tau >= 0.0, 1.0, -1.0)
            # t = 1 / 2tau once tau * tau would overflow
            huge = np.abs(tau) > HUGE_TAU
            tame = np.where(huge, 0.0, tau)
            t = np.where(huge, 0.5 / np.where(huge, tau, 1.0), sign / (np.abs(tame) + np.sqrt(1.0 + tame * tame)))
            c = 1.0 / np.sqrt(1.0 + t * t)
            sn = t * c
            c = np.where(active, c, 1.0)
            sn = np.where(active, sn, 0.0)

            # rows: A <- J^T A
            rows_p = a[p, :].copy()
            rows_q = a[q, :].copy()
            a[p, :] = c[:, None] * rows_p - sn[:, None] * rows_q
            a[q, :] = sn[:, None] * rows_p + c[:, None] * rows_q

            # columns: A <- A J
            cols_p = a[:, p].copy()
            cols_q = a[:, q].copy()
            a[:, p] = cols_p * c - cols_q * sn
            a[:, q] = cols_p * sn + cols_q * c
            a[p, q] = np.where(active, 0.0, a[p, q])
            a[q, p] = a[p, q]

            vec_p = v[:, p].copy()
            vec_q = v[:, q].copy()
            v[:, p] = vec_p * c - vec_q * sn
            v[:, q] = vec_p * sn + vec_q * c

        sweeps += 1
        residual = off_diagonal_norm(a)

    logger.debug('jacobi_eigh: n=%d converged in %d sweeps (off-diagonal %.3e)', n, sweeps, residual)
    return np.diagonal(a).copy(), v
