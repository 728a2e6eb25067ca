"""

    Desk-scale experiment drivers. Each returns plain data (rows and summaries) that the caller
    writes out through a RunAdapter.

      loss_comparison      plain vs DBN-ZCA vs DBN-PCA MLPs, full-batch GD, best learning rate
                           of a grid chosen by final training loss
      group_size_sweep     deep MLP with DBN at several group sizes
      conditioning_trace   Fisher condition number of the last layer during training for
                           plain, BN and DBN networks, plus covariance conditioning of BN and
                           DBN outputs on strongly correlated data

"""
import logging
from typing import List, Sequence

import numpy as np

from ..datasets import Dataset, gen_correlated_gaussians, subset
from ..errors import DivergedError
from ..layers import mlp_spec
from ..linalg import covariance, condition_number
from ..states import DbnState
from ..training import TrainConfig
from .batch_norm import bn_forward
from .fim_condition import fim_condition
from .network import init_params
from .train import sweep, best_of_grid, train
from .whiten_batch import dbn_forward

logger = logging.getLogger(__name__)

NORM_VARIANTS = {
    'plain': None,
    'bn': {'kind': 'bn'},
    'zca': {'kind': 'dbn', 'mode': 'zca'},
    'pca': {'kind': 'dbn', 'mode': 'pca'},
}
DEFAULT_LRS = (0.1, 0.5, 1.0, 5.0)


def _norm(variant: str, group_size: int = None, eigensolver: str = 'jacobi', clamp: bool = False):
    if variant not in NORM_VARIANTS:
        raise ValueError('logic.experiments: unknown variant {!r}, expected one of {}'.format(
            variant, sorted(NORM_VARIANTS)))
    norm = NORM_VARIANTS[variant]
    if norm is None:
        return None
    norm = dict(norm)
    if norm['kind'] == 'dbn':
        norm.update(group_size=group_size, eigensolver=eigensolver, clamp_degenerate=clamp)
    return norm


def loss_comparison(dataset: Dataset, hidden: Sequence[int] = (100,), variants=('plain', 'zca', 'pca'),
                    lrs=DEFAULT_LRS, epochs: int = 200, seed: int = 0, eigensolver: str = 'jacobi') -> dict:
    """
    {'rows': one row per (variant, lr, epoch), 'summary': best cell per variant}.
    Full-batch gradient descent without momentum.
    """
    config = TrainConfig(lr=lrs[0], epochs=epochs, full_batch=True, seed=seed)
    rows, summary = [], {}
    for variant in variants:
        spec = mlp_spec(dataset.dim, list(hidden), dataset.num_classes, norm=_norm(variant, eigensolver=eigensolver,
                                                                                  clamp=True))
        cells = sweep(lambda: init_params(spec, seed), dataset, config, {'lr': list(lrs)})
        for cell in cells:
            for entry in cell.metrics:
                rows.append({'variant': variant, 'lr': cell.settings['lr'], 'epoch': entry.epoch,
                             'train_loss': entry.train_loss, 'train_acc': entry.train_acc})
        best = best_of_grid(cells)
        summary[variant] = {
            'best_lr': best.settings['lr'] if best else None,
            'final_train_loss': best.final_train_loss if best else float('inf'),
            'final_train_acc': best.metrics[-1].train_acc if best else None,
            'diverged_lrs': [cell.settings['lr'] for cell in cells if cell.diverged],
        }
        logger.info('loss_comparison: %s best lr %s, final loss %s', variant, summary[variant]['best_lr'],
                    summary[variant]['final_train_loss'])
    return {'rows': rows, 'summary': summary, 'chance_accuracy': 1.0 / dataset.num_classes}


def group_size_sweep(dataset: Dataset, width: int = 32, depth: int = 5, group_sizes=(1, 8, 16, None),
                     lrs=(0.1, 0.5, 1.0), epochs: int = 20, batch_size: int = 256, seed: int = 0,
                     eigensolver: str = 'jacobi') -> dict:
    """
    `depth` hidden layers of `width` units with DBN-ZCA before every ReLU. A group size of None
    means the whole layer. Each group size gets its best learning rate from `lrs`.
    """
    config = TrainConfig(lr=lrs[0], epochs=epochs, batch_size=batch_size, seed=seed)
    rows, summary = [], {}
    for group_size in group_sizes:
        k = width if group_size is None else int(group_size)
        spec = mlp_spec(dataset.dim, [width] * depth, dataset.num_classes,
                        norm=_norm('zca', group_size=k, eigensolver=eigensolver, clamp=True))
        cells = sweep(lambda: init_params(spec, seed), dataset, config, {'lr': list(lrs)})
        best = best_of_grid(cells)
        if best is not None:
            for entry in best.metrics:
                rows.append({'k_G': k, 'lr': best.settings['lr'], 'epoch': entry.epoch,
                             'train_loss': entry.train_loss, 'train_acc': entry.train_acc})
        summary[str(k)] = {'best_lr': best.settings['lr'] if best else None,
                           'final_train_loss': best.final_train_loss if best else float('inf')}
    return {'rows': rows, 'summary': summary}


def covariance_conditioning(correlation: float = 0.99, n: int = 10000, seed: int = 0,
                            eps: float = 1e-5) -> dict:
    """kappa of the covariance of 2-D correlated data before and after BN and DBN-ZCA."""
    data = gen_correlated_gaussians(2, n, 1, correlation=correlation, separation=0.0, seed=seed)
    x = data.features
    bn_out, _ = bn_forward(x, DbnState(2, mode='bn', epsilon=eps))
    zca_out, _ = dbn_forward(x, DbnState(2, mode='zca', epsilon=eps))
    return {
        'correlation': correlation,
        'input': condition_number(covariance(x)),
        'bn': condition_number(covariance(bn_out)),
        'dbn_zca': condition_number(covariance(zca_out)),
        'closed_form_bn': (1.0 + abs(correlation)) / (1.0 - abs(correlation)),
    }


def ordering_fraction(traces: dict, order: List[str], window: int = 1) -> float:
    """
    Fraction of logged iterations where kappa is non-decreasing along `order` (e.g. dbn, bn, plain).
    With window > 1 each trace is replaced by the median of its last `window` logged values first.
    """
    iterations = sorted(set.intersection(*(set(traces[v]) for v in order)))
    if not iterations:
        return 0.0
    smoothed = {v: [float(np.median([traces[v][it] for it in iterations[max(0, k - window + 1):k + 1]]))
                    for k in range(len(iterations))] for v in order}
    hits = sum(1 for k in range(len(iterations))
               if all(smoothed[a][k] <= smoothed[b][k] for a, b in zip(order, order[1:])))
    return hits / len(iterations)


def conditioning_trace(dataset: Dataset, hidden: Sequence[int] = (32, 32), variants=('plain', 'bn', 'zca'),
                       lr: float = 0.1, epochs: int = 10, batch_size: int = 64, every: int = 5,
                       fisher_size: int = 1000, window: int = 3, seed: int = 0, eigensolver: str = 'jacobi') -> dict:
    """
    Trains one network per variant and logs the Fisher condition number of the last linear layer
    on a fixed subset of `fisher_size` examples every `every` iterations.
    The ordering summary compares `window`-point running medians.
    """
    fisher_set = subset(dataset, fisher_size, seed=seed)
    config = TrainConfig(lr=lr, epochs=epochs, batch_size=batch_size, seed=seed)
    rows, traces = [], {}

    for variant in variants:
        spec = mlp_spec(dataset.dim, list(hidden), dataset.num_classes,
                        norm=_norm(variant, eigensolver=eigensolver, clamp=True))
        net = init_params(spec, seed)
        last_linear = len(net.layers) - 2
        trace = traces[variant] = {}

        def log_kappa(net, iteration, epoch, variant=variant, trace=trace):
            if iteration % every == 0:
                kappa = fim_condition(net, fisher_set, last_linear)
                trace[iteration] = kappa
                rows.append({'variant': variant, 'iteration': iteration, 'epoch': epoch + 1, 'kappa': kappa})

        try:
            train(net, dataset, config, callback=log_kappa)
        except DivergedError as e:
            logger.warning('conditioning_trace: %s diverged: %s', variant, e)

    summary = {'final_kappa': {v: (traces[v][max(traces[v])] if traces[v] else None) for v in variants}}
    named = {'plain', 'bn', 'zca'}
    if named.issubset(traces):
        summary['ordering_fraction'] = ordering_fraction(traces, ['zca', 'bn', 'plain'], window=window)
    return {'rows': rows, 'summary': summary}
