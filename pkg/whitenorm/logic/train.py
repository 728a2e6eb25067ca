"""

    The training loop and learning-rate sweeps.

    train() runs SGD over a NetworkState and returns one MetricsEntry per epoch. Evaluation of
    the held-out split uses inference-mode normalization (running statistics).

    sweep() trains one fresh network per cell of a cartesian grid over TrainConfig fields.
    Cells share nothing mutable and run on a thread pool capped by WHITENORM_THREADS.

"""
import itertools
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional

import numpy as np

from ..datasets import Dataset, batches
from ..errors import DivergedError, ConfigError, InvalidInputError, NotPositiveDefiniteError
from ..metrics import MetricsEntry, record_metrics_entry
from ..training import TrainConfig, schedule_factory
from .network import net_forward, net_backward, evaluate, accuracy
from .sgd import sgd_step

logger = logging.getLogger(__name__)

DIVERGENCE_LOSS = 1e3


def thread_count() -> int:
    value = os.environ.get('WHITENORM_THREADS', '1')
    try:
        return max(1, int(value))
    except ValueError:
        raise ConfigError('logic.thread_count: WHITENORM_THREADS must be an integer, got {!r}'.format(value))


def _check_divergence(loss: float, iteration: int):
    if math.isnan(loss) or loss > DIVERGENCE_LOSS:
        logger.warning('train: diverged at iteration %d with loss %s', iteration, loss)
        raise DivergedError('logic.train: loss {} at iteration {}'.format(loss, iteration),
                            loss=loss, iteration=iteration)


def train(net, dataset: Dataset, config: TrainConfig, test: Dataset = None,
          callback: Callable = None) -> List[MetricsEntry]:
    """
    callback(net, iteration, epoch) runs after every optimizer step, e.g. to log conditioning.
    Raises DivergedError as soon as a batch loss is NaN or above 1e3.
    """
    log = []
    schedule = schedule_factory(config)
    velocity = {}
    batch_size = dataset.size if config.full_batch else config.batch_size
    iteration = 0
    lr = schedule.rate(0, 0)

    for epoch in range(config.epochs):
        started = time.perf_counter() if config.record_time else None
        total_loss = 0.0
        total_correct = 0.0

        for x, labels in batches(dataset, batch_size, seed=config.seed,
                                 shuffle=config.shuffle and not config.full_batch, epoch=epoch):
            try:
                loss, caches = net_forward(net, x, labels, training=True)
            except (InvalidInputError, NotPositiveDefiniteError) as e:
                # activations overflowed somewhere upstream
                logger.warning('train: %s', e)
                raise DivergedError('logic.train: {} at iteration {}'.format(e, iteration),
                                    loss=float('nan'), iteration=iteration) from e
            _check_divergence(loss, iteration)
            probabilities = caches[-1][0]

            grads = net_backward(net, caches)
            lr = schedule.rate(iteration, epoch)
            sgd_step(dict(net.named_parameters()), grads.params, velocity, config, lr=lr)
            iteration += 1

            m = labels.shape[0]
            total_loss += loss * m
            total_correct += accuracy(probabilities, labels) * m
            if callback is not None:
                callback(net, iteration, epoch)

        entry = MetricsEntry(epoch=epoch + 1, iteration=iteration, lr=lr,
                             train_loss=total_loss / dataset.size, train_acc=total_correct / dataset.size)
        if test is not None:
            entry.test_loss, entry.test_acc = evaluate(net, test.features, test.labels)
        if started is not None:
            entry.seconds = time.perf_counter() - started
        record_metrics_entry(log, entry)

        logger.info('epoch %d: lr %.4g, train loss %.6f, train acc %.4f', entry.epoch, lr,
                    entry.train_loss, entry.train_acc)
    return log


@dataclass
class SweepCell:
    settings: dict
    metrics: List[MetricsEntry] = field(default_factory=list)
    diverged: bool = False
    error: Optional[str] = None

    @property
    def final_train_loss(self) -> float:
        if self.diverged or not self.metrics:
            return float('inf')
        return self.metrics[-1].train_loss

    @property
    def name(self) -> str:
        return '_'.join('{}={}'.format(k, v) for k, v in sorted(self.settings.items()))


def grid_cells(grid: dict) -> List[dict]:
    """Cartesian product of {field: [values]} in key order."""
    keys = sorted(grid)
    return [dict(zip(keys, values)) for values in itertools.product(*(grid[k] for k in keys))]


def sweep(build: Callable, dataset: Dataset, config: TrainConfig, grid: dict, test: Dataset = None,
          workers: int = None) -> List[SweepCell]:
    """
    build() returns a fresh NetworkState for every cell. grid maps TrainConfig field names to the
    values to try. Diverged cells are kept and flagged.
    """
    unknown = set(grid) - set(TrainConfig.__dataclass_fields__)
    if unknown:
        raise ConfigError('logic.sweep: unknown TrainConfig fields {}'.format(sorted(unknown)),
                          problems=['unknown field {}'.format(k) for k in sorted(unknown)])

    cells = [SweepCell(settings=settings) for settings in grid_cells(grid)]

    def run(cell: SweepCell) -> SweepCell:
        try:
            cell.metrics = train(build(), dataset, replace(config, **cell.settings), test=test)
        except DivergedError as e:
            cell.diverged = True
            cell.error = str(e)
        return cell

    workers = workers or thread_count()
    logger.info('sweep: %d cells on %d worker(s)', len(cells), workers)
    if workers == 1:
        return [run(cell) for cell in cells]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run, cells))


def best_of_grid(cells: List[SweepCell]) -> Optional[SweepCell]:
    """The cell with the lowest final training loss; None if every cell diverged."""
    finished = [cell for cell in cells if not cell.diverged and cell.metrics]
    if not finished:
        return None
    return min(finished, key=lambda cell: cell.final_train_loss)


def loss_curve(cell: SweepCell) -> np.ndarray:
    return np.array([entry.train_loss for entry in cell.metrics])
