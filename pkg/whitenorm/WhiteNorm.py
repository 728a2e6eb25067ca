"""

    WhiteNorm

    Instantiate this with:
        from whitenorm import WhiteNorm
        wn = WhiteNorm()

    There is minimal logic here; every method hands off to whitenorm.logic.

"""
import logging

import arrow

from .adapters.datasets import DatasetAdapter, SyntheticDatasetAdapter
from .adapters.runs import RunAdapter, LocalFileSystemRunAdapter

from .datasets import Dataset, split, subtract_pixel_mean
from .layers import NetworkSpec
from .states import DbnState
from .training import TrainConfig

from .logic.axis_swap import axis_swap_demo
from .logic.bench import bench, BENCH_COLUMNS
from .logic.experiments import loss_comparison, group_size_sweep, conditioning_trace, covariance_conditioning
from .logic.gradcheck import gradcheck_suite
from .logic.isometry_report import isometry_report
from .logic.network import init_params
from .logic.train import train, sweep, best_of_grid
from .logic.whiten_batch import dbn_forward
from .logic.whiteness_report import whiteness_report

logger = logging.getLogger(__name__)


class WhiteNorm():

    def __init__(self, dataset_adapter: DatasetAdapter = None, run_adapter: RunAdapter = None, seed: int = None):
        self.seed = 0 if seed is None else int(seed)
        self.dataset_adapter = dataset_adapter if dataset_adapter is not None else SyntheticDatasetAdapter(
            d=16, n=1000, seed=self.seed)
        self.run_adapter = run_adapter if run_adapter is not None else LocalFileSystemRunAdapter()

    def get_dataset(self, test_size: int = 0, subtract_mean: bool = False):
        """(train, test); test is None without a held-out split. The mean comes from the training part."""
        dataset = self.dataset_adapter.get_dataset()
        train_set, test_set = split(dataset, test_size, seed=self.seed) if test_size else (dataset, None)
        if subtract_mean:
            train_set, mean = subtract_pixel_mean(train_set)
            if test_set is not None:
                test_set, _ = subtract_pixel_mean(test_set, mean)
        return train_set, test_set

    def build_network(self, spec: NetworkSpec):
        return init_params(spec, self.seed)

    def gradcheck(self, grid=None, tolerance: float = 1e-5, h: float = 1e-5, backends=('simplified', 'reference'),
                  eigensolver: str = 'jacobi'):
        report = gradcheck_suite(grid, tolerance=tolerance, h=h, seed=self.seed, backends=tuple(backends),
                                 eigensolver=eigensolver)
        self.run_adapter.put_report('gradcheck', report)
        return report

    def whiten(self, dataset: Dataset, mode: str = 'zca', group_size: int = None, epsilon: float = None,
               affine: bool = False, eigensolver: str = 'jacobi'):
        """Whiten the whole dataset as one batch; writes activations and the whiteness report."""
        state = DbnState(dataset.dim, group_size=group_size, mode=mode, epsilon=epsilon, affine=affine,
                         eigensolver=eigensolver)
        x = dataset.features
        x_hat, _ = dbn_forward(x, state)

        report = whiteness_report(x_hat, state.epsilon, x=x, groups=state.groups, mode=state.mode)
        report.update({'mode': state.mode, 'k_G': state.group_size, 'epsilon': state.epsilon,
                       'd': dataset.dim, 'm': dataset.size})

        columns = (['label'] + ['in_{}'.format(i) for i in range(dataset.dim)]
                   + ['out_{}'.format(i) for i in range(dataset.dim)])
        rows = []
        for j in range(dataset.size):
            row = {'label': int(dataset.labels[j])}
            row.update(('in_{}'.format(i), float(x[i, j])) for i in range(dataset.dim))
            row.update(('out_{}'.format(i), float(x_hat[i, j])) for i in range(dataset.dim))
            rows.append(row)
        self.run_adapter.put_rows('activations', rows, columns)
        self.run_adapter.put_report('whiteness', report)
        return x_hat, report

    def isometry(self, x, mode: str = 'zca', group_size: int = None, epsilon: float = None,
                 eigensolver: str = 'jacobi'):
        """Singular values of the training-mode Jacobian on one small batch; writes the isometry report."""
        state = DbnState(x.shape[0], group_size=group_size, mode=mode, epsilon=epsilon, eigensolver=eigensolver)
        report = isometry_report(x, state)
        self.run_adapter.put_report('isometry', report)
        return report

    def axis_swap(self, variant: str = 'flip'):
        report = axis_swap_demo(self.seed, variant)
        self.run_adapter.put_report('axis_swap', report)
        return report

    def train(self, spec: NetworkSpec, config: TrainConfig, dataset: Dataset, test: Dataset = None,
              record_model: bool = True):
        net = self.build_network(spec)
        log = train(net, dataset, config, test=test)
        self.run_adapter.put_metrics('metrics', log)
        if record_model:
            self.run_adapter.put_model('model', net)
        report = {'epochs': len(log), 'train': config.to_dict(),
                  'final': log[-1].to_dict() if log else None}
        self.run_adapter.put_report('train', report)
        return net, log

    def sweep(self, spec: NetworkSpec, config: TrainConfig, grid: dict, dataset: Dataset, test: Dataset = None):
        cells = sweep(lambda: self.build_network(spec), dataset, config, grid, test=test)
        for cell in cells:
            self.run_adapter.put_metrics('metrics_' + cell.name, cell.metrics)
        best = best_of_grid(cells)
        report = {
            'cells': [{'settings': cell.settings, 'diverged': cell.diverged, 'error': cell.error,
                       'final_train_loss': cell.final_train_loss} for cell in cells],
            'best': best.settings if best else None,
            'best_final_train_loss': best.final_train_loss if best else None,
        }
        self.run_adapter.put_report('sweep', report)
        return cells, report

    def loss_comparison(self, dataset: Dataset, **kwargs):
        result = loss_comparison(dataset, seed=self.seed, **kwargs)
        self.run_adapter.put_rows('loss_comparison', result['rows'])
        report = {'summary': result['summary'], 'chance_accuracy': result['chance_accuracy']}
        self.run_adapter.put_report('loss_comparison', report)
        return result

    def group_size_sweep(self, dataset: Dataset, **kwargs):
        result = group_size_sweep(dataset, seed=self.seed, **kwargs)
        self.run_adapter.put_rows('group_size_sweep', result['rows'])
        self.run_adapter.put_report('group_size_sweep', {'summary': result['summary']})
        return result

    def conditioning(self, dataset: Dataset, correlation: float = 0.99, n: int = 10000, **kwargs):
        trace = conditioning_trace(dataset, seed=self.seed, **kwargs)
        covariance = covariance_conditioning(correlation, n, seed=self.seed)
        self.run_adapter.put_rows('fim_trace', trace['rows'], ['variant', 'iteration', 'epoch', 'kappa'])
        report = {'fim': trace['summary'], 'covariance': covariance}
        self.run_adapter.put_report('conditioning', report)
        return report

    def bench(self, **kwargs):
        rows = bench(seed=self.seed, **kwargs)
        self.run_adapter.put_rows('bench', rows, BENCH_COLUMNS)
        report = {'timestamp': arrow.utcnow().isoformat(), 'rows': rows}
        self.run_adapter.put_report('bench', report)
        return report
