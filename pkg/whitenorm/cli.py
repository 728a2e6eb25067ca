"""

    whitenorm <gradcheck|whiten|demo-axis-swap|train|conditioning|bench> --config <path> [--out <dir>] [--seed N]

    Exit codes: 0 success, 1 failed check or run, 2 bad configuration.
    Reports go to stdout as JSON and, with every other output, into the --out directory.
    Logs go to stderr.

"""
import argparse
import logging
import os
import sys

from .adapters.datasets import SyntheticDatasetAdapter, IdxDatasetAdapter, CsvDatasetAdapter
from .adapters.runs import LocalFileSystemRunAdapter, dumps_report
from .configs import ExperimentConfig, load_config
from .errors import ConfigError, WhitenormError
from .layers import LayerSpec, NetworkSpec, mlp_spec
from .WhiteNorm import WhiteNorm

logger = logging.getLogger(__name__)

DEFAULT_OUT = 'whitenorm-out'
EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def dataset_adapter(config: ExperimentConfig):
    ds = config.dataset
    if ds.source == 'idx':
        return IdxDatasetAdapter(ds.images, ds.labels, limit=ds.limit, seed=config.seed)
    if ds.source == 'csv':
        return CsvDatasetAdapter(ds.path, label_column=ds.label_column)
    return SyntheticDatasetAdapter(ds.d, ds.n, ds.num_classes, ds.correlation, ds.separation, seed=config.seed)


def network_spec(config: ExperimentConfig, input_dim: int, num_classes: int) -> NetworkSpec:
    net = config.network
    if net.layers:
        spec = NetworkSpec(input_dim=input_dim, num_classes=num_classes,
                           layers=[LayerSpec(**layer) for layer in net.layers])
    else:
        spec = mlp_spec(input_dim, net.hidden, num_classes, norm=net.norm, activation=net.activation)
    spec.backend = net.backend
    return spec


def broker(config: ExperimentConfig) -> WhiteNorm:
    return WhiteNorm(dataset_adapter=dataset_adapter(config),
                     run_adapter=LocalFileSystemRunAdapter(config.out or DEFAULT_OUT),
                     seed=config.seed)


def emit(report: dict):
    sys.stdout.write(dumps_report(report))
    sys.stdout.write('\n')


def cmd_gradcheck(config: ExperimentConfig) -> int:
    gc = config.gradcheck
    report = broker(config).gradcheck(gc.grid(), tolerance=gc.tolerance, h=gc.h, backends=gc.backends,
                                      eigensolver=gc.eigensolver)
    emit(report)
    return EXIT_OK if report['passed'] else EXIT_FAILED


def cmd_whiten(config: ExperimentConfig) -> int:
    wn = broker(config)
    dataset, _ = wn.get_dataset(subtract_mean=config.dataset.subtract_mean)
    w = config.whiten
    _, report = wn.whiten(dataset, mode=w.mode, group_size=w.group_size, epsilon=w.epsilon, affine=w.affine,
                          eigensolver=w.eigensolver)
    if w.isometry_examples:
        isometry = wn.isometry(dataset.features[:, :w.isometry_examples], mode=w.mode, group_size=w.group_size,
                               epsilon=w.epsilon, eigensolver=w.eigensolver)
        report['isometry'] = {k: v for k, v in isometry.items() if k != 'singular_values'}
    emit(report)
    return EXIT_OK


def cmd_demo_axis_swap(config: ExperimentConfig) -> int:
    emit(broker(config).axis_swap(config.axis_swap.variant))
    return EXIT_OK


def cmd_train(config: ExperimentConfig) -> int:
    wn = broker(config)
    dataset, test = wn.get_dataset(test_size=config.dataset.test_size, subtract_mean=config.dataset.subtract_mean)

    if config.experiment == 'loss_comparison':
        lc = config.loss_comparison
        result = wn.loss_comparison(dataset, hidden=lc.hidden, variants=lc.variants, lrs=lc.lrs, epochs=lc.epochs,
                                    eigensolver=lc.eigensolver)
        emit({'summary': result['summary'], 'chance_accuracy': result['chance_accuracy']})
        return EXIT_OK

    if config.experiment == 'group_size_sweep':
        gs = config.group_size_sweep
        result = wn.group_size_sweep(dataset, width=gs.width, depth=gs.depth, group_sizes=gs.group_sizes, lrs=gs.lrs,
                                     epochs=gs.epochs, batch_size=gs.batch_size, eigensolver=gs.eigensolver)
        emit({'summary': result['summary']})
        return EXIT_OK

    spec = network_spec(config, dataset.dim, dataset.num_classes)
    train_config = config.train_config()
    if config.sweep:
        _, report = wn.sweep(spec, train_config, config.sweep, dataset, test)
        emit(report)
        return EXIT_OK if report['best'] is not None else EXIT_FAILED

    _, log = wn.train(spec, train_config, dataset, test, record_model=config.record_model)
    emit({'epochs': len(log), 'final': log[-1].to_dict() if log else None})
    return EXIT_OK


def cmd_conditioning(config: ExperimentConfig) -> int:
    wn = broker(config)
    dataset, _ = wn.get_dataset(subtract_mean=config.dataset.subtract_mean)
    c = config.conditioning
    report = wn.conditioning(dataset, correlation=c.correlation, n=c.n, hidden=c.hidden, variants=c.variants,
                             lr=c.lr, epochs=c.epochs, batch_size=c.batch_size, every=c.every,
                             fisher_size=c.fisher_size, window=c.window, eigensolver=c.eigensolver)
    emit(report)
    return EXIT_OK


def cmd_bench(config: ExperimentConfig) -> int:
    b = config.bench
    emit(broker(config).bench(d=b.d, m=b.m, group_sizes=b.group_sizes, modes=b.modes, repeats=b.repeats,
                              eigensolver=b.eigensolver))
    return EXIT_OK


COMMANDS = {
    'gradcheck': cmd_gradcheck,
    'whiten': cmd_whiten,
    'demo-axis-swap': cmd_demo_axis_swap,
    'train': cmd_train,
    'conditioning': cmd_conditioning,
    'bench': cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='whitenorm', description='Decorrelated batch normalization experiments.')
    parser.add_argument('command', choices=sorted(COMMANDS))
    parser.add_argument('--config', help='JSON run configuration; defaults apply without one')
    parser.add_argument('--out', help='output directory (default: config "out" or {})'.format(DEFAULT_OUT))
    parser.add_argument('--seed', type=int, help='overrides the config seed')
    parser.add_argument('--log-level', default=os.environ.get('WHITENORM_LOG_LEVEL', 'INFO'),
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=getattr(logging, args.log_level),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    try:
        config = load_config(args.config, seed=args.seed, out=args.out)
    except ConfigError as e:
        for problem in e.problems or [str(e)]:
            logger.error('config: %s', problem)
        return EXIT_CONFIG

    try:
        return COMMANDS[args.command](config)
    except ConfigError as e:
        for problem in e.problems or [str(e)]:
            logger.error('config: %s', problem)
        return EXIT_CONFIG
    except (WhitenormError, AssertionError) as e:
        logger.error('%s failed: %s', args.command, e)
        return EXIT_FAILED
