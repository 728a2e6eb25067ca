"""

    Run configuration: one strict JSON document per run.

    The document maps onto the dataclasses below. Unknown keys, wrong types and out-of-range
    values are all collected and raised together as one ConfigError, before anything runs.

        {
          "seed": 0,
          "dataset": {"source": "synthetic", "d": 16, "n": 1000, "num_classes": 2, "correlation": 0.9},
          "network": {"hidden": [100], "norm": {"kind": "dbn", "mode": "zca", "group_size": 16}},
          "train": {"lr": 0.1, "epochs": 10, "batch_size": 64}
        }

"""
import dataclasses
import typing
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import ujson

from .errors import ConfigError
from .layers import LayerSpec, LAYER_KINDS
from .linalg import EIGENSOLVERS
from .states import MODES
from .training import TrainConfig

DATASET_SOURCES = ('synthetic', 'idx', 'csv')
EXPERIMENTS = ('single', 'loss_comparison', 'group_size_sweep')
AXIS_SWAP_VARIANTS = ('flip', 'control', 'identical')
NORM_VARIANTS = ('plain', 'bn', 'zca', 'pca')


@dataclass
class DatasetConfig:
    source: str = 'synthetic'
    d: int = 16
    n: int = 1000
    num_classes: int = 2
    correlation: float = 0.0
    separation: float = 3.0
    images: Optional[str] = None
    labels: Optional[str] = None
    path: Optional[str] = None
    label_column: str = 'label'
    limit: Optional[int] = None
    test_size: int = 0
    subtract_mean: bool = False

    def problems(self, where='dataset'):
        out = []
        if self.source not in DATASET_SOURCES:
            out.append('{}.source must be one of {}'.format(where, DATASET_SOURCES))
        if self.source == 'synthetic':
            if self.d < 1 or self.n < 1 or self.num_classes < 1:
                out.append('{}: d, n and num_classes must be >= 1'.format(where))
            if not abs(self.correlation) < 1.0:
                out.append('{}.correlation must satisfy |correlation| < 1'.format(where))
        if self.source == 'idx' and (not self.images or not self.labels):
            out.append('{}: idx datasets need "images" and "labels" paths'.format(where))
        if self.source == 'csv' and not self.path:
            out.append('{}: csv datasets need a "path"'.format(where))
        if self.test_size < 0:
            out.append('{}.test_size must be >= 0'.format(where))
        if self.limit is not None and self.limit < 1:
            out.append('{}.limit must be >= 1'.format(where))
        return out


@dataclass
class NetworkConfig:
    hidden: List[int] = field(default_factory=lambda: [100])
    norm: Optional[Dict[str, typing.Any]] = None
    activation: str = 'relu'
    backend: str = 'simplified'
    layers: Optional[List[Dict[str, typing.Any]]] = None

    def problems(self, where='network'):
        out = []
        if any(h < 1 for h in self.hidden):
            out.append('{}.hidden widths must be >= 1'.format(where))
        if self.activation not in ('relu', 'trelu'):
            out.append('{}.activation must be relu or trelu'.format(where))
        if self.backend not in ('simplified', 'reference'):
            out.append('{}.backend must be simplified or reference'.format(where))
        specs = ([self.norm] if self.norm is not None else []) + list(self.layers or [])
        for index, spec in enumerate(specs):
            out.extend(_layer_problems(spec, '{}.layer[{}]'.format(where, index)))
        return out


def _layer_problems(spec: dict, where: str):
    names = {f.name for f in dataclasses.fields(LayerSpec)}
    out = ['{}: unknown key "{}"'.format(where, k) for k in sorted(set(spec) - names)]
    if spec.get('kind') not in LAYER_KINDS:
        out.append('{}.kind must be one of {}'.format(where, LAYER_KINDS))
    if spec.get('mode', 'zca') not in MODES:
        out.append('{}.mode must be one of {}'.format(where, MODES))
    if spec.get('eigensolver', 'jacobi') not in EIGENSOLVERS:
        out.append('{}.eigensolver must be one of {}'.format(where, EIGENSOLVERS))
    return out


@dataclass
class GradcheckConfig:
    d: List[int] = field(default_factory=lambda: [2, 4, 8])
    m: List[int] = field(default_factory=lambda: [16, 64])
    # None: {1, d/2, d}
    k_G: Optional[List[int]] = None
    modes: List[str] = field(default_factory=lambda: ['zca', 'pca', 'bn'])
    tolerance: float = 1e-5
    h: float = 1e-5
    backends: List[str] = field(default_factory=lambda: ['simplified', 'reference'])
    eigensolver: str = 'jacobi'

    def problems(self, where='gradcheck'):
        out = []
        if self.eigensolver not in EIGENSOLVERS:
            out.append('{}.eigensolver must be one of {}'.format(where, EIGENSOLVERS))
        if self.tolerance < 0.0:
            out.append('{}.tolerance must be >= 0'.format(where))
        if not self.h > 0.0:
            out.append('{}.h must be > 0'.format(where))
        if any(mode not in MODES for mode in self.modes):
            out.append('{}.modes must be taken from {}'.format(where, MODES))
        if any(b not in ('simplified', 'reference') for b in self.backends) or not self.backends:
            out.append('{}.backends must be taken from simplified, reference'.format(where))
        if any(d < 1 for d in self.d) or any(m < 2 for m in self.m):
            out.append('{}: d must be >= 1 and m >= 2'.format(where))
        return out

    def grid(self):
        cells = []
        for d in self.d:
            for m in self.m:
                for mode in self.modes:
                    if mode == 'bn':
                        sizes = [1]
                    elif self.k_G is None:
                        sizes = sorted({1, max(1, d // 2), d})
                    else:
                        sizes = [k for k in self.k_G if 1 <= k <= d]
                    cells.extend((d, m, k, mode) for k in sizes)
        return cells


@dataclass
class WhitenConfig:
    mode: str = 'zca'
    group_size: Optional[int] = None
    epsilon: float = 1e-5
    affine: bool = False
    eigensolver: str = 'jacobi'
    isometry_examples: int = 0

    def problems(self, where='whiten'):
        out = []
        if self.mode not in MODES:
            out.append('{}.mode must be one of {}'.format(where, MODES))
        if self.epsilon < 0.0:
            out.append('{}.epsilon must be >= 0'.format(where))
        if self.group_size is not None and self.group_size < 1:
            out.append('{}.group_size must be >= 1'.format(where))
        if self.eigensolver not in EIGENSOLVERS:
            out.append('{}.eigensolver must be one of {}'.format(where, EIGENSOLVERS))
        if self.isometry_examples < 0 or self.isometry_examples == 1:
            out.append('{}.isometry_examples must be 0 or >= 2'.format(where))
        return out


@dataclass
class AxisSwapConfig:
    variant: str = 'flip'

    def problems(self, where='axis_swap'):
        if self.variant not in AXIS_SWAP_VARIANTS:
            return ['{}.variant must be one of {}'.format(where, AXIS_SWAP_VARIANTS)]
        return []


@dataclass
class BenchConfig:
    d: int = 256
    m: int = 512
    group_sizes: List[Optional[int]] = field(default_factory=lambda: [1, 16, 64, None])
    modes: List[str] = field(default_factory=lambda: ['zca'])
    repeats: int = 5
    eigensolver: str = 'jacobi'

    def problems(self, where='bench'):
        out = []
        if self.d < 1:
            out.append('{}.d must be >= 1'.format(where))
        if self.m < 2:
            out.append('{}.m must be >= 2 (zero-size and single-example batches cannot be whitened)'.format(where))
        if self.repeats < 1:
            out.append('{}.repeats must be >= 1'.format(where))
        if any(mode not in MODES for mode in self.modes):
            out.append('{}.modes must be taken from {}'.format(where, MODES))
        if self.eigensolver not in EIGENSOLVERS:
            out.append('{}.eigensolver must be one of {}'.format(where, EIGENSOLVERS))
        return out


@dataclass
class ConditioningConfig:
    hidden: List[int] = field(default_factory=lambda: [32, 32])
    variants: List[str] = field(default_factory=lambda: ['plain', 'bn', 'zca'])
    lr: float = 0.1
    epochs: int = 10
    batch_size: int = 64
    every: int = 5
    fisher_size: int = 1000
    window: int = 3
    correlation: float = 0.99
    n: int = 10000
    eigensolver: str = 'jacobi'

    def problems(self, where='conditioning'):
        out = []
        if any(v not in NORM_VARIANTS for v in self.variants):
            out.append('{}.variants must be taken from {}'.format(where, NORM_VARIANTS))
        if not self.lr > 0.0 or self.epochs < 0 or self.batch_size < 2 or self.every < 1 or self.window < 1:
            out.append('{}: need lr > 0, epochs >= 0, batch_size >= 2, every >= 1, window >= 1'.format(where))
        if not abs(self.correlation) < 1.0:
            out.append('{}.correlation must satisfy |correlation| < 1'.format(where))
        return out


@dataclass
class LossComparisonConfig:
    hidden: List[int] = field(default_factory=lambda: [100])
    variants: List[str] = field(default_factory=lambda: ['plain', 'zca', 'pca'])
    lrs: List[float] = field(default_factory=lambda: [0.1, 0.5, 1.0, 5.0])
    epochs: int = 200
    eigensolver: str = 'jacobi'

    def problems(self, where='loss_comparison'):
        out = []
        if any(v not in NORM_VARIANTS for v in self.variants):
            out.append('{}.variants must be taken from {}'.format(where, NORM_VARIANTS))
        if not self.lrs or any(not lr > 0.0 for lr in self.lrs):
            out.append('{}.lrs must be positive'.format(where))
        return out


@dataclass
class GroupSizeSweepConfig:
    width: int = 32
    depth: int = 5
    group_sizes: List[Optional[int]] = field(default_factory=lambda: [1, 8, 16, None])
    lrs: List[float] = field(default_factory=lambda: [0.1, 0.5, 1.0])
    epochs: int = 20
    batch_size: int = 256
    eigensolver: str = 'jacobi'

    def problems(self, where='group_size_sweep'):
        out = []
        if self.width < 1 or self.depth < 1:
            out.append('{}: width and depth must be >= 1'.format(where))
        if self.batch_size <= self.width:
            out.append('{}.batch_size must exceed width so full-layer groups stay nonsingular'.format(where))
        if not self.lrs or any(not lr > 0.0 for lr in self.lrs):
            out.append('{}.lrs must be positive'.format(where))
        return out


@dataclass
class ExperimentConfig:
    seed: int = 0
    out: Optional[str] = None
    experiment: str = 'single'
    record_model: bool = True
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    network: NetworkConfig = field(default_factory=NetworkConfig)
    train: Dict[str, typing.Any] = field(default_factory=dict)
    sweep: Optional[Dict[str, List[typing.Any]]] = None
    gradcheck: GradcheckConfig = field(default_factory=GradcheckConfig)
    whiten: WhitenConfig = field(default_factory=WhitenConfig)
    axis_swap: AxisSwapConfig = field(default_factory=AxisSwapConfig)
    bench: BenchConfig = field(default_factory=BenchConfig)
    conditioning: ConditioningConfig = field(default_factory=ConditioningConfig)
    loss_comparison: LossComparisonConfig = field(default_factory=LossComparisonConfig)
    group_size_sweep: GroupSizeSweepConfig = field(default_factory=GroupSizeSweepConfig)

    def train_config(self) -> TrainConfig:
        settings = dict(self.train)
        settings.setdefault('seed', self.seed)
        return TrainConfig(**settings)

    def problems(self):
        out = []
        if self.experiment not in EXPERIMENTS:
            out.append('experiment must be one of {}'.format(EXPERIMENTS))
        for name in ('dataset', 'network', 'gradcheck', 'whiten', 'axis_swap', 'bench', 'conditioning',
                     'loss_comparison', 'group_size_sweep'):
            out.extend(getattr(self, name).problems(name))
        out.extend(self._train_problems())
        return out

    def _train_problems(self):
        """Type-checks the train and sweep blocks against TrainConfig, converting ints to floats in place."""
        hints = typing.get_type_hints(TrainConfig)
        out = ['train: unknown key "{}"'.format(k) for k in sorted(set(self.train) - set(hints))]
        for key in sorted(set(self.train) & set(hints)):
            self.train[key] = _coerce(self.train[key], hints[key], 'train.' + key, out)
        if not out:
            try:
                self.train_config()
            except ConfigError as e:
                out.extend('train: ' + p for p in e.problems)

        if self.sweep is not None:
            out.extend('sweep: unknown key "{}"'.format(k) for k in sorted(set(self.sweep) - set(hints)))
            for key in sorted(set(self.sweep) & set(hints)):
                values = self.sweep[key]
                if not isinstance(values, list) or not values:
                    out.append('sweep.{}: expected a non-empty list'.format(key))
                    continue
                self.sweep[key] = [_coerce(v, hints[key], 'sweep.{}[{}]'.format(key, i), out)
                                   for i, v in enumerate(values)]
            if not out:
                settings = self.train_config().to_dict()
                for key, values in sorted(self.sweep.items()):
                    for value in values:
                        problems = _cell_problems(settings, key, value)
                        out.extend('sweep.{}={!r}: {}'.format(key, value, p) for p in problems)
        return out


def _cell_problems(settings: dict, key: str, value) -> list:
    try:
        TrainConfig(**dict(settings, **{key: value}))
    except ConfigError as e:
        return e.problems
    return []


def _type_name(tp) -> str:
    return getattr(tp, '__name__', str(tp))


def _coerce(value, tp, where: str, problems: list):
    """Check value against the annotation tp; returns the (possibly converted) value."""
    origin = typing.get_origin(tp)
    args = typing.get_args(tp)

    if tp is typing.Any:
        return value
    if origin is typing.Union:
        if value is None and type(None) in args:
            return None
        inner = [a for a in args if a is not type(None)]
        return _coerce(value, inner[0], where, problems)
    if value is None:
        problems.append('{}: must not be null'.format(where))
        return value
    if origin is list:
        if not isinstance(value, list):
            problems.append('{}: expected a list'.format(where))
            return value
        return [_coerce(v, args[0], '{}[{}]'.format(where, i), problems) for i, v in enumerate(value)]
    if origin is dict:
        if not isinstance(value, dict):
            problems.append('{}: expected an object'.format(where))
            return value
        return {k: _coerce(v, args[1], '{}.{}'.format(where, k), problems) for k, v in value.items()}
    if dataclasses.is_dataclass(tp):
        return _build(tp, value, where, problems)
    if tp is bool:
        if not isinstance(value, bool):
            problems.append('{}: expected true or false'.format(where))
        return value
    if tp is int:
        if isinstance(value, bool) or not isinstance(value, int):
            problems.append('{}: expected an integer'.format(where))
        return value
    if tp is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            problems.append('{}: expected a number'.format(where))
            return value
        return float(value)
    if tp is str:
        if not isinstance(value, str):
            problems.append('{}: expected a string'.format(where))
        return value
    problems.append('{}: unsupported field type {}'.format(where, _type_name(tp)))
    return value


def _build(cls, data, where: str, problems: list):
    if not isinstance(data, dict):
        problems.append('{}: expected an object'.format(where or 'config'))
        return cls()
    hints = typing.get_type_hints(cls)
    names = [f.name for f in dataclasses.fields(cls)]
    for key in sorted(set(data) - set(names)):
        problems.append('{}: unknown key "{}"'.format(where or 'config', key))

    values = {}
    for name in names:
        if name in data:
            values[name] = _coerce(data[name], hints[name], '{}.{}'.format(where, name) if where else name, problems)
    try:
        return cls(**values)
    except (TypeError, ValueError) as e:
        problems.append('{}: {}'.format(where or 'config', e))
        return cls()


def parse_config(text: str, seed: int = None, out: str = None) -> ExperimentConfig:
    try:
        data = ujson.loads(text)
    except ValueError as e:
        raise ConfigError('configs.parse_config: not valid JSON: {}'.format(e), problems=['invalid JSON: {}'.format(e)])

    problems = []
    config = _build(ExperimentConfig, data, '', problems)
    if not problems:
        if seed is not None:
            config.seed = int(seed)
        if out is not None:
            config.out = out
        problems.extend(config.problems())
    if problems:
        raise ConfigError('configs.parse_config: ' + '; '.join(problems), problems=problems)
    return config


def load_config(path: str = None, seed: int = None, out: str = None) -> ExperimentConfig:
    """Read and validate a config file; no path means every default."""
    if path is None:
        return parse_config('{}', seed=seed, out=out)
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise ConfigError('configs.load_config: cannot read {}: {}'.format(path, e), problems=[str(e)])
    return parse_config(text, seed=seed, out=out)
