"""

    Training configuration and learning-rate schedules.

    Make your own schedule by subclassing Schedule. A schedule maps the number of steps taken so
    far and the current epoch (both counted from 0) to the learning rate of the next step.

"""
from dataclasses import dataclass, field, asdict
from typing import List, Optional

from .errors import ConfigError

SCHEDULES = ('constant', 'halve_every', 'divide_at')


class Schedule:
    """
        The mother of all schedules, a constant rate
    """
    def __init__(self, lr: float):
        self.lr = float(lr)

    def rate(self, iteration: int, epoch: int) -> float:
        return self.lr

    def describe(self) -> dict:
        return {'schedule': 'constant', 'lr': self.lr}


class ConstantSchedule(Schedule):
    pass


class HalveEverySchedule(Schedule):
    """
        lr * 0.5 ** (iteration // every), halving after every `every` iterations
    """
    def __init__(self, lr: float, every: int):
        super().__init__(lr)
        self.every = int(every)

    def rate(self, iteration: int, epoch: int) -> float:
        return self.lr * 0.5 ** (iteration // self.every)

    def describe(self):
        return {'schedule': 'halve_every', 'lr': self.lr, 'every': self.every}


class DivideAtSchedule(Schedule):
    """
        lr divided by `factor` once for every milestone epoch already reached
    """
    def __init__(self, lr: float, epochs: List[int], factor: float):
        super().__init__(lr)
        self.epochs = sorted(int(e) for e in epochs)
        self.factor = float(factor)

    def rate(self, iteration: int, epoch: int) -> float:
        passed = sum(1 for milestone in self.epochs if epoch >= milestone)
        return self.lr / self.factor ** passed

    def describe(self):
        return {'schedule': 'divide_at', 'lr': self.lr, 'epochs': self.epochs, 'factor': self.factor}


@dataclass
class TrainConfig:
    lr: float = 0.1
    momentum: float = 0.0
    weight_decay: float = 0.0
    schedule: str = 'constant'
    halve_every: Optional[int] = None
    divide_at: List[int] = field(default_factory=list)
    factor: float = 5.0
    epochs: int = 1
    batch_size: Optional[int] = 64
    seed: int = 0
    full_batch: bool = False
    shuffle: bool = True
    record_time: bool = False

    def __post_init__(self):
        problems = self.problems()
        if problems:
            raise ConfigError('TrainConfig: ' + '; '.join(problems), problems=problems)

    def problems(self) -> List[str]:
        out = []
        if not self.lr > 0.0:
            out.append('lr must be > 0, got {}'.format(self.lr))
        if not 0.0 <= self.momentum < 1.0:
            out.append('momentum must be in [0, 1), got {}'.format(self.momentum))
        if self.weight_decay < 0.0:
            out.append('weight_decay must be >= 0, got {}'.format(self.weight_decay))
        if self.schedule not in SCHEDULES:
            out.append('schedule must be one of {}, got {!r}'.format(SCHEDULES, self.schedule))
        if self.schedule == 'halve_every' and (self.halve_every is None or self.halve_every < 1):
            out.append('halve_every needs a positive iteration count')
        if self.schedule == 'divide_at' and not self.factor > 1.0:
            out.append('factor must be > 1, got {}'.format(self.factor))
        if self.epochs < 0:
            out.append('epochs must be >= 0, got {}'.format(self.epochs))
        if not self.full_batch and (self.batch_size is None or self.batch_size < 1):
            out.append('batch_size must be >= 1 unless full_batch is set')
        return out

    def to_dict(self) -> dict:
        return asdict(self)


def schedule_factory(config: TrainConfig) -> Schedule:
    if config.schedule == 'halve_every':
        return HalveEverySchedule(config.lr, config.halve_every)
    if config.schedule == 'divide_at':
        return DivideAtSchedule(config.lr, config.divide_at, config.factor)
    return ConstantSchedule(config.lr)
