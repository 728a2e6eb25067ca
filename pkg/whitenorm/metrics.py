"""

    Per-epoch training records and their CSV export.

"""
import csv
from dataclasses import dataclass, asdict, fields
from typing import Optional, List

METRICS_COLUMNS = ['epoch', 'iteration', 'lr', 'train_loss', 'train_acc', 'test_loss', 'test_acc', 'seconds']


@dataclass
class MetricsEntry:
    """
    One row of a training log.

    `iteration` is the number of optimizer steps taken when the epoch ended, `lr` the rate of
    the last of them. Test columns stay None without a held-out split.
    """
    epoch: int
    iteration: int
    lr: float
    train_loss: float
    train_acc: float
    test_loss: Optional[float] = None
    test_acc: Optional[float] = None
    # wall time of the epoch; 0.0 unless timing was requested
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return asdict(self)


def record_metrics_entry(log: List[MetricsEntry], entry: MetricsEntry) -> None:
    log.append(entry)


def metrics_to_dicts(log: List[MetricsEntry]) -> List[dict]:
    return [e.to_dict() for e in log]


def _cell(value):
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    return value


def export_metrics_to_csv(log: List[MetricsEntry], filepath: str) -> None:
    """
    Header plus one row per entry; floats are written with repr() so a re-read is exact.
    An empty log still gets its header.
    """
    fieldnames = [f.name for f in fields(MetricsEntry)]
    with open(filepath, 'w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows({k: _cell(v) for k, v in e.to_dict().items()} for e in log)
