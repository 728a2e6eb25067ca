import csv
import logging
import math
import os
import tempfile

import jsonpickle
import jsonpickle.ext.numpy as jsonpickle_numpy
import numpy as np
import ujson

from ...metrics import export_metrics_to_csv
from .RunAdapter import RunAdapter

jsonpickle_numpy.register_handlers()

logger = logging.getLogger(__name__)


def to_json_safe(value):
    """Plain Python containers and scalars; non-finite floats become 'inf', '-inf' or 'nan'."""
    if isinstance(value, dict):
        return {str(k): to_json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_json_safe(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_json_safe(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return value
    return value


def dumps_report(report: dict) -> str:
    return ujson.dumps(to_json_safe(report), sort_keys=True, indent=2, escape_forward_slashes=False)


class LocalFileSystemRunAdapter(RunAdapter):
    """Writes <root>/<name>.csv, <root>/<name>.json and <root>/<name>.model.json."""

    def __init__(self, root=None):
        if root is None: root = os.path.join(tempfile.gettempdir(), 'whitenorm')
        if not os.path.exists(root):
            os.makedirs(root)
        self.root = root

    def path(self, name: str, suffix: str) -> str:
        return os.path.join(self.root, name + suffix)

    def put_rows(self, name: str, rows, columns=None):
        rows = list(rows)
        columns = list(columns) if columns is not None else (list(rows[0].keys()) if rows else [])
        path = self.path(name, '.csv')
        with open(path, 'w', newline='') as f:
            writer = csv.DictWriter(f, fieldnames=columns)
            writer.writeheader()
            writer.writerows({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()} for row in rows)
        logger.debug('put_rows: %d rows to %s', len(rows), path)
        return path

    def put_metrics(self, name: str, log):
        path = self.path(name, '.csv')
        export_metrics_to_csv(log, path)
        return path

    def put_report(self, name: str, report: dict):
        path = self.path(name, '.json')
        with open(path, 'w') as f:
            f.write(dumps_report(report))
            f.write('\n')
        return path

    def get_report(self, name: str) -> dict:
        with open(self.path(name, '.json')) as f:
            return ujson.loads(f.read())

    def put_model(self, name: str, model):
        path = self.path(name, '.model.json')
        with open(path, 'w') as f:
            f.write(jsonpickle.encode(model))
        return path

    def get_model(self, name: str):
        with open(self.path(name, '.model.json')) as f:
            return jsonpickle.decode(f.read())
