import csv
import os
import tempfile
import unittest

import numpy as np

from ..errors import ShapeError, ConfigError
from ..logic.sgd import sgd_step
from ..metrics import MetricsEntry, METRICS_COLUMNS, export_metrics_to_csv, record_metrics_entry
from ..training import (TrainConfig, ConstantSchedule, HalveEverySchedule, DivideAtSchedule, schedule_factory)


class TestSgd(unittest.TestCase):

    def test_momentum(self):
        config = TrainConfig(lr=0.1, momentum=0.9)
        params = {'w': np.zeros(1)}
        velocity = {}
        for _ in range(2):
            sgd_step(params, {'w': np.ones(1)}, velocity, config)
        self.assertAlmostEqual(float(params['w'][0]), -0.29)
        self.assertAlmostEqual(float(velocity['w'][0]), -0.19)

    def test_plain_gradient_descent(self):
        config = TrainConfig(lr=0.5)
        w = np.array([1.0, -2.0])
        sgd_step({'w': w}, {'w': np.array([0.25, 0.5])}, {}, config)
        np.testing.assert_array_equal(w, [1.0 - 0.125, -2.0 - 0.25])

    def test_weight_decay(self):
        config = TrainConfig(lr=0.1, weight_decay=0.5)
        w = np.ones(3)
        sgd_step({'w': w}, {'w': np.zeros(3)}, {}, config)
        np.testing.assert_allclose(w, 0.95)

    def test_lr_override(self):
        w = np.ones(1)
        sgd_step({'w': w}, {'w': np.ones(1)}, {}, TrainConfig(lr=0.1), lr=0.01)
        self.assertAlmostEqual(float(w[0]), 0.99)

    def test_shapes_checked(self):
        config = TrainConfig()
        with self.assertRaises(ShapeError):
            sgd_step({'w': np.ones(2)}, {'w': np.ones(3)}, {}, config)
        with self.assertRaises(ShapeError):
            sgd_step({'w': np.ones(2)}, {}, {}, config)
        with self.assertRaises(ShapeError):
            sgd_step({'w': np.ones(2)}, {'w': np.ones(2)}, {'w': np.ones(3)}, config)


class TestSchedules(unittest.TestCase):

    def test_constant(self):
        self.assertEqual(ConstantSchedule(0.3).rate(1000, 50), 0.3)

    def test_halve_every(self):
        schedule = HalveEverySchedule(1.0, every=10)
        self.assertEqual([schedule.rate(i, 0) for i in (0, 9, 10, 25)], [1.0, 1.0, 0.5, 0.25])

    def test_divide_at(self):
        schedule = DivideAtSchedule(1.0, epochs=[60, 20], factor=5.0)
        self.assertEqual(schedule.rate(0, 19), 1.0)
        self.assertAlmostEqual(schedule.rate(0, 20), 0.2)
        self.assertAlmostEqual(schedule.rate(0, 60), 0.04)

    def test_factory(self):
        self.assertIsInstance(schedule_factory(TrainConfig(schedule='halve_every', halve_every=5)),
                              HalveEverySchedule)
        self.assertIsInstance(schedule_factory(TrainConfig(schedule='divide_at', divide_at=[3])), DivideAtSchedule)
        self.assertEqual(schedule_factory(TrainConfig(lr=0.2)).describe(), {'schedule': 'constant', 'lr': 0.2})


class TestTrainConfig(unittest.TestCase):

    def test_problems(self):
        for kwargs in ({'lr': 0.0}, {'momentum': 1.0}, {'weight_decay': -1.0}, {'schedule': 'cosine'},
                       {'schedule': 'halve_every'}, {'schedule': 'divide_at', 'factor': 1.0},
                       {'epochs': -1}, {'batch_size': 0}):
            with self.assertRaises(ConfigError):
                TrainConfig(**kwargs)
        with self.assertRaises(ConfigError) as ctx:
            TrainConfig(lr=-1.0, momentum=2.0)
        self.assertEqual(len(ctx.exception.problems), 2)

    def test_full_batch_needs_no_batch_size(self):
        self.assertTrue(TrainConfig(full_batch=True, batch_size=None).full_batch)


class TestMetrics(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = os.path.join(self.tmp.name, 'metrics.csv')

    def tearDown(self):
        self.tmp.cleanup()

    def read(self):
        with open(self.path, newline='') as f:
            return list(csv.DictReader(f))

    def test_columns_and_exact_floats(self):
        log = []
        record_metrics_entry(log, MetricsEntry(epoch=1, iteration=4, lr=0.1, train_loss=1 / 3, train_acc=0.5))
        record_metrics_entry(log, MetricsEntry(epoch=2, iteration=8, lr=0.1, train_loss=0.25, train_acc=0.75,
                                               test_loss=0.3, test_acc=0.7))
        export_metrics_to_csv(log, self.path)
        rows = self.read()
        self.assertEqual(list(rows[0].keys()), METRICS_COLUMNS)
        self.assertEqual(float(rows[0]['train_loss']), 1 / 3)
        self.assertEqual(rows[0]['test_loss'], '')
        self.assertEqual(rows[1]['test_acc'], '0.7')

    def test_empty_log_has_header(self):
        export_metrics_to_csv([], self.path)
        with open(self.path) as f:
            self.assertEqual(f.read().strip(), ','.join(METRICS_COLUMNS))


if __name__ == '__main__':
    unittest.main()
