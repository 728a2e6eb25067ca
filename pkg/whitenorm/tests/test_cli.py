import csv
import io
import os
import tempfile
import unittest
from unittest import mock

import numpy as np
import ujson

from ..adapters.runs import LocalFileSystemRunAdapter, dumps_report
from ..cli import main, EXIT_OK, EXIT_FAILED, EXIT_CONFIG
from ..configs import parse_config, load_config
from ..errors import ConfigError
from ..logic.network import evaluate
from ..training import TrainConfig
from ..WhiteNorm import WhiteNorm
from .TestDataFixtures import TestDataDatasetAdapter, separable_dataset, small_spec


class CliTestCase(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.out = os.path.join(self.tmp.name, 'out')

    def tearDown(self):
        self.tmp.cleanup()

    def config(self, document, name='config.json'):
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as f:
            f.write(document if isinstance(document, str) else ujson.dumps(document))
        return path

    def run_cli(self, command, document=None, *extra):
        argv = [command, '--out', self.out, '--log-level', 'ERROR']
        if document is not None:
            argv += ['--config', self.config(document)]
        argv += list(extra)
        with mock.patch('sys.stdout', new_callable=io.StringIO) as stdout:
            code = main(argv)
        return code, stdout.getvalue()

    def read_csv(self, name):
        with open(os.path.join(self.out, name), newline='') as f:
            return list(csv.DictReader(f))


class TestConfigs(unittest.TestCase):

    def test_defaults(self):
        config = load_config()
        self.assertEqual(config.seed, 0)
        self.assertEqual(config.train_config().batch_size, 64)
        self.assertEqual(load_config(seed=5, out='x').seed, 5)

    def test_problems_are_collected(self):
        with self.assertRaises(ConfigError) as ctx:
            parse_config(ujson.dumps({'seed': 'one', 'colour': 1, 'dataset': {'d': 1.5}}))
        self.assertEqual(len(ctx.exception.problems), 3)

    def test_range_checks(self):
        for document in ({'train': {'lr': -1.0}}, {'train': {'learning_rate': 0.1}},
                         {'whiten': {'mode': 'cholesky'}}, {'bench': {'m': 0}},
                         {'network': {'norm': {'kind': 'dbn', 'colour': 1}}},
                         {'dataset': {'correlation': 1.0}}, {'experiment': 'everything'},
                         {'group_size_sweep': {'width': 32, 'batch_size': 32}}):
            with self.assertRaises(ConfigError):
                parse_config(ujson.dumps(document))

    def test_integers_accepted_for_floats(self):
        config = parse_config(ujson.dumps({'whiten': {'epsilon': 0}, 'train': {'lr': 1}}))
        self.assertEqual(config.whiten.epsilon, 0.0)
        self.assertEqual(config.train_config().lr, 1)

    def test_train_and_sweep_types_are_checked(self):
        for document in ({'train': {'epochs': 2.5}}, {'train': {'full_batch': 'yes'}},
                         {'train': {'seed': 'abc'}}, {'sweep': {'lr': [0.1, 'x']}},
                         {'sweep': {'lr': []}}, {'sweep': {'lr': [0.1, -1.0]}},
                         {'sweep': {'momentum': [0.5, 1.5]}}):
            with self.assertRaises(ConfigError, msg=str(document)):
                parse_config(ujson.dumps(document))

        with self.assertRaises(ConfigError) as ctx:
            parse_config(ujson.dumps({'train': {'full_batch': 'yes', 'seed': 'abc'}}))
        self.assertEqual(len(ctx.exception.problems), 2)

        config = parse_config(ujson.dumps({'sweep': {'lr': [1, 0.5]}}))
        self.assertEqual(config.sweep['lr'], [1.0, 0.5])
        self.assertIsInstance(config.sweep['lr'][0], float)

    def test_gradcheck_grid(self):
        config = parse_config(ujson.dumps({'gradcheck': {'d': [4], 'm': [16], 'modes': ['zca', 'bn']}}))
        self.assertEqual(config.gradcheck.grid(), [(4, 16, 1, 'zca'), (4, 16, 2, 'zca'), (4, 16, 4, 'zca'),
                                                   (4, 16, 1, 'bn')])


class TestCli(CliTestCase):

    def test_bad_configs(self):
        self.assertEqual(self.run_cli('whiten', '{"seed": ')[0], EXIT_CONFIG)
        self.assertEqual(self.run_cli('whiten', {'whiten': {'group_size': 0}})[0], EXIT_CONFIG)
        self.assertEqual(self.run_cli('bench', {'bench': {'m': 0}})[0], EXIT_CONFIG)
        self.assertEqual(self.run_cli('train', {'train': {'epochs': 2.5}})[0], EXIT_CONFIG)
        code, _ = self.run_cli('whiten', None, '--config', os.path.join(self.tmp.name, 'missing.json'))
        self.assertEqual(code, EXIT_CONFIG)
        with self.assertRaises(SystemExit):
            self.run_cli('fly')

    def test_gradcheck(self):
        document = {'gradcheck': {'d': [3], 'm': [16], 'modes': ['zca', 'pca']}}
        code, stdout = self.run_cli('gradcheck', document)
        self.assertEqual(code, EXIT_OK)
        report = ujson.loads(stdout)
        self.assertTrue(report['passed'])
        self.assertEqual(len(report['cases']), 4)
        self.assertTrue(os.path.exists(os.path.join(self.out, 'gradcheck.json')))

        document['gradcheck']['tolerance'] = 0.0
        self.assertEqual(self.run_cli('gradcheck', document)[0], EXIT_FAILED)

    def test_whiten(self):
        document = {'dataset': {'d': 4, 'n': 50, 'correlation': 0.6}, 'whiten': {'group_size': 2}}
        code, stdout = self.run_cli('whiten', document)
        self.assertEqual(code, EXIT_OK)
        report = ujson.loads(stdout)
        self.assertEqual(report['k_G'], 2)
        self.assertLess(report['formula_deviation'], 1e-8)
        rows = self.read_csv('activations.csv')
        self.assertEqual(len(rows), 50)
        self.assertEqual(list(rows[0]), ['label', 'in_0', 'in_1', 'in_2', 'in_3', 'out_0', 'out_1', 'out_2', 'out_3'])
        outputs = np.array([[float(row['out_{}'.format(i)]) for row in rows] for i in range(4)])
        np.testing.assert_allclose(outputs.mean(axis=1), 0.0, atol=1e-10)

    def test_whiten_with_isometry(self):
        document = {'dataset': {'d': 4, 'n': 50, 'correlation': 0.6},
                    'whiten': {'mode': 'pca', 'isometry_examples': 8}}
        code, stdout = self.run_cli('whiten', document)
        self.assertEqual(code, EXIT_OK)
        summary = ujson.loads(stdout)['isometry']
        self.assertEqual(summary['mode'], 'pca')
        self.assertGreaterEqual(summary['zero_count'], 4)
        with open(os.path.join(self.out, 'isometry.json')) as f:
            self.assertEqual(len(ujson.load(f)['singular_values']), 32)

        document['whiten']['isometry_examples'] = 1
        self.assertEqual(self.run_cli('whiten', document)[0], EXIT_CONFIG)

    def test_demo_axis_swap(self):
        code, stdout = self.run_cli('demo-axis-swap', {'axis_swap': {'variant': 'flip'}}, '--seed', '3')
        self.assertEqual(code, EXIT_OK)
        report = ujson.loads(stdout)
        self.assertEqual(report['seed'], 3)
        self.assertEqual(report['pca_permutation'], [1, 0])
        self.assertEqual(report['zca_permutation'], [0, 1])

    def test_train_is_reproducible(self):
        document = {'seed': 2, 'dataset': {'d': 4, 'n': 120, 'num_classes': 3, 'correlation': 0.5, 'test_size': 20},
                    'network': {'hidden': [6], 'norm': {'kind': 'dbn', 'group_size': 3}},
                    'train': {'lr': 0.1, 'epochs': 3, 'batch_size': 25}}
        contents = []
        for _ in range(2):
            code, _ = self.run_cli('train', document)
            self.assertEqual(code, EXIT_OK)
            with open(os.path.join(self.out, 'metrics.csv')) as f:
                contents.append(f.read())
        self.assertEqual(contents[0], contents[1])
        rows = self.read_csv('metrics.csv')
        self.assertEqual([row['epoch'] for row in rows], ['1', '2', '3'])
        self.assertNotEqual(rows[-1]['test_acc'], '')
        self.assertTrue(os.path.exists(os.path.join(self.out, 'model.model.json')))

    def test_train_sweep(self):
        document = {'dataset': {'d': 3, 'n': 60}, 'network': {'hidden': [4]},
                    'train': {'epochs': 2, 'full_batch': True}, 'sweep': {'lr': [0.05, 0.2]}}
        code, stdout = self.run_cli('train', document)
        self.assertEqual(code, EXIT_OK)
        report = ujson.loads(stdout)
        self.assertEqual(len(report['cells']), 2)
        self.assertIn(report['best'], [{'lr': 0.05}, {'lr': 0.2}])
        self.assertTrue(os.path.exists(os.path.join(self.out, 'metrics_lr=0.05.csv')))

    def test_bench(self):
        document = {'bench': {'d': 4, 'm': 8, 'group_sizes': [1, None], 'repeats': 1}}
        code, stdout = self.run_cli('bench', document)
        self.assertEqual(code, EXIT_OK)
        rows = self.read_csv('bench.csv')
        self.assertEqual(list(rows[0]), ['mode', 'd', 'm', 'k_G', 'fwd_us', 'bwd_us'])
        self.assertEqual([row['k_G'] for row in rows], ['1', '4'])
        self.assertIn('timestamp', ujson.loads(stdout))

    def test_conditioning(self):
        document = {'dataset': {'d': 4, 'n': 100},
                    'conditioning': {'hidden': [4], 'epochs': 1, 'batch_size': 20, 'every': 1, 'fisher_size': 50,
                                     'n': 1000}}
        code, stdout = self.run_cli('conditioning', document)
        self.assertEqual(code, EXIT_OK)
        report = ujson.loads(stdout)
        self.assertEqual(sorted(report['fim']['final_kappa']), ['bn', 'plain', 'zca'])
        self.assertEqual(len(self.read_csv('fim_trace.csv')), 15)


class TestWhiteNorm(unittest.TestCase):

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.wn = WhiteNorm(dataset_adapter=TestDataDatasetAdapter(separable_dataset(100)),
                            run_adapter=LocalFileSystemRunAdapter(self.tmp.name), seed=1)

    def tearDown(self):
        self.tmp.cleanup()

    def test_model_round_trip(self):
        dataset, _ = self.wn.get_dataset()
        spec = small_spec(2, 2, [], hidden=4)
        net, log = self.wn.train(spec, TrainConfig(lr=0.1, epochs=2, batch_size=25), dataset)
        restored = self.wn.run_adapter.get_model('model')
        self.assertEqual(evaluate(restored, dataset.features, dataset.labels),
                         evaluate(net, dataset.features, dataset.labels))
        self.assertEqual(self.wn.run_adapter.get_report('train')['epochs'], len(log))

    def test_split_and_mean(self):
        train, test = self.wn.get_dataset(test_size=20, subtract_mean=True)
        self.assertEqual((train.size, test.size), (80, 20))
        np.testing.assert_allclose(train.features.mean(axis=1), 0.0, atol=1e-12)

    def test_reports_are_json_safe(self):
        text = dumps_report({'kappa': float('inf'), 'values': np.array([1.0, np.nan])})
        self.assertEqual(ujson.loads(text), {'kappa': 'inf', 'values': [1.0, 'nan']})


if __name__ == '__main__':
    unittest.main()
