import unittest

import numpy as np

from ..errors import InvalidInputError, InsufficientBatchError
from ..linalg import covariance
from ..logic.gradcheck import (gradcheck, numeric_gradient, relative_error, gapped_batch, check_dbn,
                               gradcheck_suite, default_grid, dbn_objective)
from ..logic.whiten_batch import dbn_forward
from ..states import DbnState


class TestGradcheck(unittest.TestCase):

    def test_sum(self):
        x = 0.1 * np.random.default_rng(0).normal(size=(3, 4))
        self.assertLess(gradcheck(lambda z: (float(np.sum(z)), np.ones_like(z)), x), 1e-10)

    def test_quadratic(self):
        x = np.random.default_rng(1).normal(size=(2, 5))
        self.assertLess(gradcheck(lambda z: (float(np.sum(z ** 2)), 2.0 * z), x), 1e-6)

    def test_corrupted_gradient_is_caught(self):
        state = DbnState(3)
        x = gapped_batch(3, 10, seed=2)
        target = np.random.default_rng(3).normal(size=(3, 10))
        objective = dbn_objective(state, target)

        def doubled(z):
            value, grad = objective(z)
            return value, 2.0 * grad

        self.assertLess(gradcheck(objective, x), 1e-5)
        self.assertGreater(gradcheck(doubled, x), 0.1)

    def test_objective_leaves_state_alone(self):
        state = DbnState(3)
        objective = dbn_objective(state, np.ones((3, 10)))
        objective(gapped_batch(3, 10))
        np.testing.assert_array_equal(state.running_mean, np.zeros(3))

    def test_numeric_gradient_restores_input(self):
        x = np.arange(6.0).reshape(2, 3)
        before = x.copy()
        numeric_gradient(lambda z: float(np.sum(z ** 3)), x)
        np.testing.assert_array_equal(x, before)
        with self.assertRaises(ValueError):
            numeric_gradient(lambda z: 0.0, x, h=0.0)
        with self.assertRaises(InvalidInputError):
            numeric_gradient(lambda z: float('nan'), x)

    def test_relative_error(self):
        self.assertEqual(relative_error([1.0, 2.0], [1.0, 2.0]), 0.0)
        self.assertAlmostEqual(relative_error([1.0], [1.1]), 0.1 / 1.1)
        self.assertAlmostEqual(relative_error([0.0], [1e-9]), 0.1)

    def test_gapped_batch(self):
        x = gapped_batch(4, 20, group_size=2, seed=1, gap=0.5)
        for start in (0, 2):
            eigenvalues = np.linalg.eigvalsh(covariance(x[start:start + 2]))
            np.testing.assert_allclose(eigenvalues, [1.0, 1.5], atol=1e-10)
        with self.assertRaises(InsufficientBatchError):
            gapped_batch(4, 4)

    def test_check_dbn(self):
        case = check_dbn(4, 16, 2, 'zca', seed=0, affine=True)
        self.assertEqual(case['k_G'], 2)
        self.assertLess(max(case['errors'].values()), 1e-5)
        self.assertLess(case['backend_difference'], 1e-12)

    def test_suite(self):
        grid = [(2, 16, 1, 'zca'), (4, 16, 4, 'pca'), (4, 16, 2, 'zca'), (3, 16, 1, 'bn')]
        report = gradcheck_suite(grid, seed=0)
        self.assertTrue(report['passed'])
        self.assertEqual(len(report['cases']), 4)
        self.assertLess(report['max_error'], 1e-5)

        failing = gradcheck_suite(grid[:1], tolerance=0.0)
        self.assertFalse(failing['passed'])

    def test_default_grid(self):
        grid = default_grid()
        self.assertIn((8, 64, 4, 'zca'), grid)
        self.assertIn((2, 16, 1, 'bn'), grid)
        self.assertNotIn((2, 16, 2, 'bn'), grid)

    def test_default_grid_passes(self):
        report = gradcheck_suite()
        self.assertTrue(report['passed'], report['max_error'])
        self.assertEqual(len(report['cases']), len(default_grid()))
        for case in report['cases']:
            self.assertLess(case['backend_difference'], 1e-10)

    def test_lapack_solver(self):
        report = gradcheck_suite([(4, 16, 2, 'pca'), (8, 64, 8, 'pca')], eigensolver='lapack')
        self.assertTrue(report['passed'], report['max_error'])

    def test_single_batch_whitening_is_exact(self):
        x = gapped_batch(3, 12, seed=5)
        out, _ = dbn_forward(x, DbnState(3, epsilon=0.0))
        np.testing.assert_allclose(covariance(out), np.eye(3), atol=1e-12)


if __name__ == '__main__':
    unittest.main()
