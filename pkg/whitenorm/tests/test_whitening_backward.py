import unittest

import numpy as np

from ..errors import DegenerateSpectrumError, ShapeError
from ..logic.gradcheck import gradcheck, gapped_batch, dbn_objective
from ..logic.whiten_batch import dbn_forward
from ..logic.whitening_backward import dbn_backward, gap_matrix
from ..logic.whitening_backward_reference import dbn_backward_reference
from ..states import DbnState
from .TestDataFixtures import random_batch


class TestWhiteningBackward(unittest.TestCase):

    def test_backends_agree(self):
        rng = np.random.default_rng(11)
        for case in range(100):
            d = int(rng.integers(2, 7))
            m = int(rng.integers(d + 2, 40))
            group_size = int(rng.integers(1, d + 1))
            mode = ('zca', 'pca')[case % 2]
            x = gapped_batch(d, m, group_size, seed=case)
            state = DbnState(d, group_size=group_size, mode=mode)
            _, cache = dbn_forward(x, state)
            grad = rng.standard_normal((d, m))
            simplified = dbn_backward(grad, cache, state)
            reference = dbn_backward_reference(grad, cache, state)
            scale = max(1.0, float(np.max(np.abs(reference))))
            self.assertLess(float(np.max(np.abs(simplified - reference))), 1e-12 * scale,
                            'd={} m={} k_G={} {}'.format(d, m, group_size, mode))

    def test_gradient_sums_to_zero(self):
        for mode in ('zca', 'pca', 'bn'):
            state = DbnState(5, mode=mode)
            _, cache = dbn_forward(gapped_batch(5, 30, seed=1), state)
            grad = dbn_backward(random_batch(5, 30, seed=2), cache, state)
            np.testing.assert_allclose(grad.sum(axis=1), 0.0, atol=1e-10)

    def test_matches_finite_differences(self):
        target = random_batch(4, 12, seed=3)
        for mode in ('zca', 'pca'):
            for group_size in (1, 2, 4):
                for backend in ('simplified', 'reference'):
                    state = DbnState(4, group_size=group_size, mode=mode)
                    x = gapped_batch(4, 12, group_size, seed=group_size)
                    error = gradcheck(dbn_objective(state, target, backend), x)
                    self.assertLess(error, 1e-5, '{} k_G={}'.format(mode, group_size))

    def test_affine_and_threshold_gradients(self):
        state = DbnState(3, affine=True, thresholds=True)
        state.gamma[:] = [1.2, 0.7, -0.4]
        state.beta[:] = [0.1, -0.3, 0.2]
        state.thresholds[:] = [-0.2, 0.1, 0.0]
        x = gapped_batch(3, 10, seed=8)
        target = random_batch(3, 10, seed=9)
        error = gradcheck(dbn_objective(state, target), x)
        self.assertLess(error, 1e-5)

        _, cache = dbn_forward(x, state)
        dbn_backward(np.ones((3, 10)), cache, state)
        self.assertEqual(sorted(cache.param_grads), ['beta', 'gamma', 'thresholds'])
        passes = cache.pre_threshold > state.thresholds[:, None]
        np.testing.assert_allclose(cache.param_grads['beta'], passes.sum(axis=1))
        np.testing.assert_allclose(cache.param_grads['thresholds'], (~passes).sum(axis=1))

    def test_degenerate_spectrum(self):
        x = np.array([[1.0, 1.0, -1.0, -1.0], [1.0, -1.0, 1.0, -1.0]])
        state = DbnState(2, epsilon=0.0)
        _, cache = dbn_forward(x, state)
        with self.assertRaises(DegenerateSpectrumError):
            dbn_backward(random_batch(2, 4), cache, state)

        state = DbnState(2, epsilon=0.0, clamp_degenerate=True)
        _, cache = dbn_forward(x, state)
        with self.assertLogs('whitenorm.logic.whitening_backward', 'WARNING'):
            grad = dbn_backward(random_batch(2, 4), cache, state)
        self.assertTrue(np.all(np.isfinite(grad)))

    def test_gap_matrix(self):
        k = gap_matrix(np.array([3.0, 1.0]))
        np.testing.assert_allclose(k, [[0.0, 0.5], [-0.5, 0.0]])
        np.testing.assert_array_equal(gap_matrix(np.array([2.0])), np.zeros((1, 1)))

    def test_gradient_shape_checked(self):
        state = DbnState(3)
        _, cache = dbn_forward(gapped_batch(3, 8), state)
        with self.assertRaises(ShapeError):
            dbn_backward(np.ones((3, 7)), cache, state)


if __name__ == '__main__':
    unittest.main()
