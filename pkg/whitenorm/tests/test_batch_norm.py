import unittest

import numpy as np

from ..errors import InsufficientBatchError, InvalidInputError, ShapeError, NotPositiveDefiniteError
from ..logic.batch_norm import bn_forward, bn_backward
from ..logic.whiten_batch import dbn_forward, dbn_infer
from ..states import DbnState
from .TestDataFixtures import random_batch


class TestBatchNorm(unittest.TestCase):

    def setUp(self):
        self.x = random_batch(3, 20, seed=4, scale=2.0) + 5.0
        self.state = DbnState(3, mode='bn')

    def test_standardizes(self):
        out, _ = bn_forward(self.x, self.state)
        variance = self.x.var(axis=1)
        np.testing.assert_allclose(out.mean(axis=1), 0.0, atol=1e-12)
        np.testing.assert_allclose(out.var(axis=1), variance / (variance + self.state.epsilon), rtol=1e-12)

    def test_running_statistics(self):
        bn_forward(self.x, self.state)
        lam = self.state.momentum
        np.testing.assert_allclose(self.state.running_mean, lam * self.x.mean(axis=1))
        expected = (1.0 - lam) + lam / np.sqrt(self.x.var(axis=1) + self.state.epsilon)
        np.testing.assert_allclose(np.diagonal(self.state.running_whitening), expected)

    def test_inference_single_example(self):
        bn_forward(self.x, self.state)
        before = self.state.running_mean.copy()
        out = dbn_infer(self.x[:, :1], self.state)
        self.assertEqual(out.shape, (3, 1))
        np.testing.assert_array_equal(self.state.running_mean, before)

    def test_training_needs_two_examples(self):
        with self.assertRaises(InsufficientBatchError):
            bn_forward(self.x[:, :1], self.state)

    def test_bad_input(self):
        x = self.x.copy()
        x[1, 3] = np.inf
        with self.assertRaises(InvalidInputError):
            bn_forward(x, self.state)
        with self.assertRaises(ShapeError):
            bn_forward(self.x[:2], self.state)

    def test_constant_feature_without_epsilon(self):
        x = self.x.copy()
        x[0] = 1.0
        with self.assertRaises(NotPositiveDefiniteError):
            bn_forward(x, DbnState(3, mode='bn', epsilon=0.0))
        out, _ = bn_forward(x, self.state)
        np.testing.assert_array_equal(out[0], 0.0)

    def test_backends_agree(self):
        state = DbnState(3, mode='bn', affine=True)
        state.gamma[:] = [1.5, -0.5, 2.0]
        _, cache = bn_forward(self.x, state)
        grad = random_batch(3, 20, seed=5)
        simplified = bn_backward(grad, cache, state)
        chain = bn_backward(grad, cache, state, reference=True)
        np.testing.assert_allclose(simplified, chain, atol=1e-12)
        np.testing.assert_allclose(simplified.sum(axis=1), 0.0, atol=1e-10)

    def test_whitening_with_groups_of_one_is_batch_norm(self):
        bn_out, _ = bn_forward(self.x, DbnState(3, mode='bn'))
        for mode in ('zca', 'pca'):
            out, _ = dbn_forward(self.x, DbnState(3, group_size=1, mode=mode))
            np.testing.assert_allclose(out, bn_out, atol=1e-12)


if __name__ == '__main__':
    unittest.main()
