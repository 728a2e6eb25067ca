import unittest

import numpy as np

from ..errors import InvalidGroupError, ShapeError
from ..logic.group_features import group_bounds, group_split, group_merge
from ..logic.trelu import trelu_forward, trelu_backward
from ..logic.unroll_conv import unroll_conv, roll_conv
from ..logic.whiten_batch import dbn_forward
from ..linalg import covariance
from ..states import DbnState


class TestGroupFeatures(unittest.TestCase):

    def test_bounds(self):
        self.assertEqual(group_bounds(6, 2), [(0, 2), (2, 4), (4, 6)])
        self.assertEqual(group_bounds(5, 2), [(0, 2), (2, 4), (4, 5)])
        self.assertEqual(group_bounds(3, 3), [(0, 3)])
        self.assertEqual(group_bounds(3, 1), [(0, 1), (1, 2), (2, 3)])

    def test_invalid_sizes(self):
        for size in (0, 4, None):
            with self.assertRaises(InvalidGroupError):
                group_bounds(3, size)

    def test_split_merge(self):
        x = np.arange(20.0).reshape(5, 4)
        blocks = group_split(x, 2)
        self.assertEqual([b.shape for b in blocks], [(2, 4), (2, 4), (1, 4)])
        np.testing.assert_array_equal(group_merge(blocks), x)
        with self.assertRaises(ShapeError):
            group_merge([np.ones((2, 3)), np.ones((1, 4))])
        with self.assertRaises(InvalidGroupError):
            group_merge([])


class TestTRelu(unittest.TestCase):

    def setUp(self):
        self.x = np.array([[-1.0, 0.5, 2.0], [-3.0, -0.5, 1.0]])

    def test_forward(self):
        np.testing.assert_array_equal(trelu_forward(self.x, 0.0), np.maximum(self.x, 0.0))
        np.testing.assert_array_equal(trelu_forward(self.x, [1.0, -1.0]), [[1.0, 1.0, 2.0], [-1.0, -0.5, 1.0]])

    def test_backward(self):
        grad = np.ones_like(self.x)
        dx, dt = trelu_backward(grad, self.x, [1.0, -1.0])
        np.testing.assert_array_equal(dx, [[0.0, 0.0, 1.0], [0.0, 1.0, 1.0]])
        np.testing.assert_array_equal(dt, [2.0, 1.0])

    def test_threshold_count_checked(self):
        with self.assertRaises(ShapeError):
            trelu_forward(self.x, [0.0, 0.0, 0.0])


class TestUnrollConv(unittest.TestCase):

    def setUp(self):
        self.x4 = np.random.default_rng(0).normal(size=(3, 2, 4, 5))

    def test_layout(self):
        x = unroll_conv(self.x4)
        self.assertEqual(x.shape, (2, 60))
        np.testing.assert_array_equal(x[1, :20], self.x4[0, 1].reshape(-1))
        np.testing.assert_array_equal(roll_conv(x, 3, 4, 5), self.x4)

    def test_bad_shapes(self):
        with self.assertRaises(ShapeError):
            unroll_conv(np.ones((2, 3, 4)))
        with self.assertRaises(ShapeError):
            roll_conv(np.ones((2, 10)), 3, 2, 2)

    def test_whitens_channels(self):
        mixed = np.einsum('cd,mdhw->mchw', np.array([[1.0, 0.0], [0.9, 0.3]]), self.x4)
        out, _ = dbn_forward(unroll_conv(mixed), DbnState(2, epsilon=0.0))
        np.testing.assert_allclose(covariance(out), np.eye(2), atol=1e-10)
        self.assertEqual(roll_conv(out, 3, 4, 5).shape, mixed.shape)


if __name__ == '__main__':
    unittest.main()
