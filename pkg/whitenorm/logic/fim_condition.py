"""

    Conditioning of the empirical Fisher information of one linear layer's weights:

        F = (1/n) sum_i g_i g_i^T,   g_i = vec(delta_i a_i^T)

    where a_i is the layer input and delta_i the gradient of -log p(y_i | x_i) at the layer output
    for example i. Gradients are taken with inference-mode normalization so examples stay
    independent of each other.

    Softmax is invariant to adding a constant to all logits, so for the layer that produces the
    logits every delta_i sums to zero and F is singular along that direction. That layer is
    measured in the reduced parametrization that pins the last class (its row is dropped).

"""
import logging

import numpy as np

from ..errors import FisherCapError, InvalidInputError
from ..layers import LinearLayer
from ..linalg import condition_number

logger = logging.getLogger(__name__)

MAX_PARAMETERS = 2000
# above this size the Jacobi solver is too slow for a training-time diagnostic
JACOBI_LIMIT = 64


def per_example_terms(net, x, labels, layer_index: int):
    """(a, delta): inputs (fan_in x n) and output gradients (fan_out x n) of the layer, per example."""
    layers = net.layers
    inputs = []
    h = np.asarray(x, dtype=np.float64)
    for layer in layers[:-1]:
        inputs.append(h)
        h, _ = layer.forward(h, False)

    n = h.shape[1]
    labels = net.loss_layer.check_labels(labels, n)
    _, probabilities, _ = net.loss_layer.loss(h, labels, training=False)
    delta = probabilities.copy()
    delta[labels, np.arange(n)] -= 1.0

    for index in range(len(layers) - 2, layer_index, -1):
        delta = layers[index].infer_backward(delta, inputs[index])
    return inputs[layer_index], delta


def fisher_matrix(net, x, labels, layer_index: int, max_params: int = MAX_PARAMETERS) -> np.ndarray:
    layer = net.layers[layer_index] if 0 <= layer_index < len(net.layers) else None
    if not isinstance(layer, LinearLayer):
        raise InvalidInputError('logic.fisher_matrix: layer {} is not a linear layer'.format(layer_index))

    reduced = layer_index == len(net.layers) - 2
    rows = layer.out_dim - 1 if reduced else layer.out_dim
    count = rows * layer.in_dim
    if count > max_params:
        raise FisherCapError('logic.fisher_matrix: {} weights exceed the cap of {}'.format(count, max_params))
    if count < 1:
        raise InvalidInputError('logic.fisher_matrix: layer {} has no free weights'.format(layer_index))

    a, delta = per_example_terms(net, x, labels, layer_index)
    if reduced:
        delta = delta[:-1, :]
    n = a.shape[1]
    # column i is vec(delta_i a_i^T), row-major over (out, in)
    g = (delta[:, None, :] * a[None, :, :]).reshape(count, n)
    f = g @ g.T / n
    return 0.5 * (f + f.T)


def fim_condition(net, dataset, layer_index: int, max_params: int = MAX_PARAMETERS, method: str = None) -> float:
    """Condition number of the layer's empirical Fisher; inf when it is singular."""
    f = fisher_matrix(net, dataset.features, dataset.labels, layer_index, max_params)
    if method is None:
        method = 'jacobi' if f.shape[0] <= JACOBI_LIMIT else 'lapack'
    kappa = condition_number(f, method=method)
    logger.debug('fim_condition: layer %d, %d weights, kappa %.4g', layer_index, f.shape[0], kappa)
    return kappa
