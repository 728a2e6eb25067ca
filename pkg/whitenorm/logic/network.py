"""

    Building, running and differentiating a NetworkState.

    net_forward(net, X, labels, training=True) keeps the per-layer caches on the network;
    net_backward(net, caches) consumes them. Caches are good for exactly one backward pass.

"""
import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ..errors import ShapeError, StaleCacheError
from ..layers import NetworkSpec, NetworkState, SoftmaxNllLayer, layer_factory
from ..seeds import stream

logger = logging.getLogger(__name__)

BACKENDS = ('simplified', 'reference')


@dataclass
class Gradients:
    params: Dict[str, np.ndarray] = field(default_factory=dict)
    inputs: np.ndarray = None


def init_params(spec: NetworkSpec, seed: int) -> NetworkState:
    if spec.input_dim is None or spec.input_dim < 1:
        raise ShapeError('logic.init_params: input_dim must be >= 1, got {}'.format(spec.input_dim))
    if not spec.layers or spec.layers[-1].kind != 'softmax_nll':
        raise ShapeError('logic.init_params: the last layer must be softmax_nll')
    if spec.backend not in BACKENDS:
        raise ValueError('logic.init_params: backend must be one of {}, got {!r}'.format(BACKENDS, spec.backend))

    rng = stream(seed, 'net.init')
    layers = []
    dim = int(spec.input_dim)
    for index, layer_spec in enumerate(spec.layers):
        if layer_spec.kind == 'softmax_nll' and index != len(spec.layers) - 1:
            raise ShapeError('logic.init_params: softmax_nll may only be the last layer')
        layer = layer_factory(layer_spec, dim, rng, backend=spec.backend)
        layers.append(layer)
        dim = layer.out_dim

    if dim != spec.num_classes:
        raise ShapeError('logic.init_params: network emits {} logits for {} classes'.format(dim, spec.num_classes))

    logger.debug('init_params: %d layers, %d parameters', len(layers),
                 sum(v.size for _, v in NetworkState(spec, layers).named_parameters()))
    return NetworkState(spec, layers)


def _check_input(net: NetworkState, x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != net.spec.input_dim:
        raise ShapeError('logic.net_forward: expected a {} x m batch, got shape {}'.format(
            net.spec.input_dim, x.shape))
    return x


def net_logits(net: NetworkState, x, training: bool = False):
    """Run every layer but the loss. Returns (logits, caches); caches is None in inference."""
    x = _check_input(net, x)
    caches = [] if training else None
    for layer in net.layers[:-1]:
        x, cache = layer.forward(x, training)
        if training:
            caches.append(cache)
    return x, caches


def net_forward(net: NetworkState, x, labels, training: bool = True):
    """Mean negative log-likelihood of the batch. Returns (loss, caches)."""
    if training:
        net.caches = None
    logits, caches = net_logits(net, x, training)
    loss_layer: SoftmaxNllLayer = net.loss_layer
    loss, _, loss_cache = loss_layer.loss(logits, labels, training)
    if training:
        caches.append(loss_cache)
        net.caches = caches
    return loss, caches


def net_backward(net: NetworkState, caches=None) -> Gradients:
    if net.caches is None:
        raise StaleCacheError('logic.net_backward: no training forward pass is waiting for its backward pass')
    if caches is not None and caches is not net.caches:
        raise StaleCacheError('logic.net_backward: caches do not belong to the latest forward pass')
    caches = net.caches
    net.caches = None

    grads = Gradients()
    grad = None
    for index in range(len(net.layers) - 1, -1, -1):
        grad, layer_grads = net.layers[index].backward(grad, caches[index])
        for name, value in layer_grads.items():
            grads.params['{}.{}'.format(index, name)] = value
    grads.inputs = grad
    return grads


def evaluate(net: NetworkState, x, labels):
    """(loss, accuracy) with inference-mode normalization; running statistics are left alone."""
    logits, _ = net_logits(net, x, training=False)
    loss, probabilities, _ = net.loss_layer.loss(logits, labels, training=False)
    return loss, accuracy(probabilities, labels)


def accuracy(probabilities: np.ndarray, labels) -> float:
    labels = np.asarray(labels)
    if labels.size == 0:
        return float('nan')
    return float(np.mean(np.argmax(probabilities, axis=0) == labels))


def predict(net: NetworkState, x) -> np.ndarray:
    logits, _ = net_logits(net, x, training=False)
    return np.argmax(logits, axis=0)
