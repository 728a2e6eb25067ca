"""

    Layers of a small feed-forward network with hand-written backward passes.

    Every layer is a pair of functions over explicit caches:
        forward(x, training) -> (out, cache)
        backward(grad_out, cache) -> (grad_in, {param_name: grad})
    Parameters live on the layer (or on its DbnState) and are updated in place by the optimizer.

    Use layer_factory() to build a layer from a LayerSpec.

"""
from dataclasses import dataclass, field, asdict
from typing import List, Optional

import numpy as np
from scipy.special import logsumexp, softmax

from .errors import ShapeError, LabelError
from .states import DbnState, ForwardCache
from .logic.output_stage import output_stage_forward, output_stage_backward
from .logic.trelu import trelu_forward, trelu_backward
from .logic.whiten_batch import normalize, running_whiten
from .logic.whitening_backward import dbn_backward
from .logic.whitening_backward_reference import dbn_backward_reference

LAYER_KINDS = ('linear', 'relu', 'trelu', 'bn', 'dbn', 'softmax_nll')


@dataclass
class LayerSpec:
    kind: str
    out_features: Optional[int] = None
    mode: str = 'zca'
    group_size: Optional[int] = None
    affine: Optional[bool] = None
    thresholds: bool = False
    epsilon: Optional[float] = None
    momentum: Optional[float] = None
    eigensolver: str = 'jacobi'
    clamp_degenerate: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class NetworkSpec:
    input_dim: int
    num_classes: int
    layers: List[LayerSpec] = field(default_factory=list)
    backend: str = 'simplified'


def mlp_spec(input_dim: int, hidden: List[int], num_classes: int, norm: Optional[dict] = None,
             activation: str = 'relu') -> NetworkSpec:
    """
    linear -> [norm] -> activation for every hidden width, then linear -> softmax_nll.
    norm is None for the plain network, or LayerSpec keyword arguments such as
    {'kind': 'dbn', 'mode': 'zca', 'group_size': 16}.
    """
    layers = []
    for width in hidden:
        layers.append(LayerSpec(kind='linear', out_features=width))
        if norm is not None:
            layers.append(LayerSpec(**norm))
        layers.append(LayerSpec(kind=activation))
    layers.append(LayerSpec(kind='linear', out_features=num_classes))
    layers.append(LayerSpec(kind='softmax_nll'))
    return NetworkSpec(input_dim=input_dim, num_classes=num_classes, layers=layers)


class Layer:
    kind = 'layer'

    def __init__(self, dim: int):
        self.in_dim = dim
        self.out_dim = dim

    def parameters(self) -> dict:
        return {}

    def forward(self, x: np.ndarray, training: bool):
        raise NotImplementedError('Layer.forward: subclass me!')

    def backward(self, grad_out: np.ndarray, cache):
        raise NotImplementedError('Layer.backward: subclass me!')

    def infer_backward(self, grad_out: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Gradient w.r.t. the input of the inference-mode map at x, which is applied per example."""
        raise NotImplementedError('Layer.infer_backward: subclass me!')


class LinearLayer(Layer):
    kind = 'linear'

    def __init__(self, in_features: int, out_features: int, rng: np.random.Generator):
        super().__init__(in_features)
        self.out_dim = out_features
        # LeCun: Normal(0, 1 / fan_in)
        self.weight = rng.normal(0.0, 1.0 / np.sqrt(in_features), size=(out_features, in_features))
        self.bias = np.zeros(out_features)

    def parameters(self) -> dict:
        return {'weight': self.weight, 'bias': self.bias}

    def forward(self, x, training):
        out = self.weight @ x + self.bias[:, None]
        return out, (x if training else None)

    def backward(self, grad_out, cache):
        x = cache
        grads = {'weight': grad_out @ x.T, 'bias': grad_out.sum(axis=1)}
        return self.weight.T @ grad_out, grads

    def infer_backward(self, grad_out, x):
        return self.weight.T @ grad_out


class ReluLayer(Layer):
    kind = 'relu'

    def forward(self, x, training):
        passes = x > 0.0
        return np.where(passes, x, 0.0), (passes if training else None)

    def backward(self, grad_out, cache):
        return np.where(cache, grad_out, 0.0), {}

    def infer_backward(self, grad_out, x):
        return np.where(x > 0.0, grad_out, 0.0)


class TReluLayer(Layer):
    kind = 'trelu'

    def __init__(self, dim: int):
        super().__init__(dim)
        self.thresholds = np.zeros(dim)

    def parameters(self) -> dict:
        return {'thresholds': self.thresholds}

    def forward(self, x, training):
        return trelu_forward(x, self.thresholds), (x if training else None)

    def backward(self, grad_out, cache):
        dx, dt = trelu_backward(grad_out, cache, self.thresholds)
        return dx, {'thresholds': dt}

    def infer_backward(self, grad_out, x):
        return trelu_backward(grad_out, x, self.thresholds)[0]


class NormLayer(Layer):
    """BN or DBN. Batch statistics in training, running statistics in inference."""

    def __init__(self, state: DbnState, backend: str = 'simplified'):
        super().__init__(state.dim)
        self.state = state
        self.kind = 'bn' if state.mode == 'bn' else 'dbn'
        self.backend = backend

    def parameters(self) -> dict:
        return self.state.parameters()

    def forward(self, x, training):
        if training:
            self.state.train()
        else:
            self.state.eval()
        return normalize(x, self.state)

    def backward(self, grad_out, cache):
        if self.backend == 'reference':
            grad_in = dbn_backward_reference(grad_out, cache, self.state)
        else:
            grad_in = dbn_backward(grad_out, cache, self.state)
        return grad_in, dict(cache.param_grads)

    def infer_backward(self, grad_out, x):
        state = self.state
        cache = ForwardCache(batch_size=x.shape[1])
        output_stage_forward(running_whiten(x, state), state, cache)
        return state.running_whitening.T @ output_stage_backward(grad_out, cache, state)


class SoftmaxNllLayer(Layer):
    """Fused softmax + mean negative log-likelihood over the batch."""
    kind = 'softmax_nll'

    def check_labels(self, labels, m: int) -> np.ndarray:
        labels = np.asarray(labels)
        if labels.ndim != 1 or labels.shape[0] != m:
            raise ShapeError('SoftmaxNllLayer: expected {} labels, got shape {}'.format(m, labels.shape))
        if labels.size and (not np.issubdtype(labels.dtype, np.integer)
                            or labels.min() < 0 or labels.max() >= self.in_dim):
            raise LabelError('SoftmaxNllLayer: labels must be integers in [0, {})'.format(self.in_dim))
        return labels.astype(np.intp)

    def loss(self, logits, labels, training):
        m = logits.shape[1]
        labels = self.check_labels(labels, m)
        columns = np.arange(m)
        nll = logsumexp(logits, axis=0) - logits[labels, columns]
        loss = float(np.mean(nll))
        probabilities = softmax(logits, axis=0)
        return loss, probabilities, ((probabilities, labels) if training else None)

    def backward(self, grad_out, cache):
        probabilities, labels = cache
        m = probabilities.shape[1]
        grad = probabilities.copy()
        grad[labels, np.arange(m)] -= 1.0
        return grad / m, {}


def layer_factory(spec: LayerSpec, in_dim: int, rng: np.random.Generator, backend: str = 'simplified') -> Layer:
    kind = (spec.kind or '').lower()

    if kind == 'linear':
        if spec.out_features is None or spec.out_features < 1 or in_dim < 1:
            raise ShapeError('layer_factory: linear layer needs positive sizes, got {} -> {}'.format(
                in_dim, spec.out_features))
        return LinearLayer(in_dim, int(spec.out_features), rng)

    if kind == 'relu':
        return ReluLayer(in_dim)

    if kind == 'trelu':
        return TReluLayer(in_dim)

    if kind in ('bn', 'dbn'):
        affine = spec.affine if spec.affine is not None else (kind == 'bn')
        state = DbnState(dim=in_dim, group_size=spec.group_size, mode='bn' if kind == 'bn' else spec.mode,
                         epsilon=spec.epsilon, momentum=spec.momentum, affine=affine, thresholds=spec.thresholds,
                         clamp_degenerate=spec.clamp_degenerate, eigensolver=spec.eigensolver)
        return NormLayer(state, backend=backend)

    if kind == 'softmax_nll':
        return SoftmaxNllLayer(in_dim)

    raise ValueError('layer_factory: unknown layer kind {!r}, expected one of {}'.format(spec.kind, LAYER_KINDS))


class NetworkState:

    def __init__(self, spec: NetworkSpec, layers: List[Layer]):
        self.spec = spec
        self.layers = layers
        # set by a training forward, consumed by the matching backward
        self.caches = None

    @property
    def loss_layer(self) -> SoftmaxNllLayer:
        return self.layers[-1]

    def named_parameters(self):
        """[(key, array)] in a fixed order; keys look like '3.weight'."""
        out = []
        for index, layer in enumerate(self.layers):
            for name, value in layer.parameters().items():
                out.append(('{}.{}'.format(index, name), value))
        return out

    def norm_states(self) -> List[DbnState]:
        return [layer.state for layer in self.layers if isinstance(layer, NormLayer)]
