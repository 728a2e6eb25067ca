import numpy as np

from whitenorm import WhiteNorm
from whitenorm.layers import mlp_spec
from whitenorm.states import DbnState
from whitenorm.training import TrainConfig
from whitenorm.logic.whiten_batch import dbn_forward, dbn_infer
from whitenorm.logic.whitening_backward import dbn_backward


# Creating a WhiteNorm defaults to:
# - a synthetic dataset of correlated Gaussians (16 features, 1000 examples)
# - writing every report into a local folder
# - you can change either by writing your own adapters, see whitenorm/adapters
wn = WhiteNorm(seed=0)
dataset, test = wn.get_dataset(test_size=200)
print(dataset.dim, dataset.size, test.size)
# >> 16 800 200

# Whiten one batch by hand: 16 features in groups of 4, ZCA
x = dataset.features[:, :64]
state = DbnState(16, group_size=4, mode='zca')
x_hat, cache = dbn_forward(x, state)
print(np.round(np.cov(x_hat[:4], bias=True), 3))
# >> close to the 4x4 identity

# Backward pass for some upstream gradient
grad = np.random.default_rng(0).normal(size=x_hat.shape)
grad_x = dbn_backward(grad, cache, state)
print(grad_x.shape, np.abs(grad_x.sum(axis=1)).max() < 1e-10)
# >> (16, 64) True

# Inference uses the running mean and whitening matrix, one example at a time if needed
state.eval()
print(dbn_infer(x[:, :1], state).shape)
# >> (16, 1)

# Train an MLP with DBN before every ReLU
spec = mlp_spec(dataset.dim, [32, 32], dataset.num_classes, norm={'kind': 'dbn', 'mode': 'zca', 'group_size': 8})
net, log = wn.train(spec, TrainConfig(lr=0.1, epochs=5, batch_size=64), dataset, test)
print(log[-1].train_loss, log[-1].test_acc)

# Check the gradients against finite differences
report = wn.gradcheck()
print(report['passed'], report['max_error'])
# >> True, with every relative error below the 1e-5 tolerance
