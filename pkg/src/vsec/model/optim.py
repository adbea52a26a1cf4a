"""Adam with bias correction, updating parameters in place."""

import numpy as np


class AdamState:
    def __init__(self, params, beta1=0.9, beta2=0.999, eps=1e-8):
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {n: np.zeros_like(params.tensors[n]) for n in params.names}
        self.v = {n: np.zeros_like(params.tensors[n]) for n in params.names}


def adam_step(params, grads, state, lr):
    state.t += 1
    b1, b2 = state.beta1, state.beta2
    c1 = 1.0 - b1 ** state.t
    c2 = 1.0 - b2 ** state.t
    for name in params.names:
        g = grads[name]
        m = state.m[name]
        v = state.v[name]
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * np.square(g)
        params.tensors[name] -= (lr * (m / c1)
                                 / (np.sqrt(v / c2) + state.eps)).astype(
                                     params.tensors[name].dtype)
