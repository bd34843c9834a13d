"""Optimizers and gradient clipping."""

from __future__ import annotations

import math

import numpy as np

from .tensor import ParameterSet


class AdamState:
    """Per-parameter first/second moment buffers plus the shared step count."""

    def __init__(self, params: ParameterSet, lr: float = 1e-3,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {p.name: np.zeros_like(p.value) for p in params}
        self.v = {p.name: np.zeros_like(p.value) for p in params}


def adam_update(params: ParameterSet, state: AdamState, lr: float | None = None) -> None:
    """Standard Adam with bias correction; zeroes grads afterwards."""
    state.t += 1
    step_lr = state.lr if lr is None else lr
    bc1 = 1.0 - state.beta1 ** state.t
    bc2 = 1.0 - state.beta2 ** state.t
    for p in params:
        m = state.m[p.name]
        v = state.v[p.name]
        m *= state.beta1
        m += (1.0 - state.beta1) * p.grad
        v *= state.beta2
        v += (1.0 - state.beta2) * p.grad * p.grad
        m_hat = m / bc1
        v_hat = v / bc2
        p.value -= step_lr * m_hat / (np.sqrt(v_hat) + state.eps)
        p.zero_grad()


def sgd_update(params: ParameterSet, lr: float) -> None:
    for p in params:
        p.value -= lr * p.grad
        p.zero_grad()


def clip_grad_norm(params: ParameterSet, max_norm: float) -> float:
    """Scale all grads so their global L2 norm is at most ``max_norm``.

    Returns the pre-clip norm."""
    total = 0.0
    for p in params:
        total += float(np.sum(p.grad * p.grad))
    norm = math.sqrt(total)
    if max_norm > 0 and norm > max_norm:
        scale = max_norm / norm
        for p in params:
            p.grad *= scale
    return norm
