"""Layer primitives with explicit forward/backward passes (float64)."""

from __future__ import annotations

import numpy as np

from ..errors import ShapeMismatch, TargetOutOfRange


def embedding_lookup(table: np.ndarray, token_id: int) -> np.ndarray:
    return table[token_id]


def affine(x: np.ndarray, W: np.ndarray, b: np.ndarray) -> np.ndarray:
    """y = x @ W + b for a single vector x."""
    if x.shape[0] != W.shape[0]:
        raise ShapeMismatch(f"affine: x has dim {x.shape[0]}, W expects {W.shape[0]}")
    return x @ W + b


def affine_backward(x: np.ndarray, W: np.ndarray, dy: np.ndarray):
    """Returns (dx, dW, db) for y = x @ W + b."""
    dx = dy @ W.T
    dW = np.outer(x, dy)
    db = dy.copy()
    return dx, dW, db


def rnn_step(x_t: np.ndarray, h_prev: np.ndarray, W_xh: np.ndarray, W_hh: np.ndarray, b_h: np.ndarray) -> np.ndarray:
    """Elman cell: h_t = tanh(x_t @ W_xh + h_prev @ W_hh + b_h)."""
    if x_t.shape[0] != W_xh.shape[0] or h_prev.shape[0] != W_hh.shape[0]:
        raise ShapeMismatch(
            f"rnn_step: x dim {x_t.shape[0]} vs W_xh {W_xh.shape}, h dim {h_prev.shape[0]} vs W_hh {W_hh.shape}"
        )
    return np.tanh(x_t @ W_xh + h_prev @ W_hh + b_h)


def rnn_step_backward(x_t, h_prev, h_t, W_xh, W_hh, dh_t):
    """Backward through one Elman step.

    Returns (dx_t, dh_prev, dW_xh, dW_hh, db_h) given the upstream gradient
    dh_t on the step output h_t.
    """
    da = dh_t * (1.0 - h_t * h_t)
    dx_t = da @ W_xh.T
    dh_prev = da @ W_hh.T
    dW_xh = np.outer(x_t, da)
    dW_hh = np.outer(h_prev, da)
    return dx_t, dh_prev, dW_xh, dW_hh, da


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def softmax_xent(logits: np.ndarray, target: int) -> tuple[float, np.ndarray]:
    """Cross-entropy of softmax(logits) against a target id.

    Returns (loss, dlogits) with dlogits = softmax(logits) - onehot(target);
    max-subtraction keeps the exponentials in range.
    """
    V = logits.shape[0]
    if not 0 <= target < V:
        raise TargetOutOfRange(f"target {target} outside [0, {V})")
    shifted = logits - logits.max()
    logZ = np.log(np.exp(shifted).sum())
    loss = float(logZ - shifted[target])
    grad = softmax(logits)
    grad[target] -= 1.0
    return loss, grad
