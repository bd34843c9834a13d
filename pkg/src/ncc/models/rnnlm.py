"""Recurrent (Elman tanh) language model with truncated BPTT.

Gradients are computed sequence by sequence; per-row gradient dictionaries
let the trainer reduce contributions in a fixed order, which keeps
multi-worker and accumulated-gradient runs bit-identical.
"""

from __future__ import annotations

import numpy as np

from ..corpus import MiniBatch
from ..errors import ShapeMismatch
from ..ncore import Parameter, ParameterSet, rnn_step, rnn_step_backward, softmax, softmax_xent, uniform_init


class RnnLm:
    def __init__(self, vocab_size: int, embed_dim: int, hidden_dim: int,
                 bptt_len: int = 16, seed: int = 0):
        self.vocab_size = vocab_size
        self.embed_dim = embed_dim
        self.hidden_dim = hidden_dim
        self.bptt_len = bptt_len
        rng = np.random.default_rng(seed)
        self.params = ParameterSet([
            Parameter("emb", uniform_init(rng, (vocab_size, embed_dim))),
            Parameter("w_xh", uniform_init(rng, (embed_dim, hidden_dim))),
            Parameter("w_hh", uniform_init(rng, (hidden_dim, hidden_dim))),
            Parameter("b_h", np.zeros(hidden_dim)),
            Parameter("w_hy", uniform_init(rng, (hidden_dim, vocab_size))),
            Parameter("b_y", np.zeros(vocab_size)),
        ])

    def hidden_states(self, ids: list[int]) -> list[np.ndarray]:
        """Hidden state after consuming each prefix of ``ids``."""
        p = self.params
        h = np.zeros(self.hidden_dim)
        states = []
        for tok in ids:
            h = rnn_step(p["emb"].value[tok], h, p["w_xh"].value, p["w_hh"].value, p["b_h"].value)
            states.append(h)
        return states

    def next_dist(self, prefix: list[int]) -> np.ndarray:
        """P(. | prefix); an empty prefix predicts from the zero hidden state."""
        p = self.params
        if prefix:
            h = self.hidden_states(prefix)[-1]
        else:
            h = np.zeros(self.hidden_dim)
        return softmax(h @ p["w_hy"].value + p["b_y"].value)


def rnnlm_row_grads(model: RnnLm, ids: np.ndarray, length: int):
    """Loss sum, target count and gradient dict for one padded row.

    Targets are the inputs shifted left by one; positions at or beyond the
    true length contribute nothing.  BPTT is truncated to ``model.bptt_len``:
    gradient does not flow across window boundaries, though hidden state does.
    """
    p = model.params
    emb, w_xh, w_hh, b_h = p["emb"].value, p["w_xh"].value, p["w_hh"].value, p["b_h"].value
    w_hy, b_y = p["w_hy"].value, p["b_y"].value

    n_steps = length - 1  # predictions at t = 0..length-2
    grads = {name: np.zeros_like(p[name].value) for name in p.names()}
    if n_steps <= 0:
        return 0.0, 0, grads

    hs = []
    h = np.zeros(model.hidden_dim)
    loss_sum = 0.0
    dlogits = []
    for t in range(n_steps):
        h = rnn_step(emb[ids[t]], h, w_xh, w_hh, b_h)
        hs.append(h)
        loss, dl = softmax_xent(h @ w_hy + b_y, int(ids[t + 1]))
        loss_sum += loss
        dlogits.append(dl)

    window = max(1, model.bptt_len)
    for start in range(0, n_steps, window):
        end = min(start + window, n_steps)
        dh_next = np.zeros(model.hidden_dim)
        for t in range(end - 1, start - 1, -1):
            dl = dlogits[t]
            grads["w_hy"] += np.outer(hs[t], dl)
            grads["b_y"] += dl
            dh = dl @ w_hy.T + dh_next
            h_prev = hs[t - 1] if t > 0 else np.zeros(model.hidden_dim)
            dx, dh_next, dW_xh, dW_hh, db = rnn_step_backward(
                emb[ids[t]], h_prev, hs[t], w_xh, w_hh, dh)
            grads["w_xh"] += dW_xh
            grads["w_hh"] += dW_hh
            grads["b_h"] += db
            grads["emb"][ids[t]] += dx
    return loss_sum, n_steps, grads


def rnnlm_loss(model: RnnLm, batch: MiniBatch) -> float:
    """Mean token loss over the batch; leaves the mean's gradient in params."""
    if batch.ids.ndim != 2:
        raise ShapeMismatch("batch ids must be a B x T matrix")
    total_loss = 0.0
    total_count = 0
    acc = {name: np.zeros_like(model.params[name].value) for name in model.params.names()}
    for b in range(batch.batch_size):
        loss, count, grads = rnnlm_row_grads(model, batch.ids[b], int(batch.lengths[b]))
        total_loss += loss
        total_count += count
        for name, g in grads.items():
            acc[name] += g
    if total_count == 0:
        model.params.zero_grads()
        return 0.0
    model.params.set_grads({name: g / total_count for name, g in acc.items()})
    return total_loss / total_count
