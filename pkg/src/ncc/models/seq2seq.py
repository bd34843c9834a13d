"""Tiny encoder-decoder for code comment generation.

Both sides are single-layer Elman cells; the decoder starts from the final
encoder state and is trained with teacher forcing.  Decoding is greedy.
"""

from __future__ import annotations

import numpy as np

from ..corpus import BOS, EOS
from ..errors import EmptyInput, ShapeMismatch
from ..ncore import Parameter, ParameterSet, rnn_step, rnn_step_backward, softmax_xent, uniform_init


class Seq2Seq:
    def __init__(self, src_vocab: int, tgt_vocab: int, embed_dim: int, hidden_dim: int,
                 max_decode_len: int = 32, seed: int = 0):
        self.src_vocab = src_vocab
        self.tgt_vocab = tgt_vocab
        self.embed_dim = embed_dim
        self.hidden_dim = hidden_dim
        self.max_decode_len = max_decode_len
        rng = np.random.default_rng(seed)
        self.params = ParameterSet([
            Parameter("src_emb", uniform_init(rng, (src_vocab, embed_dim))),
            Parameter("enc_w_xh", uniform_init(rng, (embed_dim, hidden_dim))),
            Parameter("enc_w_hh", uniform_init(rng, (hidden_dim, hidden_dim))),
            Parameter("enc_b_h", np.zeros(hidden_dim)),
            Parameter("tgt_emb", uniform_init(rng, (tgt_vocab, embed_dim))),
            Parameter("dec_w_xh", uniform_init(rng, (embed_dim, hidden_dim))),
            Parameter("dec_w_hh", uniform_init(rng, (hidden_dim, hidden_dim))),
            Parameter("dec_b_h", np.zeros(hidden_dim)),
            Parameter("w_hy", uniform_init(rng, (hidden_dim, tgt_vocab))),
            Parameter("b_y", np.zeros(tgt_vocab)),
        ])

    def encode(self, src: list[int]) -> list[np.ndarray]:
        p = self.params
        h = np.zeros(self.hidden_dim)
        states = []
        for tok in src:
            h = rnn_step(p["src_emb"].value[tok], h,
                         p["enc_w_xh"].value, p["enc_w_hh"].value, p["enc_b_h"].value)
            states.append(h)
        return states


def seq2seq_row_grads(model: Seq2Seq, src: list[int], tgt: list[int]):
    """Loss sum, target count and gradient dict for one (src, wrapped tgt) pair."""
    if not src:
        raise EmptyInput("seq2seq needs a non-empty source sequence")
    if len(tgt) < 2:
        raise ShapeMismatch("target must be wrapped with bos/eos (length >= 2)")
    p = model.params
    grads = {name: np.zeros_like(p[name].value) for name in p.names()}

    enc_states = model.encode(src)
    h = enc_states[-1]

    dec_in = tgt[:-1]
    targets = tgt[1:]
    n = len(targets)
    dec_states = []
    dlogits = []
    loss_sum = 0.0
    for t, tok in enumerate(dec_in):
        h = rnn_step(p["tgt_emb"].value[tok], h,
                     p["dec_w_xh"].value, p["dec_w_hh"].value, p["dec_b_h"].value)
        dec_states.append(h)
        loss, dl = softmax_xent(h @ p["w_hy"].value + p["b_y"].value, targets[t])
        loss_sum += loss
        dlogits.append(dl)

    # decoder backward
    dh_next = np.zeros(model.hidden_dim)
    for t in range(n - 1, -1, -1):
        dl = dlogits[t]
        grads["w_hy"] += np.outer(dec_states[t], dl)
        grads["b_y"] += dl
        dh = dl @ p["w_hy"].value.T + dh_next
        h_prev = dec_states[t - 1] if t > 0 else enc_states[-1]
        dx, dh_next, dW_xh, dW_hh, db = rnn_step_backward(
            p["tgt_emb"].value[dec_in[t]], h_prev, dec_states[t],
            p["dec_w_xh"].value, p["dec_w_hh"].value, dh)
        grads["dec_w_xh"] += dW_xh
        grads["dec_w_hh"] += dW_hh
        grads["dec_b_h"] += db
        grads["tgt_emb"][dec_in[t]] += dx

    # encoder backward; dh_next now carries the gradient on the final state
    for t in range(len(src) - 1, -1, -1):
        h_prev = enc_states[t - 1] if t > 0 else np.zeros(model.hidden_dim)
        dx, dh_next, dW_xh, dW_hh, db = rnn_step_backward(
            p["src_emb"].value[src[t]], h_prev, enc_states[t],
            p["enc_w_xh"].value, p["enc_w_hh"].value, dh_next)
        grads["enc_w_xh"] += dW_xh
        grads["enc_w_hh"] += dW_hh
        grads["enc_b_h"] += db
        grads["src_emb"][src[t]] += dx

    return loss_sum, n, grads


def seq2seq_loss(model: Seq2Seq, src: list[int], tgt: list[int]) -> float:
    """Mean cross-entropy over target positions; leaves grads in params."""
    loss_sum, n, grads = seq2seq_row_grads(model, src, tgt)
    model.params.set_grads({name: g / n for name, g in grads.items()})
    return loss_sum / n


def seq2seq_greedy_decode(model: Seq2Seq, src: list[int]) -> list[int]:
    """Greedy argmax decoding; output excludes bos/eos."""
    if not src:
        raise EmptyInput("seq2seq needs a non-empty source sequence")
    p = model.params
    h = model.encode(src)[-1]
    out: list[int] = []
    tok = BOS
    for _ in range(model.max_decode_len):
        h = rnn_step(p["tgt_emb"].value[tok], h,
                     p["dec_w_xh"].value, p["dec_w_hh"].value, p["dec_b_h"].value)
        logits = h @ p["w_hy"].value + p["b_y"].value
        tok = int(np.argmax(logits))  # argmax takes the smallest id on ties
        if tok == EOS:
            break
        out.append(tok)
    return out
