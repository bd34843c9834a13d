"""Neural bag-of-words dual encoder for code retrieval.

Both sides embed tokens, average and L2-normalize; training uses an in-batch
softmax over the B x B similarity matrix so every non-matching pair in the
batch serves as a negative.
"""

from __future__ import annotations

import numpy as np

from ..errors import BatchTooSmall, EmptyInput
from ..ncore import Parameter, ParameterSet, softmax, uniform_init

NORM_FLOOR = 1e-12


class NbowEncoder:
    def __init__(self, vocab_size: int, embed_dim: int, scale: float = 10.0, seed: int = 0):
        self.vocab_size = vocab_size
        self.embed_dim = embed_dim
        self.scale = scale
        rng = np.random.default_rng(seed)
        self.params = ParameterSet([
            Parameter("code_emb", uniform_init(rng, (vocab_size, embed_dim))),
            Parameter("query_emb", uniform_init(rng, (vocab_size, embed_dim))),
        ])

    def _table(self, side: str) -> np.ndarray:
        if side == "code":
            return self.params["code_emb"].value
        if side == "query":
            return self.params["query_emb"].value
        raise ValueError(f"side must be 'code' or 'query', got {side!r}")


def nbow_encode(tokens: list[int], side: str, enc: NbowEncoder) -> np.ndarray:
    """Unit-norm mean embedding; degenerate all-zero means map to e_0."""
    if not tokens:
        raise EmptyInput("nbow_encode needs at least one token")
    table = enc._table(side)
    mean = table[np.asarray(tokens)].mean(axis=0)
    norm = float(np.linalg.norm(mean))
    if norm < NORM_FLOOR:
        basis = np.zeros(enc.embed_dim)
        basis[0] = 1.0
        return basis
    return mean / norm


def _encode_with_cache(tokens: list[int], table: np.ndarray):
    mean = table[np.asarray(tokens)].mean(axis=0)
    norm = float(np.linalg.norm(mean))
    if norm < NORM_FLOOR:
        basis = np.zeros(table.shape[1])
        basis[0] = 1.0
        return basis, mean, norm, True
    return mean / norm, mean, norm, False


def _normalize_backward(unit: np.ndarray, norm: float, dunit: np.ndarray) -> np.ndarray:
    # d(v/||v||)/dv applied to dunit
    return (dunit - unit * float(unit @ dunit)) / norm


def retrieval_loss(code_vecs: np.ndarray, query_vecs: np.ndarray, scale: float = 10.0):
    """In-batch softmax loss over matched (query, code) rows.

    Returns (loss, dquery_vecs, dcode_vecs) for the mean-over-rows loss.
    """
    B = code_vecs.shape[0]
    if B < 2:
        raise BatchTooSmall("retrieval needs at least two pairs per batch")
    sims = scale * (query_vecs @ code_vecs.T)
    probs = softmax(sims)
    idx = np.arange(B)
    loss = float(-np.mean(np.log(probs[idx, idx])))
    dsims = probs.copy()
    dsims[idx, idx] -= 1.0
    dsims *= scale / B
    dquery = dsims @ code_vecs
    dcode = dsims.T @ query_vecs
    return loss, dquery, dcode


def retrieval_batch_grads(enc: NbowEncoder, code_rows: list[list[int]], query_rows: list[list[int]]):
    """Loss sum, pair count and embedding-gradient dict for one batch of pairs."""
    if len(code_rows) != len(query_rows):
        raise ValueError("code and query sides must pair up")
    B = len(code_rows)
    code_table = enc.params["code_emb"].value
    query_table = enc.params["query_emb"].value
    c_cache = [_encode_with_cache(r, code_table) for r in code_rows]
    q_cache = [_encode_with_cache(r, query_table) for r in query_rows]
    code_vecs = np.stack([c[0] for c in c_cache])
    query_vecs = np.stack([q[0] for q in q_cache])
    loss, dquery, dcode = retrieval_loss(code_vecs, query_vecs, enc.scale)

    grads = {
        "code_emb": np.zeros_like(code_table),
        "query_emb": np.zeros_like(query_table),
    }
    # grads of the summed loss (trainer divides by the total pair count)
    for i in range(B):
        unit, _, norm, degenerate = c_cache[i]
        if not degenerate:
            dmean = _normalize_backward(unit, norm, dcode[i]) * (B / len(code_rows[i]))
            np.add.at(grads["code_emb"], np.asarray(code_rows[i]), dmean)
        unit, _, norm, degenerate = q_cache[i]
        if not degenerate:
            dmean = _normalize_backward(unit, norm, dquery[i]) * (B / len(query_rows[i]))
            np.add.at(grads["query_emb"], np.asarray(query_rows[i]), dmean)
    return loss * B, B, grads
