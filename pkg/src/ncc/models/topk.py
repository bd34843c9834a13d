"""Top-k next-token ranking shared by the completion models."""

from __future__ import annotations

import numpy as np

from .ngram import NgramModel, ngram_next_dist
from .rnnlm import RnnLm


def next_token_dist(model, prefix: list[int]) -> np.ndarray:
    if isinstance(model, NgramModel):
        return ngram_next_dist(model, prefix)
    if isinstance(model, RnnLm):
        return model.next_dist(prefix)
    raise TypeError(f"no next-token distribution for {type(model).__name__}")


def lm_topk(model, prefix: list[int], k: int) -> list[tuple[int, float]]:
    """Top-k (token id, probability) pairs, descending; ties go to smaller ids."""
    if k < 1:
        raise ValueError("k must be >= 1")
    dist = next_token_dist(model, prefix)
    # stable sort on descending prob keeps the smaller id first among ties
    order = np.argsort(-dist, kind="stable")[:k]
    return [(int(i), float(dist[i])) for i in order]
