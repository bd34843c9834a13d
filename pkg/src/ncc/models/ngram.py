"""Count-based n-gram language model with Jelinek-Mercer interpolation.

The next-token distribution interpolates the maximum-likelihood estimate at
each order with the estimate one order below, bottoming out at the unigram
interpolated with the uniform distribution 1/V.  A context never seen at some
order falls through to the next lower order unchanged, so every distribution
sums to one.
"""

from __future__ import annotations

from collections import Counter, defaultdict

import numpy as np

from ..errors import EmptyCorpus


class NgramModel:
    def __init__(self, order: int, vocab_size: int, lam: float = 0.7):
        if order < 1:
            raise ValueError("order must be >= 1")
        if not 0.0 < lam < 1.0:
            raise ValueError("interpolation weight must lie in (0, 1)")
        self.order = order
        self.vocab_size = vocab_size
        self.lam = lam
        # counts[k][context][token] for context length k (0..order-1)
        self.counts: list[dict[tuple[int, ...], Counter]] = [
            defaultdict(Counter) for _ in range(order)
        ]
        self.context_totals: list[dict[tuple[int, ...], int]] = [
            defaultdict(int) for _ in range(order)
        ]

    def observe(self, sequence: list[int]) -> None:
        for i, token in enumerate(sequence):
            for k in range(self.order):
                if i < k:
                    continue
                ctx = tuple(sequence[i - k : i])
                self.counts[k][ctx][token] += 1
                self.context_totals[k][ctx] += 1


def ngram_train(sequences: list[list[int]], order: int, lam: float = 0.7,
                vocab_size: int | None = None) -> NgramModel:
    """Count all k-grams (k <= order) over the id sequences."""
    if not sequences:
        raise EmptyCorpus("ngram_train needs at least one sequence")
    if vocab_size is None:
        vocab_size = max((max(s) for s in sequences if s), default=-1) + 1
    model = NgramModel(order, vocab_size, lam)
    for seq in sequences:
        model.observe(seq)
    return model


def ngram_next_dist(model: NgramModel, context: list[int]) -> np.ndarray:
    """Interpolated P(. | context) over the full vocabulary; sums to 1."""
    V = model.vocab_size
    # unigram interpolated with the uniform floor
    dist = np.full(V, 1.0 / V)
    uni_total = model.context_totals[0].get((), 0)
    if uni_total > 0:
        mle = np.zeros(V)
        for tok, c in model.counts[0][()].items():
            mle[tok] = c / uni_total
        dist = model.lam * mle + (1.0 - model.lam) * dist
    # climb to higher orders; unseen contexts fall through unchanged
    for k in range(1, model.order):
        if k > len(context):
            break
        ctx = tuple(context[len(context) - k :])
        total = model.context_totals[k].get(ctx, 0)
        if total == 0:
            continue
        mle = np.zeros(V)
        for tok, c in model.counts[k][ctx].items():
            mle[tok] = c / total
        dist = model.lam * mle + (1.0 - model.lam) * dist
    return dist


def ngram_sequence_logprob(model: NgramModel, sequence: list[int]) -> tuple[float, int]:
    """Sum of log P(token | preceding) over the sequence and the token count."""
    total = 0.0
    for i, token in enumerate(sequence):
        dist = ngram_next_dist(model, sequence[:i])
        total += float(np.log(dist[token]))
    return total, len(sequence)
