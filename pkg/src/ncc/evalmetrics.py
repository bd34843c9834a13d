"""Evaluation metrics: MRR, corpus BLEU, ROUGE-L and perplexity."""

from __future__ import annotations

import math
from collections import Counter
from typing import Sequence

from .errors import EmptyInput, LengthMismatch

MRR_CUTOFF = 10


def mrr(ranks: Sequence[int | None], cutoff: int = MRR_CUTOFF) -> float:
    """Mean reciprocal rank; ranks beyond the cutoff (or None) contribute 0."""
    if not ranks:
        raise EmptyInput("mrr needs at least one ranked item")
    total = 0.0
    for r in ranks:
        if r is not None:
            if r < 1:
                raise ValueError(f"rank must be >= 1, got {r}")
            if r <= cutoff:
                total += 1.0 / r
    return total / len(ranks)


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(hypotheses: list[list[str]], references: list[list[str]],
         max_n: int = 4, smooth: bool = False) -> float:
    """Corpus-level BLEU with one reference per hypothesis.

    Clipped n-gram counts are pooled over the corpus before taking the
    geometric mean; brevity penalty exp(1 - r/c) applies when the hypothesis
    corpus is shorter than the reference corpus.  Smoothing adds one to the
    numerator and denominator of p_n for n >= 2.
    """
    if len(hypotheses) != len(references):
        raise LengthMismatch(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise EmptyInput("bleu needs at least one pair")
    matches = [0] * max_n
    totals = [0] * max_n
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            hyp_ngrams = _ngrams(hyp, n)
            ref_ngrams = _ngrams(ref, n)
            totals[n - 1] += max(0, len(hyp) - n + 1)
            matches[n - 1] += sum(min(c, ref_ngrams[g]) for g, c in hyp_ngrams.items())
    log_sum = 0.0
    for n in range(1, max_n + 1):
        num, den = matches[n - 1], totals[n - 1]
        if smooth and n >= 2:
            num += 1
            den += 1
        if num == 0 or den == 0:
            return 0.0
        log_sum += math.log(num / den)
    geo = math.exp(log_sum / max_n)
    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / hyp_len)
    return bp * geo


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    # classic O(|a||b|) DP, one rolling row
    prev = [0] * (len(b) + 1)
    for x in a:
        curr = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                curr.append(prev[j - 1] + 1)
            else:
                curr.append(max(prev[j], curr[-1]))
        prev = curr
    return prev[-1]


def rouge_l(hypothesis: list[str], reference: list[str]) -> tuple[float, float, float]:
    """LCS-based (precision, recall, F1)."""
    if not hypothesis or not reference:
        raise EmptyInput("rouge_l needs non-empty hypothesis and reference")
    lcs = _lcs_length(hypothesis, reference)
    p = lcs / len(hypothesis)
    r = lcs / len(reference)
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return p, r, f


def rouge_l_corpus(hypotheses: list[list[str]], references: list[list[str]]) -> float:
    """Mean of per-pair ROUGE-L F scores."""
    if len(hypotheses) != len(references):
        raise LengthMismatch(f"{len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise EmptyInput("rouge_l_corpus needs at least one pair")
    return sum(rouge_l(h, r)[2] for h, r in zip(hypotheses, references)) / len(hypotheses)


def perplexity_from_logprob(total_logprob: float, n_tokens: int) -> float:
    if n_tokens == 0:
        raise EmptyInput("no predicted tokens")
    return math.exp(-total_logprob / n_tokens)


def perplexity(model, corpus: list[list[int]]) -> float:
    """exp(mean negative log-probability per predicted token).

    The first token of each sequence is conditioning context, not a
    prediction, matching the shifted-target convention of the LM losses.
    Works with any model exposing a next-token distribution through
    :func:`ncc.models.topk.next_token_dist`.
    """
    import numpy as np

    from .models.topk import next_token_dist

    total = 0.0
    count = 0
    for seq in corpus:
        for i in range(1, len(seq)):
            dist = next_token_dist(model, seq[:i])
            total += float(np.log(dist[seq[i]]))
            count += 1
    return perplexity_from_logprob(total, count)
