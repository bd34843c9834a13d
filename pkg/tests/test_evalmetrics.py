import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncc.corpus import batch_id_rows
from ncc.errors import EmptyInput, LengthMismatch
from ncc.evalmetrics import (
    bleu, mrr, perplexity, perplexity_from_logprob, rouge_l, rouge_l_corpus,
)
from ncc.models import RnnLm, ngram_train, rnnlm_loss


# --- independent references ---------------------------------------------------

def ref_lcs(a, b):
    """Recursive LCS with memoization, written independently of the DP in ncc."""
    from functools import lru_cache

    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a) or j == len(b):
            return 0
        if a[i] == b[j]:
            return 1 + go(i + 1, j + 1)
        return max(go(i + 1, j), go(i, j + 1))

    return go(0, 0)


def ref_bleu_single(hyp, ref, max_n, smooth=False):
    """Corpus of one pair, per the clipped-precision definition."""
    logs = []
    for n in range(1, max_n + 1):
        hyp_grams = [tuple(hyp[i:i + n]) for i in range(len(hyp) - n + 1)]
        ref_grams = [tuple(ref[i:i + n]) for i in range(len(ref) - n + 1)]
        num = sum(min(hyp_grams.count(g), ref_grams.count(g))
                  for g in set(hyp_grams))
        den = len(hyp_grams)
        if smooth and n >= 2:
            num, den = num + 1, den + 1
        if num == 0 or den == 0:
            return 0.0
        logs.append(math.log(num / den))
    bp = 1.0 if len(hyp) >= len(ref) else math.exp(1 - len(ref) / len(hyp))
    return bp * math.exp(sum(logs) / max_n)


# --- mrr -----------------------------------------------------------------------

def test_mrr_known_value():
    assert mrr([1, 2, None]) == 0.5


def test_mrr_all_hits_rank_one():
    assert mrr([1, 1, 1, 1]) == 1.0


def test_mrr_cutoff_excludes_deep_ranks():
    assert mrr([11], cutoff=10) == 0.0
    assert mrr([10], cutoff=10) == pytest.approx(0.1)


def test_mrr_empty_raises():
    with pytest.raises(EmptyInput):
        mrr([])


def test_mrr_invalid_rank():
    with pytest.raises(ValueError):
        mrr([0])


@given(st.lists(st.one_of(st.none(), st.integers(min_value=1, max_value=30)),
                min_size=1, max_size=20))
def test_mrr_bounded_and_permutation_invariant(ranks):
    value = mrr(ranks)
    assert 0.0 <= value <= 1.0
    assert mrr(list(reversed(ranks))) == pytest.approx(value, abs=1e-15)


# --- bleu ----------------------------------------------------------------------

def test_bleu_known_value():
    score = bleu([["the", "cat"]], [["the", "cat", "sat"]], max_n=2)
    assert score == pytest.approx(0.606531, abs=1e-6)
    assert score == pytest.approx(math.exp(-0.5), abs=1e-12)


def test_bleu_identity_is_one():
    hyp = [["a", "b", "c", "d", "e"]]
    assert bleu(hyp, hyp) == pytest.approx(1.0, abs=1e-12)


def test_bleu_no_overlap_is_zero():
    assert bleu([["x", "y"]], [["a", "b"]]) == 0.0


def test_bleu_smoothing_rescues_missing_higher_orders():
    hyp, ref = [["a", "b"]], [["a", "c"]]
    assert bleu(hyp, ref, max_n=2) == 0.0
    assert bleu(hyp, ref, max_n=2, smooth=True) > 0.0


def test_bleu_length_mismatch():
    with pytest.raises(LengthMismatch):
        bleu([["a"]], [])


def test_bleu_empty_corpus():
    with pytest.raises(EmptyInput):
        bleu([], [])


def test_bleu_matches_single_pair_reference():
    rng = np.random.default_rng(0)
    alphabet = list("abcdef")
    for _ in range(30):
        hyp = [alphabet[i] for i in rng.integers(0, 6, size=rng.integers(1, 10))]
        ref = [alphabet[i] for i in rng.integers(0, 6, size=rng.integers(1, 10))]
        for smooth in (False, True):
            got = bleu([hyp], [ref], max_n=3, smooth=smooth)
            want = ref_bleu_single(hyp, ref, max_n=3, smooth=smooth)
            assert got == pytest.approx(want, abs=1e-9)


def test_bleu_corpus_permutation_invariant():
    hyps = [["a", "b"], ["c", "c", "d"], ["e"]]
    refs = [["a", "b", "c"], ["c", "d"], ["e", "f"]]
    base = bleu(hyps, refs, max_n=2, smooth=True)
    for perm in itertools.permutations(range(3)):
        shuffled = bleu([hyps[i] for i in perm], [refs[i] for i in perm],
                        max_n=2, smooth=True)
        assert shuffled == pytest.approx(base, abs=1e-12)


def test_bleu_relabeling_invariant():
    mapping = {"a": "x", "b": "y", "c": "z"}
    hyps = [["a", "b", "a"], ["c"]]
    refs = [["a", "b"], ["c", "c"]]
    renamed_h = [[mapping[t] for t in h] for h in hyps]
    renamed_r = [[mapping[t] for t in r] for r in refs]
    assert bleu(renamed_h, renamed_r, max_n=2, smooth=True) == pytest.approx(
        bleu(hyps, refs, max_n=2, smooth=True), abs=1e-15)


@settings(max_examples=50)
@given(st.lists(st.lists(st.sampled_from("abcd"), min_size=4, max_size=8),
                min_size=1, max_size=4))
def test_bleu_self_is_always_one(rows):
    assert bleu(rows, [list(r) for r in rows]) == pytest.approx(1.0, abs=1e-12)


# --- rouge-l ---------------------------------------------------------------------

def test_rouge_known_value():
    p, r, f = rouge_l(["a", "c", "d"], ["a", "b", "c", "d"])
    assert p == pytest.approx(1.0, abs=1e-12)
    assert r == pytest.approx(0.75, abs=1e-12)
    assert f == pytest.approx(0.857143, abs=1e-6)


def test_rouge_identity():
    p, r, f = rouge_l(["x", "y"], ["x", "y"])
    assert (p, r, f) == (1.0, 1.0, 1.0)


def test_rouge_disjoint_zero():
    p, r, f = rouge_l(["x"], ["y"])
    assert (p, r, f) == (0.0, 0.0, 0.0)


def test_rouge_empty_raises():
    with pytest.raises(EmptyInput):
        rouge_l([], ["a"])
    with pytest.raises(EmptyInput):
        rouge_l(["a"], [])


def test_rouge_swap_transposes_p_and_r():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = [str(i) for i in rng.integers(0, 4, size=rng.integers(1, 8))]
        b = [str(i) for i in rng.integers(0, 4, size=rng.integers(1, 8))]
        p1, r1, f1 = rouge_l(a, b)
        p2, r2, f2 = rouge_l(b, a)
        assert p1 == pytest.approx(r2, abs=1e-15)
        assert r1 == pytest.approx(p2, abs=1e-15)
        assert f1 == pytest.approx(f2, abs=1e-15)


def test_rouge_lcs_matches_recursive_reference():
    rng = np.random.default_rng(2)
    for _ in range(30):
        a = tuple(str(i) for i in rng.integers(0, 3, size=rng.integers(1, 9)))
        b = tuple(str(i) for i in rng.integers(0, 3, size=rng.integers(1, 9)))
        lcs = ref_lcs(a, b)
        p, r, _ = rouge_l(list(a), list(b))
        assert p == pytest.approx(lcs / len(a), abs=1e-15)
        assert r == pytest.approx(lcs / len(b), abs=1e-15)


def test_rouge_corpus_is_mean_of_f():
    hyps = [["a", "b"], ["c"]]
    refs = [["a", "b", "c"], ["c"]]
    expected = (rouge_l(hyps[0], refs[0])[2] + rouge_l(hyps[1], refs[1])[2]) / 2
    assert rouge_l_corpus(hyps, refs) == pytest.approx(expected, abs=1e-15)


def test_rouge_corpus_length_mismatch():
    with pytest.raises(LengthMismatch):
        rouge_l_corpus([["a"]], [])


# --- perplexity -------------------------------------------------------------------

def test_perplexity_uniform_model_equals_vocab_size():
    # equal unigram counts make the MLE uniform, so the interpolated
    # distribution is uniform for any lambda
    model = ngram_train([list(range(8))], order=1, lam=0.7, vocab_size=8)
    ppl = perplexity(model, [[0, 1, 2, 3]])
    assert ppl == pytest.approx(8.0, abs=1e-9)


def test_perplexity_skips_first_token():
    model = ngram_train([list(range(8))], order=1, lam=0.7, vocab_size=8)
    # singleton sequences contribute no predictions at all
    with pytest.raises(EmptyInput):
        perplexity(model, [[3]])


def test_perplexity_from_logprob_identity():
    assert perplexity_from_logprob(-math.log(4) * 10, 10) == pytest.approx(4.0, abs=1e-12)


def test_perplexity_matches_rnnlm_loss():
    model = RnnLm(vocab_size=7, embed_dim=4, hidden_dim=5, seed=3)
    rows = [[1, 2, 3, 4], [5, 6], [2, 2, 2]]
    loss = rnnlm_loss(model, batch_id_rows(rows))
    assert perplexity(model, rows) == pytest.approx(math.exp(loss), rel=1e-9)


def test_perplexity_of_deterministic_sequence_approaches_one():
    model = ngram_train([[0, 1] * 50], order=2, lam=1 - 1e-12, vocab_size=2)
    ppl = perplexity(model, [[0, 1, 0, 1, 0]])
    assert ppl == pytest.approx(1.0, rel=1e-6)
