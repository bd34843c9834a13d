"""The three demo tasks, as objects the trainer and CLI can drive.

Each task owns its dataset and model and exposes the trainer contract
(``make_batches`` / ``compute_grads``) plus a task-specific ``evaluate``.
"""

from __future__ import annotations

import numpy as np

from .corpus import BOS, EOS
from .errors import DataMissing, EmptyCorpus
from .evalmetrics import bleu, mrr, perplexity, rouge_l_corpus
from .models import NgramModel, RnnLm, NbowEncoder, Seq2Seq, lm_topk, ngram_train
from .models.nbow import nbow_encode, retrieval_batch_grads
from .models.rnnlm import rnnlm_row_grads
from .models.seq2seq import seq2seq_greedy_decode, seq2seq_row_grads


def _chunk(indices: np.ndarray, size: int) -> list[list[int]]:
    return [indices[i : i + size].tolist() for i in range(0, len(indices), size)]


class CompletionTask:
    """Next-token prediction over id sequences."""

    name = "completion"

    def __init__(self, sequences: list[list[int]], model, batch_size: int = 16):
        if not sequences:
            raise EmptyCorpus("completion task needs training sequences")
        self.sequences = sequences
        self.model = model
        self.model_name = type(model).__name__
        self.batch_size = batch_size

    def make_batches(self, rng: np.random.Generator) -> list[list[list[int]]]:
        order = rng.permutation(len(self.sequences))
        return [[self.sequences[i] for i in chunk] for chunk in _chunk(order, self.batch_size)]

    def compute_grads(self, rows: list[list[int]]):
        loss_sum = 0.0
        weight = 0
        units = []
        for row in rows:
            loss, count, grads = rnnlm_row_grads(self.model, row, len(row))
            loss_sum += loss
            weight += count
            units.append(grads)
        return loss_sum, weight, units

    def fit_counts(self, order: int, lam: float) -> NgramModel:
        """Count-based training path for the n-gram model."""
        vocab_size = self.model.vocab_size
        self.model = ngram_train(self.sequences, order, lam, vocab_size=vocab_size)
        self.model_name = type(self.model).__name__
        return self.model

    def evaluate(self, sequences: list[list[int]], cutoff: int = 10) -> dict[str, float]:
        """MRR of the true next token within the top-``cutoff`` list, plus
        perplexity, over every interior position."""
        ranks: list[int | None] = []
        for seq in sequences:
            for i in range(1, len(seq)):
                top = lm_topk(self.model, seq[:i], cutoff)
                rank = next((r + 1 for r, (tok, _) in enumerate(top) if tok == seq[i]), None)
                ranks.append(rank)
        return {
            "mrr": mrr(ranks, cutoff=cutoff),
            "perplexity": perplexity(self.model, sequences),
        }


class RetrievalTask:
    """Code retrieval with in-batch negatives over (code, query) id pairs."""

    name = "retrieval"

    def __init__(self, pairs: list[tuple[list[int], list[int]]], model: NbowEncoder,
                 batch_size: int = 32):
        if not pairs:
            raise EmptyCorpus("retrieval task needs training pairs")
        self.pairs = pairs
        self.model = model
        self.model_name = type(model).__name__
        self.batch_size = batch_size

    def make_batches(self, rng: np.random.Generator) -> list[list[tuple[list[int], list[int]]]]:
        order = rng.permutation(len(self.pairs))
        batches = [[self.pairs[i] for i in chunk] for chunk in _chunk(order, self.batch_size)]
        # in-batch softmax needs at least two candidates
        return [b for b in batches if len(b) >= 2]

    def compute_grads(self, batch: list[tuple[list[int], list[int]]]):
        code_rows = [c for c, _ in batch]
        query_rows = [q for _, q in batch]
        loss_sum, weight, grads = retrieval_batch_grads(self.model, code_rows, query_rows)
        return loss_sum, weight, [grads]

    def evaluate(self, pairs: list[tuple[list[int], list[int]]], candidates: int = 32,
                 cutoff: int = 10) -> dict[str, float]:
        """MRR of the matching code within fixed windows of candidate codes."""
        ranks: list[int | None] = []
        for start in range(0, len(pairs) - candidates + 1, candidates):
            window = pairs[start : start + candidates]
            code_vecs = np.stack([nbow_encode(c, "code", self.model) for c, _ in window])
            for i, (_, query) in enumerate(window):
                q = nbow_encode(query, "query", self.model)
                scores = code_vecs @ q
                rank = 1 + int(np.sum(scores > scores[i]))
                ranks.append(rank if rank <= cutoff else None)
        return {"mrr": mrr(ranks, cutoff=cutoff)}


class SummarizationTask:
    """Comment generation from code token ids via the tiny seq2seq model."""

    name = "summarization"

    def __init__(self, pairs: list[tuple[list[int], list[int]]], model: Seq2Seq,
                 batch_size: int = 16):
        # targets arrive unwrapped; wrap once here
        if not pairs:
            raise EmptyCorpus("summarization task needs training pairs")
        self.pairs = [(src, [BOS] + tgt + [EOS]) for src, tgt in pairs]
        self.model = model
        self.model_name = type(model).__name__
        self.batch_size = batch_size

    def make_batches(self, rng: np.random.Generator):
        order = rng.permutation(len(self.pairs))
        return [[self.pairs[i] for i in chunk] for chunk in _chunk(order, self.batch_size)]

    def compute_grads(self, batch):
        loss_sum = 0.0
        weight = 0
        units = []
        for src, tgt in batch:
            loss, count, grads = seq2seq_row_grads(self.model, src, tgt)
            loss_sum += loss
            weight += count
            units.append(grads)
        return loss_sum, weight, units

    def evaluate(self, pairs: list[tuple[list[int], list[int]]],
                 tgt_vocab=None) -> dict[str, float]:
        """Corpus BLEU and mean ROUGE-L F over greedy decodes; pairs here are
        unwrapped (src, reference) id lists."""
        hyps, refs = [], []
        for src, ref in pairs:
            hyp = seq2seq_greedy_decode(self.model, src)
            hyps.append([str(t) for t in hyp])
            refs.append([str(t) for t in ref])
        return {
            "bleu": bleu(hyps, refs, smooth=True),
            "rouge_l": rouge_l_corpus(hyps, refs),
        }


def build_task(task_name: str, model_name: str, data, dims: dict[str, int], batch_size: int,
               bptt_len: int = 16, seed: int = 0):
    """Construct a task + model pair from preprocessed data and config dims."""
    if task_name == "completion":
        vocab_size = dims["vocab_size"]
        if model_name == "ngram":
            model = NgramModel(dims.get("order", 2), vocab_size)
        elif model_name == "rnn_lm":
            model = RnnLm(vocab_size, dims.get("embed_dim", 32), dims.get("hidden_dim", 32),
                          bptt_len=bptt_len, seed=seed)
        else:
            raise DataMissing(f"unknown completion model {model_name!r}")
        return CompletionTask(data, model, batch_size)
    if task_name == "retrieval":
        model = NbowEncoder(dims["vocab_size"], dims.get("embed_dim", 32),
                            scale=float(dims.get("scale", 10.0)), seed=seed)
        return RetrievalTask(data, model, batch_size)
    if task_name == "summarization":
        model = Seq2Seq(dims["src_vocab_size"], dims["tgt_vocab_size"],
                        dims.get("embed_dim", 32), dims.get("hidden_dim", 32),
                        max_decode_len=dims.get("max_decode_len", 32), seed=seed)
        return SummarizationTask(data, model, batch_size)
    raise DataMissing(f"unknown task {task_name!r}")
