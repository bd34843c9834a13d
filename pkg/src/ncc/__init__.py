"""Desk-scale language-modeling toolkit for source code."""

from __future__ import annotations

__version__ = "0.1.0"

_builtins_installed = False


def install_builtins() -> None:
    """Register the built-in tasks, models, tokenizers and metrics.

    Idempotent; call once during startup before resolving anything.
    """
    global _builtins_installed
    if _builtins_installed:
        return
    from . import corpus, evalmetrics, tasks
    from .models import NgramModel, RnnLm, NbowEncoder, Seq2Seq
    from .registry import RegistryKind as K, register

    register(K.TASK, "completion", tasks.CompletionTask, "next-token code completion")
    register(K.TASK, "summarization", tasks.SummarizationTask, "code comment generation")
    register(K.TASK, "retrieval", tasks.RetrievalTask, "natural-language code search")

    register(K.MODEL, "ngram", NgramModel, "interpolated n-gram language model")
    register(K.MODEL, "rnn_lm", RnnLm, "Elman recurrent language model")
    register(K.MODEL, "nbow", NbowEncoder, "neural bag-of-words dual encoder")
    register(K.MODEL, "seq2seq", Seq2Seq, "encoder-decoder comment generator")

    register(K.TOKENIZER, "space", corpus.space_tokenize, "whitespace tokenizer")
    register(K.TOKENIZER, "bpe", corpus.bpe_encode, "byte-pair-encoding tokenizer")

    register(K.METRIC, "mrr", evalmetrics.mrr, "mean reciprocal rank")
    register(K.METRIC, "bleu", evalmetrics.bleu, "corpus BLEU")
    register(K.METRIC, "rouge_l", evalmetrics.rouge_l, "ROUGE-L precision/recall/F")
    register(K.METRIC, "perplexity", evalmetrics.perplexity, "language-model perplexity")

    _builtins_installed = True
