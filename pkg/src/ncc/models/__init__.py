from .ngram import NgramModel, ngram_train, ngram_next_dist
from .rnnlm import RnnLm, rnnlm_loss
from .nbow import NbowEncoder, nbow_encode, retrieval_loss
from .seq2seq import Seq2Seq, seq2seq_loss, seq2seq_greedy_decode
from .topk import lm_topk

__all__ = [
    "NgramModel",
    "ngram_train",
    "ngram_next_dist",
    "RnnLm",
    "rnnlm_loss",
    "NbowEncoder",
    "nbow_encode",
    "retrieval_loss",
    "Seq2Seq",
    "seq2seq_loss",
    "seq2seq_greedy_decode",
    "lm_topk",
]
