"""Model directory layout and the shared prediction paths.

A model directory holds ``config.json`` (task, model name, dims, vocab file
names), ``model.ckpt`` and the vocab/merges files the model was trained with.
The same predictor backs both the CLI and the HTTP service, so their outputs
agree by construction.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .. import corpus as cp
from ..errors import DataMissing, EmptyInput
from ..models import NgramModel, RnnLm, NbowEncoder, Seq2Seq, lm_topk
from ..models.nbow import nbow_encode
from ..models.seq2seq import seq2seq_greedy_decode
from ..trainer.checkpoint import load_checkpoint, save_checkpoint
from ..trainer.config import TrainState


def _ngram_extra(model: NgramModel) -> dict:
    flat = []
    for k in range(model.order):
        for ctx, counter in model.counts[k].items():
            for tok, c in counter.items():
                flat.append([k, list(ctx), int(tok), int(c)])
    return {
        "kind": "ngram",
        "order": model.order,
        "vocab_size": model.vocab_size,
        "lam": model.lam,
        "counts": flat,
    }


def _ngram_from_extra(extra: dict) -> NgramModel:
    model = NgramModel(int(extra["order"]), int(extra["vocab_size"]), float(extra["lam"]))
    for k, ctx, tok, c in extra["counts"]:
        ctx = tuple(ctx)
        model.counts[k][ctx][tok] += c
        model.context_totals[k][ctx] += c
    return model


def save_model_dir(out_dir: str | Path, task_name: str, model, vocabs: dict[str, cp.Vocabulary],
                   dims: dict, state: TrainState | None = None, digest: str = "",
                   merges: dict[str, cp.MergeTable] | None = None,
                   search_index: list[dict] | None = None) -> Path:
    """Write config.json, model.ckpt and vocab/merges files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    vocab_files = {}
    for name, vocab in vocabs.items():
        fname = "vocab.txt" if name == "code" else f"vocab_{name}.txt"
        vocab.save(out / fname)
        vocab_files[name] = fname
    merge_files = {}
    for name, table in (merges or {}).items():
        fname = "merges.txt" if name == "code" else f"merges_{name}.txt"
        cp.save_merges(table, out / fname)
        merge_files[name] = fname

    if isinstance(model, NgramModel):
        model_name, tensors, extra = "ngram", {}, _ngram_extra(model)
    else:
        tensors = {p.name: p.value for p in model.params}
        extra = {}
        if isinstance(model, RnnLm):
            model_name = "rnn_lm"
        elif isinstance(model, NbowEncoder):
            model_name = "nbow"
        elif isinstance(model, Seq2Seq):
            model_name = "seq2seq"
        else:
            raise DataMissing(f"cannot persist model type {type(model).__name__}")
    save_checkpoint(out / "model.ckpt", tensors, state or TrainState(),
                    model_name=model_name, config_digest=digest, extra=extra)

    config = {
        "task": task_name,
        "model": model_name,
        "dims": dims,
        "vocab_files": vocab_files,
        "merge_files": merge_files,
        "config_digest": digest,
    }
    if search_index is not None:
        (out / "index.json").write_text(json.dumps(search_index), encoding="utf-8")
        config["index_file"] = "index.json"
    (out / "config.json").write_text(json.dumps(config, indent=2), encoding="utf-8")
    return out


class Predictor:
    """A loaded model directory, ready to answer CLI / HTTP requests."""

    def __init__(self, model_dir: str | Path):
        self.dir = Path(model_dir)
        config_path = self.dir / "config.json"
        if not config_path.exists():
            raise DataMissing(f"{self.dir}: no config.json")
        self.config = json.loads(config_path.read_text(encoding="utf-8"))
        self.task = self.config["task"]
        self.dims = self.config.get("dims", {})
        self.vocabs = {
            name: cp.Vocabulary.load(self.dir / fname)
            for name, fname in self.config.get("vocab_files", {}).items()
        }
        self.merges = {
            name: cp.load_merges(self.dir / fname)
            for name, fname in self.config.get("merge_files", {}).items()
        }
        self.model = self._load_model()
        self.index = None
        if self.config.get("index_file"):
            self.index = json.loads((self.dir / self.config["index_file"]).read_text(encoding="utf-8"))

    def _load_model(self):
        tensors, _state, meta = load_checkpoint(self.dir / "model.ckpt")
        name = self.config["model"]
        dims = self.dims
        if name == "ngram":
            return _ngram_from_extra(meta["extra"])
        if name == "rnn_lm":
            model = RnnLm(dims["vocab_size"], dims["embed_dim"], dims["hidden_dim"],
                          bptt_len=dims.get("bptt_len", 16))
        elif name == "nbow":
            model = NbowEncoder(dims["vocab_size"], dims["embed_dim"],
                                scale=float(dims.get("scale", 10.0)))
        elif name == "seq2seq":
            model = Seq2Seq(dims["src_vocab_size"], dims["tgt_vocab_size"],
                            dims["embed_dim"], dims["hidden_dim"],
                            max_decode_len=dims.get("max_decode_len", 32))
        else:
            raise DataMissing(f"unknown model {name!r} in {self.dir}")
        for p in model.params:
            np.copyto(p.value, tensors[p.name])
        return model

    def _tokenize(self, text: str, side: str = "code") -> list[str]:
        tokens = cp.space_tokenize(text)
        table = self.merges.get(side)
        if table is not None:
            out = []
            for tok in tokens:
                out.extend(cp.bpe_encode(tok, table))
            tokens = out
        return tokens

    # -- task entry points ---------------------------------------------------

    def complete(self, tokens: list[str], k: int) -> list[dict]:
        if not tokens:
            raise EmptyInput("completion needs at least one prefix token")
        vocab = self.vocabs["code"]
        prefix = [cp.BOS] + vocab.encode(tokens)
        top = lm_topk(self.model, prefix, k)
        return [{"token": vocab.token_of[tok], "prob": prob} for tok, prob in top]

    def summarize(self, code_text: str) -> dict:
        tokens = self._tokenize(code_text)
        if not tokens:
            raise EmptyInput("summarization needs non-empty code")
        src = self.vocabs["code"].encode(tokens)
        out_ids = seq2seq_greedy_decode(self.model, src)
        words = self.vocabs["docstring"].decode(out_ids)
        return {"summary": " ".join(words)}

    def search(self, query_text: str, k: int) -> list[dict]:
        tokens = self._tokenize(query_text, side="query")
        if not tokens:
            raise EmptyInput("search needs a non-empty query")
        if not self.index:
            raise DataMissing(f"{self.dir}: model has no search index")
        q = nbow_encode(self.vocabs["query"].encode(tokens), "query", self.model)
        code_vecs = np.stack([
            nbow_encode(entry["ids"], "code", self.model) for entry in self.index
        ])
        scores = code_vecs @ q
        order = np.argsort(-scores, kind="stable")[:k]
        return [
            {"path": self.index[int(i)]["path"], "score": float(scores[i])}
            for i in order
        ]

    def predict(self, task: str, payload, k: int):
        """Uniform entry shared by CLI --json and the HTTP endpoints."""
        if task == "complete":
            if isinstance(payload, str):
                payload = cp.space_tokenize(payload)
            return {"candidates": self.complete(payload, k)}
        if task == "summarize":
            return self.summarize(payload)
        if task == "search":
            return {"results": self.search(payload, k)}
        raise DataMissing(f"unknown prediction task {task!r}")
