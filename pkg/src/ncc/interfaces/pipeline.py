"""Preprocess / train / eval plumbing shared by the CLI."""

from __future__ import annotations

import json
from collections import Counter
from pathlib import Path

from .. import corpus as cp
from ..errors import DataMissing
from ..tasks import CompletionTask, RetrievalTask, SummarizationTask, build_task
from ..trainer import TrainConfig, config_digest, train
from .modelstore import Predictor, save_model_dir


def _field_suffix(fieldname: str) -> str:
    return "" if fieldname == "code" else f"_{fieldname}"


def preprocess(config: dict) -> dict:
    """Tokenize a JSONL corpus, build vocab/merges per field and write shards.

    Returns a summary dict (record counts, vocab sizes, output files).
    """
    input_path = Path(config["input"])
    out_dir = Path(config["output_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    tokenizer = config.get("tokenizer", "space")
    fields = config.get("fields", ["code"])
    bpe_cfg = config.get("bpe", {})
    vocab_cfg = config.get("vocab", {})

    records, malformed = cp.load_records(input_path)
    if not records:
        raise DataMissing(f"{input_path}: no usable records")

    summary = {
        "records": len(records),
        "malformed": len(malformed),
        "fields": {},
    }
    paths = [r.path for r in records]
    (out_dir / "meta.json").write_text(json.dumps({"paths": paths, "records": len(records)}),
                                       encoding="utf-8")

    for fieldname in fields:
        suffix = _field_suffix(fieldname)
        texts = []
        for r in records:
            value = r.code if fieldname == "code" else (r.docstring or "")
            texts.append(cp.space_tokenize(value))

        merge_table = None
        if tokenizer == "bpe":
            word_counts = Counter(tok for toks in texts for tok in toks)
            merge_table = cp.bpe_train(
                dict(word_counts),
                num_merges=int(bpe_cfg.get("num_merges", 200)),
                min_pair_freq=int(bpe_cfg.get("min_pair_freq", 2)),
            )
            texts = [[sub for tok in toks for sub in cp.bpe_encode(tok, merge_table)]
                     for toks in texts]
            cp.save_merges(merge_table, out_dir / f"merges{suffix}.txt")

        token_counts = Counter(tok for toks in texts for tok in toks)
        vocab = cp.build_vocab(dict(token_counts),
                               min_count=int(vocab_cfg.get("min_count", 1)),
                               max_size=int(vocab_cfg.get("max_size", 100_000)))
        vocab.save(out_dir / f"vocab{suffix}.txt")
        n = cp.write_shard(out_dir / f"{fieldname}.bin", (vocab.encode(t) for t in texts))
        summary["fields"][fieldname] = {"vocab_size": len(vocab), "sequences": n}
    return summary


def _load_task_data(task_name: str, data_dir: Path):
    """Returns (data, vocabs) in the shape each task constructor expects."""
    code_vocab = cp.Vocabulary.load(data_dir / "vocab.txt")
    code_rows = cp.read_shard(data_dir / "code.bin")
    if task_name == "completion":
        rows = [[cp.BOS] + r + [cp.EOS] for r in code_rows]
        return rows, {"code": code_vocab}
    doc_vocab = cp.Vocabulary.load(data_dir / "vocab_docstring.txt")
    doc_rows = cp.read_shard(data_dir / "docstring.bin")
    if len(doc_rows) != len(code_rows):
        raise DataMissing("code and docstring shards disagree on record count")
    if task_name == "retrieval":
        pairs = [(c, q) for c, q in zip(code_rows, doc_rows) if c and q]
        return pairs, {"code": code_vocab, "query": doc_vocab}
    if task_name == "summarization":
        pairs = [(c, d) for c, d in zip(code_rows, doc_rows) if c and d]
        return pairs, {"code": code_vocab, "docstring": doc_vocab}
    raise DataMissing(f"unknown task {task_name!r}")


def run_training(config_doc: dict) -> dict:
    """Train per config and persist a loadable model directory."""
    cfg = TrainConfig.from_dict(config_doc)
    data_dir = Path(cfg.paths.get("data", ""))
    save_dir = Path(cfg.paths.get("save_dir", ""))
    if not data_dir.is_dir():
        raise DataMissing(f"preprocessed data directory {data_dir} not found")
    data, vocabs = _load_task_data(cfg.task_name, data_dir)

    dims = dict(cfg.model_dims)
    if cfg.task_name == "summarization":
        dims.setdefault("src_vocab_size", len(vocabs["code"]))
        dims.setdefault("tgt_vocab_size", len(vocabs["docstring"]))
    else:
        dims.setdefault("vocab_size", len(vocabs["code"]))
    dims.setdefault("bptt_len", cfg.bptt_len)

    task = build_task(cfg.task_name, cfg.model_name, data, dims,
                      batch_size=cfg.batch_size, bptt_len=cfg.bptt_len, seed=cfg.seed)

    result: dict = {"task": cfg.task_name, "model": cfg.model_name}
    if cfg.model_name == "ngram":
        task.fit_counts(dims.get("order", 2), 0.7)
        result["updates"] = 0
    else:
        report = train(task, cfg)
        result["updates"] = report.num_updates
        result["epoch_losses"] = report.epoch_losses

    search_index = None
    if cfg.task_name == "retrieval":
        meta = json.loads((data_dir / "meta.json").read_text(encoding="utf-8"))
        code_rows = cp.read_shard(data_dir / "code.bin")
        search_index = [
            {"path": p, "ids": ids} for p, ids in zip(meta["paths"], code_rows) if ids
        ]

    save_model_dir(save_dir, cfg.task_name, task.model, vocabs, dims,
                   digest=config_digest(cfg), search_index=search_index)
    result["model_dir"] = str(save_dir)
    return result


def run_eval(config: dict) -> dict:
    """Evaluate a saved model on a preprocessed data directory; write the report."""
    model_dir = Path(config["model_dir"])
    data_dir = Path(config["data_dir"])
    predictor = Predictor(model_dir)
    data, _vocabs = _load_task_data(predictor.task, data_dir)

    if predictor.task == "completion":
        task = CompletionTask(data, predictor.model)
        metrics = task.evaluate(data)
        metric, value = "mrr", metrics["mrr"]
        num_items = sum(max(0, len(s) - 1) for s in data)
    elif predictor.task == "retrieval":
        task = RetrievalTask(data, predictor.model)
        metrics = task.evaluate(data, candidates=min(32, len(data)))
        metric, value = "mrr", metrics["mrr"]
        num_items = len(data)
    else:
        task = SummarizationTask(data, predictor.model)
        metrics = task.evaluate(data)
        metric, value = "bleu", metrics["bleu"]
        num_items = len(data)

    report = {
        "task": predictor.task,
        "model": predictor.config["model"],
        "metric": metric,
        "value": value,
        "num_items": num_items,
        "config_digest": predictor.config.get("config_digest", ""),
        "extra_metrics": {k: v for k, v in metrics.items() if k != metric},
    }
    output = config.get("output")
    if output:
        Path(output).write_text(json.dumps(report, indent=2), encoding="utf-8")
    return report
