"""Corpus ingestion, tokenization (space + BPE), vocabularies and mini-batches.

File formats produced by preprocessing:
  vocab.txt   one token per line; the first four lines are the specials
              <pad> <unk> <bos> <eos>, so line number == token id
  merges.txt  one merge per line, "left right", in learned order
  *.bin       shard: 8-byte magic ``NCCDAT01`` then repeated records of
              [u32 LE length, that many u32 LE token ids]
"""

from __future__ import annotations

import json
import struct
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .errors import EmptyBatch, EmptyCorpus, MalformedRecord

PAD, UNK, BOS, EOS = 0, 1, 2, 3
SPECIALS = ["<pad>", "<unk>", "<bos>", "<eos>"]
END_OF_WORD = "</w>"
SHARD_MAGIC = b"NCCDAT01"


@dataclass
class CodeRecord:
    code: str
    docstring: str | None = None
    language: str = ""
    path: str = ""


def iter_records(path: str | Path, malformed: list[MalformedRecord] | None = None) -> Iterator[CodeRecord]:
    """Yield records from a JSONL file in file order.

    Blank lines are skipped silently; lines that are not valid JSON or lack a
    non-empty ``code`` field are skipped and reported through ``malformed``.
    """
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                if malformed is not None:
                    malformed.append(MalformedRecord(lineno, f"bad JSON: {exc.msg}"))
                continue
            code = obj.get("code")
            if not isinstance(code, str) or not code.strip():
                if malformed is not None:
                    malformed.append(MalformedRecord(lineno, "missing or empty 'code'"))
                continue
            yield CodeRecord(
                code=code,
                docstring=obj.get("docstring"),
                language=str(obj.get("language", "")).lower(),
                path=str(obj.get("path", "")),
            )


def load_records(path: str | Path) -> tuple[list[CodeRecord], list[MalformedRecord]]:
    malformed: list[MalformedRecord] = []
    records = list(iter_records(path, malformed))
    return records, malformed


def space_tokenize(text: str) -> list[str]:
    """Split on maximal runs of Unicode whitespace; never yields empty tokens."""
    return text.split()


# ---------------------------------------------------------------------------
# BPE


@dataclass
class MergeTable:
    merges: list[tuple[str, str]] = field(default_factory=list)
    end_marker: str = END_OF_WORD


def _word_symbols(word: str) -> tuple[str, ...]:
    return tuple(word) + (END_OF_WORD,)


def _pair_counts(words: dict[tuple[str, ...], int]) -> Counter:
    counts: Counter = Counter()
    for symbols, freq in words.items():
        for a, b in zip(symbols, symbols[1:]):
            counts[(a, b)] += freq
    return counts


def _merge_word(symbols: tuple[str, ...], pair: tuple[str, str]) -> tuple[str, ...]:
    # apply one merge exhaustively left-to-right
    out: list[str] = []
    i = 0
    merged = pair[0] + pair[1]
    while i < len(symbols):
        if i + 1 < len(symbols) and symbols[i] == pair[0] and symbols[i + 1] == pair[1]:
            out.append(merged)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return tuple(out)


def _symbol_key(symbol: str):
    # the end-of-word marker sorts after every ordinary symbol, so "</w>"
    # never wins a tie against real text
    return (1,) if symbol == END_OF_WORD else (0, symbol)


def _pair_key(pair: tuple[str, str]):
    return (_symbol_key(pair[0]), _symbol_key(pair[1]))


def bpe_train(word_counts: dict[str, int], num_merges: int, min_pair_freq: int = 2) -> MergeTable:
    """Learn a merge table greedily.

    Each step merges the most frequent adjacent symbol pair (weighted by word
    count); ties go to the lexicographically smallest (left, right) pair,
    with the end-of-word marker ordered last.  Stops after ``num_merges``
    merges or when the best frequency drops below ``min_pair_freq``.
    """
    if not word_counts:
        raise EmptyCorpus("bpe_train needs at least one word")
    words = {_word_symbols(w): c for w, c in word_counts.items()}
    table = MergeTable()
    for _ in range(num_merges):
        counts = _pair_counts(words)
        if not counts:
            break
        best_freq = max(counts.values())
        if best_freq < min_pair_freq:
            break
        best = min((p for p, c in counts.items() if c == best_freq), key=_pair_key)
        table.merges.append(best)
        words = {_merge_word(sym, best): c for sym, c in words.items()}
    return table


def bpe_encode(word: str, table: MergeTable) -> list[str]:
    """Segment ``word`` into subtokens by replaying merges in table order."""
    if not word:
        raise EmptyCorpus("cannot encode an empty word")
    symbols = _word_symbols(word)
    for pair in table.merges:
        if len(symbols) == 1:
            break
        symbols = _merge_word(symbols, pair)
    return list(symbols)


def save_merges(table: MergeTable, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for left, right in table.merges:
            fh.write(f"{left} {right}\n")


def load_merges(path: str | Path) -> MergeTable:
    merges = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                left, right = line.rstrip("\n").split(" ")
                merges.append((left, right))
    return MergeTable(merges=merges)


# ---------------------------------------------------------------------------
# Vocabulary


class Vocabulary:
    """Dense token <-> id map with <pad> <unk> <bos> <eos> pinned at ids 0-3."""

    def __init__(self, tokens: Iterable[str] = ()):  # tokens excludes specials
        self.token_of: list[str] = list(SPECIALS)
        self.id_of: dict[str, int] = {t: i for i, t in enumerate(self.token_of)}
        for tok in tokens:
            self._add(tok)

    def _add(self, token: str) -> None:
        if token in self.id_of:
            raise ValueError(f"token {token!r} already in vocabulary")
        self.id_of[token] = len(self.token_of)
        self.token_of.append(token)

    def __len__(self) -> int:
        return len(self.token_of)

    def encode(self, tokens: Iterable[str]) -> list[int]:
        return [self.id_of.get(t, UNK) for t in tokens]

    def decode(self, ids: Iterable[int]) -> list[str]:
        return [self.token_of[i] for i in ids]

    def save(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for tok in self.token_of:
                fh.write(tok + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.rstrip("\n") for ln in fh]
        while lines and not lines[-1]:
            lines.pop()
        if lines[:4] != SPECIALS:
            raise ValueError(f"{path}: first four lines must be {SPECIALS}")
        return cls(lines[4:])


def build_vocab(token_counts: dict[str, int], min_count: int = 1, max_size: int = 100_000) -> Vocabulary:
    """Specials first, then tokens with count >= min_count by descending count
    (lexicographic tie-break), truncated to ``max_size`` entries total."""
    if max_size < 4:
        raise ValueError("max_size must leave room for the four specials")
    kept = sorted(
        (t for t, c in token_counts.items() if c >= min_count and t not in SPECIALS),
        key=lambda t: (-token_counts[t], t),
    )
    return Vocabulary(kept[: max_size - 4])


# ---------------------------------------------------------------------------
# Mini-batches


@dataclass
class MiniBatch:
    ids: np.ndarray          # B x T int64, right-padded with PAD
    lengths: np.ndarray      # B int64, true lengths
    targets: np.ndarray | None = None  # B x T next-token or decoder targets

    @property
    def batch_size(self) -> int:
        return self.ids.shape[0]


def encode_batch(sequences: list[list[str]], vocab: Vocabulary, add_bos_eos: bool = False) -> MiniBatch:
    """Map token sequences to a right-padded id matrix, preserving order."""
    if not sequences:
        raise EmptyBatch("encode_batch needs at least one sequence")
    rows = []
    for seq in sequences:
        ids = vocab.encode(seq)
        if add_bos_eos:
            ids = [BOS] + ids + [EOS]
        rows.append(ids)
    lengths = np.array([len(r) for r in rows], dtype=np.int64)
    width = int(lengths.max())
    ids = np.full((len(rows), width), PAD, dtype=np.int64)
    for b, row in enumerate(rows):
        ids[b, : len(row)] = row
    return MiniBatch(ids=ids, lengths=lengths)


def batch_id_rows(rows: list[list[int]]) -> MiniBatch:
    """Pad pre-encoded id rows into a MiniBatch."""
    if not rows:
        raise EmptyBatch("empty batch")
    lengths = np.array([len(r) for r in rows], dtype=np.int64)
    width = int(lengths.max())
    ids = np.full((len(rows), width), PAD, dtype=np.int64)
    for b, row in enumerate(rows):
        ids[b, : len(row)] = row
    return MiniBatch(ids=ids, lengths=lengths)


# ---------------------------------------------------------------------------
# Binarized shards


def write_shard(path: str | Path, sequences: Iterable[list[int]]) -> int:
    """Write id sequences to a binary shard; returns the number of records."""
    n = 0
    with open(path, "wb") as fh:
        fh.write(SHARD_MAGIC)
        for seq in sequences:
            fh.write(struct.pack("<I", len(seq)))
            fh.write(np.asarray(seq, dtype="<u4").tobytes())
            n += 1
    return n


def read_shard(path: str | Path) -> list[list[int]]:
    with open(path, "rb") as fh:
        magic = fh.read(8)
        if magic != SHARD_MAGIC:
            raise ValueError(f"{path}: bad shard magic {magic!r}")
        sequences = []
        while True:
            header = fh.read(4)
            if not header:
                break
            if len(header) < 4:
                raise ValueError(f"{path}: truncated record header")
            (length,) = struct.unpack("<I", header)
            payload = fh.read(4 * length)
            if len(payload) < 4 * length:
                raise ValueError(f"{path}: truncated record payload")
            sequences.append(np.frombuffer(payload, dtype="<u4").astype(int).tolist())
    return sequences
