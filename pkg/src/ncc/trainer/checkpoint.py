"""Binary model checkpoints with bit-exact round trips.

Layout, little-endian throughout:
  8 bytes   magic ``NCCKPT01``
  u64       byte length of the metadata document
  ...       UTF-8 JSON metadata: model name, tensor directory
            [{name, shape, dtype "f64", offset}], train state, config digest,
            optional model-specific extra payload
  ...       raw float64 tensor payloads, offsets relative to payload start
"""

from __future__ import annotations

import json
import logging
import struct
from pathlib import Path
from typing import Any

import numpy as np

from ..errors import BadMagic, CorruptDirectory
from .config import TrainState

logger = logging.getLogger(__name__)

MAGIC = b"NCCKPT01"


def save_checkpoint(
    path: str | Path,
    tensors: dict[str, np.ndarray],
    state: TrainState,
    model_name: str = "",
    config_digest: str = "",
    extra: dict[str, Any] | None = None,
) -> None:
    directory = []
    offset = 0
    payloads = []
    for name, arr in tensors.items():
        arr = np.ascontiguousarray(arr, dtype="<f8")
        blob = arr.tobytes()
        directory.append({"name": name, "shape": list(arr.shape), "dtype": "f64", "offset": offset})
        payloads.append(blob)
        offset += len(blob)
    meta = {
        "model": model_name,
        "tensors": directory,
        "state": state.to_dict(),
        "config_digest": config_digest,
        "extra": extra or {},
    }
    meta_blob = json.dumps(meta).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<Q", len(meta_blob)))
        fh.write(meta_blob)
        for blob in payloads:
            fh.write(blob)


def load_checkpoint(path: str | Path, expect_digest: str | None = None):
    """Returns (tensors, state, meta).  Raises BadMagic / CorruptDirectory on
    malformed files; a digest mismatch only logs a warning."""
    raw = Path(path).read_bytes()
    if len(raw) < 16 or raw[:8] != MAGIC:
        raise BadMagic(f"{path}: not a checkpoint file")
    (meta_len,) = struct.unpack("<Q", raw[8:16])
    if 16 + meta_len > len(raw):
        raise CorruptDirectory(f"{path}: metadata length {meta_len} exceeds file size")
    try:
        meta = json.loads(raw[16 : 16 + meta_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptDirectory(f"{path}: unreadable metadata: {exc}") from exc
    payload = raw[16 + meta_len :]
    tensors: dict[str, np.ndarray] = {}
    for entry in meta.get("tensors", []):
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        start = entry["offset"]
        end = start + 8 * count
        if start < 0 or end > len(payload):
            raise CorruptDirectory(f"{path}: tensor {entry['name']!r} spans [{start}, {end}) "
                                   f"outside the {len(payload)}-byte payload")
        tensors[entry["name"]] = np.frombuffer(payload[start:end], dtype="<f8").reshape(shape).copy()
    if expect_digest and meta.get("config_digest") and meta["config_digest"] != expect_digest:
        logger.warning("%s: config digest mismatch (checkpoint %s, expected %s)",
                       path, meta["config_digest"], expect_digest)
    state = TrainState.from_dict(meta["state"])
    return tensors, state, meta
