"""Training configuration and mutable training state."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, asdict
from typing import Any


@dataclass
class TrainConfig:
    # optimization
    lr: float = 1e-2
    min_lr: float = 1e-5
    lr_shrink: float = 0.95
    max_epoch: int = 10
    max_update: int = 10_000
    update_freq: int = 1
    clip_norm: float = 5.0
    seed: int = 1
    workers: int = 1
    # data
    paths: dict[str, str] = field(default_factory=dict)
    batch_size: int = 16
    bptt_len: int = 16
    # model / task
    model_name: str = ""
    model_dims: dict[str, int] = field(default_factory=dict)
    task_name: str = ""
    trainer_kind: str = "default"  # or "simple"

    def __post_init__(self):
        if self.lr <= self.min_lr:
            raise ValueError("lr must start above min_lr")
        if self.update_freq < 1:
            raise ValueError("update_freq must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @classmethod
    def from_dict(cls, doc: dict[str, Any]) -> "TrainConfig":
        """Build from the nested JSON layout (optimization/data/model/task)."""
        opt = doc.get("optimization", {})
        data = doc.get("data", {})
        model = doc.get("model", {})
        task = doc.get("task", {})
        return cls(
            lr=float(opt.get("lr", 1e-2)),
            min_lr=float(opt.get("min_lr", 1e-5)),
            lr_shrink=float(opt.get("lr_shrink", 0.95)),
            max_epoch=int(opt.get("max_epoch", 10)),
            max_update=int(opt.get("max_update", 10_000)),
            update_freq=int(opt.get("update_freq", 1)),
            clip_norm=float(opt.get("clip_norm", 5.0)),
            seed=int(opt.get("seed", 1)),
            workers=int(opt.get("workers", 1)),
            paths=dict(data.get("paths", {})),
            batch_size=int(data.get("batch_size", 16)),
            bptt_len=int(data.get("bptt_len", 16)),
            model_name=str(model.get("name", "")),
            model_dims={k: int(v) for k, v in model.get("dims", {}).items()},
            task_name=str(task.get("name", "")),
            trainer_kind=str(doc.get("trainer", "default")),
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "optimization": {
                "lr": self.lr, "min_lr": self.min_lr, "lr_shrink": self.lr_shrink,
                "max_epoch": self.max_epoch, "max_update": self.max_update,
                "update_freq": self.update_freq, "clip_norm": self.clip_norm,
                "seed": self.seed, "workers": self.workers,
            },
            "data": {"paths": self.paths, "batch_size": self.batch_size, "bptt_len": self.bptt_len},
            "model": {"name": self.model_name, "dims": self.model_dims},
            "task": {"name": self.task_name},
            "trainer": self.trainer_kind,
        }


def config_digest(cfg: TrainConfig | dict) -> str:
    doc = cfg.to_dict() if isinstance(cfg, TrainConfig) else cfg
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


@dataclass
class TrainState:
    epoch: int = 0
    num_updates: int = 0
    lr: float = 0.0
    best_valid_loss: float = float("inf")
    rng_state: dict | None = None

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        # JSON has no inf literal
        if d["best_valid_loss"] == float("inf"):
            d["best_valid_loss"] = None
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TrainState":
        bvl = d.get("best_valid_loss")
        return cls(
            epoch=int(d["epoch"]),
            num_updates=int(d["num_updates"]),
            lr=float(d["lr"]),
            best_valid_loss=float("inf") if bvl is None else float(bvl),
            rng_state=d.get("rng_state"),
        )
