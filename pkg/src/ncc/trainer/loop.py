"""Training loop: stop predicate, gradient accumulation, deterministic
multi-worker gradient computation, and exact checkpoint/resume.

A task object supplies the data and the gradient math:

  task.model.params                    ParameterSet being trained
  task.make_batches(rng) -> [batch]    seeded, shuffled micro-batches
  task.compute_grads(batch)            -> (loss_sum, weight, [grad_dict, ...])

Gradient dicts are summed left-to-right in micro-batch order (workers reduce
in ascending index), then divided once by the total weight.  Because each
dict is itself built by a left fold over rows, splitting an update window
into micro-batches or recombining them yields bit-identical updates.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import NonFiniteLoss
from ..ncore import AdamState, adam_update, clip_grad_norm
from .checkpoint import load_checkpoint, save_checkpoint
from .config import TrainConfig, TrainState, config_digest

logger = logging.getLogger(__name__)


@dataclass
class TrainReport:
    epoch_losses: list[float] = field(default_factory=list)
    num_updates: int = 0
    wall_time: float = 0.0
    checkpoint_path: str | None = None


def should_continue(state: TrainState, cfg: TrainConfig) -> bool:
    """All three stop conditions must still hold for training to continue."""
    return (
        state.lr > cfg.min_lr
        and state.epoch + 1 <= cfg.max_epoch
        and state.num_updates < cfg.max_update
    )


def _optimizer_tensors(adam: AdamState) -> dict[str, np.ndarray]:
    out = {}
    for name, m in adam.m.items():
        out[f"adam.m.{name}"] = m
    for name, v in adam.v.items():
        out[f"adam.v.{name}"] = v
    return out


def _write_checkpoint(path: Path, task, state: TrainState, adam: AdamState, digest: str) -> None:
    tensors = {p.name: p.value for p in task.model.params}
    tensors.update(_optimizer_tensors(adam))
    save_checkpoint(path, tensors, state, model_name=getattr(task, "model_name", ""),
                    config_digest=digest, extra={"adam_t": adam.t})


def _restore(path: Path, task, adam: AdamState, expect_digest: str) -> TrainState:
    tensors, state, meta = load_checkpoint(path, expect_digest=expect_digest)
    for p in task.model.params:
        np.copyto(p.value, tensors[p.name])
        np.copyto(adam.m[p.name], tensors[f"adam.m.{p.name}"])
        np.copyto(adam.v[p.name], tensors[f"adam.v.{p.name}"])
    adam.t = int(meta["extra"]["adam_t"])
    return state


def train(task, cfg: TrainConfig, resume_from: str | Path | None = None) -> TrainReport:
    """Run the training loop until the stop predicate fails.

    Checkpoints go to ``cfg.paths['save_dir']/checkpoint_last.ckpt`` when a
    save directory is configured; resuming from such a checkpoint continues
    the loss trajectory exactly as an uninterrupted run.
    """
    t0 = time.monotonic()
    params = task.model.params
    adam = AdamState(params, lr=cfg.lr)
    digest = config_digest(cfg)
    simple = cfg.trainer_kind == "simple"
    update_freq = 1 if simple else cfg.update_freq
    workers = 1 if simple else cfg.workers

    rng = np.random.default_rng(cfg.seed)
    state = TrainState(epoch=0, num_updates=0, lr=cfg.lr)
    if resume_from is not None:
        state = _restore(Path(resume_from), task, adam, digest)
        if state.rng_state is not None:
            rng.bit_generator.state = state.rng_state

    save_dir = cfg.paths.get("save_dir")
    ckpt_path = Path(save_dir) / "checkpoint_last.ckpt" if save_dir else None
    if ckpt_path is not None:
        ckpt_path.parent.mkdir(parents=True, exist_ok=True)

    report = TrainReport()
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        while should_continue(state, cfg):
            batches = task.make_batches(rng)
            epoch_loss = 0.0
            epoch_weight = 0
            i = 0
            while i < len(batches) and state.num_updates < cfg.max_update:
                group = batches[i : i + update_freq]
                i += update_freq
                if pool is not None:
                    results = list(pool.map(task.compute_grads, group))
                else:
                    results = [task.compute_grads(mb) for mb in group]
                acc = {p.name: np.zeros_like(p.value) for p in params}
                total_loss = 0.0
                total_weight = 0
                for loss_sum, weight, grad_units in results:
                    if not math.isfinite(loss_sum):
                        raise NonFiniteLoss(
                            f"non-finite loss at update {state.num_updates}; "
                            f"last checkpoint kept at {ckpt_path}"
                        )
                    total_loss += loss_sum
                    total_weight += weight
                    for unit in grad_units:
                        for name, g in unit.items():
                            acc[name] += g
                if total_weight == 0:
                    continue
                params.set_grads({name: g / total_weight for name, g in acc.items()})
                clip_grad_norm(params, cfg.clip_norm)
                adam_update(params, adam, lr=state.lr)
                state.num_updates += 1
                epoch_loss += total_loss
                epoch_weight += total_weight
            state.epoch += 1
            state.lr *= cfg.lr_shrink
            report.epoch_losses.append(epoch_loss / max(1, epoch_weight))
            if ckpt_path is not None:
                state.rng_state = rng.bit_generator.state
                _write_checkpoint(ckpt_path, task, state, adam, digest)
    finally:
        if pool is not None:
            pool.shutdown()

    report.num_updates = state.num_updates
    report.wall_time = time.monotonic() - t0
    report.checkpoint_path = str(ckpt_path) if ckpt_path is not None else None
    return report
