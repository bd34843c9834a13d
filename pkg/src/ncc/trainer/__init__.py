from .config import TrainConfig, TrainState, config_digest
from .checkpoint import save_checkpoint, load_checkpoint
from .loop import should_continue, train, TrainReport

__all__ = [
    "TrainConfig",
    "TrainState",
    "config_digest",
    "save_checkpoint",
    "load_checkpoint",
    "should_continue",
    "train",
    "TrainReport",
]
