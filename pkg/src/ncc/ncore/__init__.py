from .tensor import Parameter, ParameterSet, uniform_init
from .layers import affine, affine_backward, embedding_lookup, rnn_step, rnn_step_backward, softmax, softmax_xent
from .optim import AdamState, adam_update, clip_grad_norm, sgd_update
from .gradcheck import grad_check

__all__ = [
    "Parameter",
    "ParameterSet",
    "uniform_init",
    "affine",
    "affine_backward",
    "embedding_lookup",
    "rnn_step",
    "rnn_step_backward",
    "softmax",
    "softmax_xent",
    "AdamState",
    "adam_update",
    "sgd_update",
    "clip_grad_norm",
    "grad_check",
]
