"""
Minimal dense-tensor engine: tape-based reverse-mode differentiation,
gradient checking and Adam.
"""

from .tensor import Tensor, Tape, backward, no_grad, active_tape
from .layers import Module, LinearLayer, LayerNorm
from .optim import AdamState, adam_step
from .gradcheck import grad_check, check_ops
from . import ops

__all__ = [
    'Tensor', 'Tape', 'backward', 'no_grad', 'active_tape',
    'Module', 'LinearLayer', 'LayerNorm',
    'AdamState', 'adam_step',
    'grad_check', 'check_ops',
    'ops'
]
