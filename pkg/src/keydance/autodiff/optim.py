"""
autodiff/optim.py
Adam with bias correction.

    m_t = β1·m + (1-β1)·g          v_t = β2·v + (1-β2)·g²
    θ  -= lr · m̂ / (√v̂ + ε)        m̂ = m_t/(1-β1^t), v̂ = v_t/(1-β2^t)
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from ..utils.exceptions import DimensionError, UsageError
from .tensor import Tensor

@dataclass
class AdamState:
    """Moment buffers and hyperparameters, keyed by parameter name."""
    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)

def adam_step(params: Iterable[Tuple[str, Tensor]], state: AdamState, lr: Optional[float] = None) -> AdamState:
    """Apply one Adam update in place to every named parameter.

    Args:
        params: (name, tensor) pairs, e.g. module.named_parameters()
        state: Optimizer state, mutated
        lr: Overrides state.lr for this step (learning-rate schedules)

    Raises:
        UsageError: A parameter has no gradient
    """
    params = list(params)
    for name, tensor in params:
        if tensor.grad is None:
            raise UsageError(f"parameter {name} has no gradient; call backward first")
        if tensor.grad.shape != tensor.shape:
            raise DimensionError(f"gradient of {name} has shape {tensor.grad.shape}, expected {tensor.shape}")

    step_lr = state.lr if lr is None else lr
    state.step += 1
    correction1 = 1.0 - state.beta1 ** state.step
    correction2 = 1.0 - state.beta2 ** state.step
    for name, tensor in params:
        grad = tensor.grad
        m = state.m.get(name)
        v = state.v.get(name)
        if m is None:
            m = state.m[name] = np.zeros_like(tensor.data)
            v = state.v[name] = np.zeros_like(tensor.data)
        m *= state.beta1
        m += (1.0 - state.beta1) * grad
        v *= state.beta2
        v += (1.0 - state.beta2) * grad * grad
        tensor.data -= step_lr * (m / correction1) / (np.sqrt(v / correction2) + state.eps)
    return state
