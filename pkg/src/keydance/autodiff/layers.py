"""
autodiff/layers.py
Parameter containers: a small Module base class, linear and layer-norm layers.
"""

from typing import Dict, Iterator, List, Mapping, Tuple

import numpy as np

from ..utils.exceptions import DimensionError, FormatError, UsageError
from . import ops
from .tensor import Tensor

class Module:
    """Base class for anything that owns parameters.

    Parameters and child modules are kept in insertion order so that
    named_parameters() (and therefore checkpoints) are deterministic.
    """

    def __init__(self):
        self._parameters: Dict[str, Tensor] = {}
        self._modules: Dict[str, 'Module'] = {}

    def register_parameter(self, name: str, value: np.ndarray) -> Tensor:
        if name in self._parameters or name in self._modules:
            raise UsageError(f"parameter {name!r} registered twice")
        tensor = Tensor(value, requires_grad=True, name=name)
        self._parameters[name] = tensor
        return tensor

    def register_module(self, name: str, module: 'Module') -> 'Module':
        if name in self._parameters or name in self._modules:
            raise UsageError(f"submodule {name!r} registered twice")
        self._modules[name] = module
        return module

    def named_parameters(self, prefix: str = '') -> Iterator[Tuple[str, Tensor]]:
        seen = set()
        for name, tensor in self._iter_parameters(prefix):
            if id(tensor) in seen:
                raise UsageError(f"parameter {name} is shared by two modules")
            seen.add(id(tensor))
            yield name, tensor

    def _iter_parameters(self, prefix: str) -> Iterator[Tuple[str, Tensor]]:
        for name, tensor in self._parameters.items():
            yield f"{prefix}{name}", tensor
        for name, module in self._modules.items():
            yield from module._iter_parameters(f"{prefix}{name}.")

    def parameters(self) -> List[Tensor]:
        return [tensor for _, tensor in self.named_parameters()]

    def num_parameters(self) -> int:
        return int(np.sum([tensor.data.size for tensor in self.parameters()]))

    def zero_grad(self) -> None:
        for tensor in self.parameters():
            tensor.zero_grad()

    def state_dict(self) -> Dict[str, np.ndarray]:
        return {name: tensor.data.copy() for name, tensor in self.named_parameters()}

    def load_state_dict(self, state: Mapping[str, np.ndarray]) -> None:
        own = dict(self.named_parameters())
        missing = sorted(set(own) - set(state))
        unexpected = sorted(set(state) - set(own))
        if missing or unexpected:
            raise FormatError(f"state mismatch: missing={missing[:5]} unexpected={unexpected[:5]}")
        for name, tensor in own.items():
            value = np.asarray(state[name], dtype=np.float64)
            if value.shape != tensor.shape:
                raise DimensionError(f"{name}: expected shape {tensor.shape}, got {value.shape}")
            tensor.data[...] = value
            tensor.grad = None

class LinearLayer(Module):
    """y = x Wᵀ + b with W[out×in], initialised uniform(±1/√fan_in)."""

    def __init__(self, in_features: int, out_features: int, rng: np.random.Generator):
        super().__init__()
        self.in_features = in_features
        self.out_features = out_features
        bound = 1.0 / np.sqrt(in_features)
        self.weight = self.register_parameter('weight', rng.uniform(-bound, bound, (out_features, in_features)))
        self.bias = self.register_parameter('bias', rng.uniform(-bound, bound, (out_features,)))

    def __call__(self, x: Tensor) -> Tensor:
        if x.data.ndim != 2 or x.shape[1] != self.in_features:
            raise DimensionError(f"linear layer expects [T×{self.in_features}], got {x.shape}")
        return ops.linear(x, self.weight, self.bias)

class LayerNorm(Module):
    def __init__(self, width: int, eps: float = 1e-5):
        super().__init__()
        self.eps = eps
        self.gain = self.register_parameter('gain', np.ones(width))
        self.bias = self.register_parameter('bias', np.zeros(width))

    def __call__(self, x: Tensor) -> Tensor:
        return ops.layer_norm(x, self.gain, self.bias, self.eps)
