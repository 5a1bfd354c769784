"""
transformer/attention.py
Masks, scaled dot-product attention and the multi-head wrapper.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple, Union

import numpy as np

from ..autodiff import ops
from ..autodiff.layers import LinearLayer, Module
from ..autodiff.tensor import Tensor
from ..config import TransformerConfig
from ..utils.exceptions import DimensionError, ValidationError

@dataclass(frozen=True)
class Mask:
    """T×T boolean; True means position i may attend to position j."""
    allowed: np.ndarray

    def __post_init__(self):
        allowed = np.asarray(self.allowed, dtype=bool)
        if allowed.ndim != 2:
            raise ValidationError(f"mask must be 2-D, got shape {allowed.shape}")
        if not np.all(allowed.any(axis=1)):
            raise ValidationError("every mask row needs at least one allowed entry")
        object.__setattr__(self, 'allowed', allowed)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.allowed.shape

def causal_mask(length: int) -> Mask:
    """Allow (i, j) iff j <= i."""
    if length < 1:
        raise ValidationError("mask length must be >= 1")
    return Mask(np.tril(np.ones((length, length), dtype=bool)))

def full_mask(length: int) -> Mask:
    if length < 1:
        raise ValidationError("mask length must be >= 1")
    return Mask(np.ones((length, length), dtype=bool))

def scaled_dot_attention(q: Tensor, k: Tensor, v: Tensor, mask: Optional[Mask] = None,
                         return_weights: bool = False) -> Union[Tensor, Tuple[Tensor, Tensor]]:
    """O = softmax(q kᵀ / √D + mask) v on already-projected q, k, v."""
    if q.data.ndim != 2 or k.data.ndim != 2 or v.data.ndim != 2:
        raise DimensionError("attention inputs must be 2-D")
    if q.shape[1] != k.shape[1] or k.shape[0] != v.shape[0]:
        raise DimensionError(f"attention shapes do not line up: q{q.shape} k{k.shape} v{v.shape}")
    if mask is not None and mask.shape != (q.shape[0], k.shape[0]):
        raise DimensionError(f"mask shape {mask.shape} does not match {(q.shape[0], k.shape[0])}")
    logits = ops.scale(ops.matmul(q, ops.transpose(k)), 1.0 / np.sqrt(q.shape[1]))
    weights = ops.softmax_rows(logits, None if mask is None else mask.allowed)
    out = ops.matmul(weights, v)
    return (out, weights) if return_weights else out

class MultiHeadAttention(Module):
    """φ_q, φ_k, φ_v (sliced per head), then the output projection."""

    def __init__(self, config: TransformerConfig, rng: np.random.Generator):
        super().__init__()
        self.num_heads = config.num_heads
        self.head_dim = config.head_dim
        width = config.d_model
        self.query = self.register_module('query', LinearLayer(width, width, rng))
        self.key = self.register_module('key', LinearLayer(width, width, rng))
        self.value = self.register_module('value', LinearLayer(width, width, rng))
        self.output = self.register_module('output', LinearLayer(width, width, rng))

    def heads(self, x_q: Tensor, x_kv: Tensor, mask: Optional[Mask] = None) -> List[Tensor]:
        """Per-head attention outputs before concatenation."""
        q, k, v = self.query(x_q), self.key(x_kv), self.value(x_kv)
        outputs = []
        for head in range(self.num_heads):
            lo, hi = head * self.head_dim, (head + 1) * self.head_dim
            outputs.append(scaled_dot_attention(
                ops.slice_cols(q, lo, hi), ops.slice_cols(k, lo, hi), ops.slice_cols(v, lo, hi), mask
            ))
        return outputs

    def __call__(self, x_q: Tensor, x_kv: Optional[Tensor] = None, mask: Optional[Mask] = None) -> Tensor:
        x_kv = x_q if x_kv is None else x_kv
        if x_q.shape[1] != self.num_heads * self.head_dim or x_kv.shape[1] != x_q.shape[1]:
            raise DimensionError(f"attention expects width {self.num_heads * self.head_dim}")
        heads = self.heads(x_q, x_kv, mask)
        merged = heads[0] if len(heads) == 1 else ops.concat_cols(heads)
        return self.output(merged)

def multi_head_attention(x_q: Tensor, x_kv: Optional[Tensor], weights: MultiHeadAttention,
                         mask: Optional[Mask] = None) -> Tensor:
    return weights(x_q, x_kv, mask)
