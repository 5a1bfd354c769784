"""
transformer/encoder.py
Post-norm encoder stack: x → LN(x + MHA(x)) → LN(x + FF(x)), FF = W2·GELU(W1·x).
"""

from typing import List, Optional

import numpy as np

from ..autodiff import ops
from ..autodiff.layers import LayerNorm, LinearLayer, Module
from ..autodiff.tensor import Tensor
from ..config import TransformerConfig
from ..utils.exceptions import DimensionError
from .attention import Mask, MultiHeadAttention

class FeedForward(Module):
    def __init__(self, config: TransformerConfig, rng: np.random.Generator):
        super().__init__()
        self.inner = self.register_module('inner', LinearLayer(config.d_model, config.ff_dim, rng))
        self.outer = self.register_module('outer', LinearLayer(config.ff_dim, config.d_model, rng))

    def __call__(self, x: Tensor) -> Tensor:
        return self.outer(ops.gelu(self.inner(x)))

class EncoderLayer(Module):
    def __init__(self, config: TransformerConfig, rng: np.random.Generator):
        super().__init__()
        self.attention = self.register_module('attention', MultiHeadAttention(config, rng))
        self.attention_norm = self.register_module('attention_norm', LayerNorm(config.d_model))
        self.feed_forward = self.register_module('feed_forward', FeedForward(config, rng))
        self.feed_forward_norm = self.register_module('feed_forward_norm', LayerNorm(config.d_model))

    def __call__(self, x: Tensor, mask: Optional[Mask] = None) -> Tensor:
        x = self.attention_norm(ops.add(x, self.attention(x, x, mask)))
        return self.feed_forward_norm(ops.add(x, self.feed_forward(x)))

class TransformerEncoder(Module):
    """num_layers encoder layers; zero layers is the identity."""

    def __init__(self, config: TransformerConfig, rng: np.random.Generator):
        super().__init__()
        self.config = config
        self.layers: List[EncoderLayer] = [
            self.register_module(f'layers.{i}', EncoderLayer(config, rng)) for i in range(config.num_layers)
        ]

    def __call__(self, x: Tensor, mask: Optional[Mask] = None) -> Tensor:
        if x.data.ndim != 2 or x.shape[1] != self.config.d_model:
            raise DimensionError(f"encoder expects [T×{self.config.d_model}], got {x.shape}")
        for layer in self.layers:
            x = layer(x, mask)
        return x

def encoder_forward(x: Tensor, weights: TransformerEncoder, mask: Optional[Mask] = None) -> Tensor:
    return weights(x, mask)
