"""
test_transformer.py
Tests for positional tables, masks, attention and the encoder stack.
"""

import numpy as np
import pytest

from keydance.autodiff import Tensor, grad_check, ops
from keydance.config import TransformerConfig
from keydance.transformer import (
    Mask, MultiHeadAttention, TransformerEncoder, causal_mask, full_mask, scaled_dot_attention, sinusoidal_pe
)
from keydance.utils.exceptions import DimensionError, ValidationError

@pytest.fixture
def config():
    return TransformerConfig(num_layers=2, num_heads=2, d_model=8, max_len=32)

@pytest.fixture
def rng():
    return np.random.default_rng(11)

def test_sinusoidal_values():
    table = sinusoidal_pe(16, 8)
    assert (table.max_len, table.width) == (16, 8)
    np.testing.assert_allclose(table.values[0], [0, 1, 0, 1, 0, 1, 0, 1])
    assert table.values[3, 0] == pytest.approx(np.sin(3.0))
    assert table.values[3, 3] == pytest.approx(np.cos(3.0 / 10000 ** (2 / 8)))

def test_sinusoidal_validation():
    with pytest.raises(ValidationError):
        sinusoidal_pe(16, 7)
    with pytest.raises(ValidationError):
        sinusoidal_pe(16, 8).rows(17)

def test_causal_mask():
    mask = causal_mask(3)
    np.testing.assert_array_equal(mask.allowed, np.tril(np.ones((3, 3), dtype=bool)))
    assert full_mask(2).allowed.all()

def test_mask_needs_allowed_entry_per_row():
    with pytest.raises(ValidationError):
        Mask(np.array([[True, False], [False, False]]))

def test_identical_keys_average_values(rng):
    q = Tensor(rng.normal(size=(2, 4)))
    k = Tensor(np.ones((3, 4)))
    v = Tensor(rng.normal(size=(3, 5)))
    out, weights = scaled_dot_attention(q, k, v, return_weights=True)
    np.testing.assert_allclose(weights.data, np.full((2, 3), 1 / 3))
    np.testing.assert_allclose(out.data, np.tile(v.data.mean(axis=0), (2, 1)))

def test_attention_shape_checks(rng):
    with pytest.raises(DimensionError):
        scaled_dot_attention(Tensor(np.ones((2, 4))), Tensor(np.ones((3, 5))), Tensor(np.ones((3, 2))))
    with pytest.raises(DimensionError):
        scaled_dot_attention(Tensor(np.ones((2, 4))), Tensor(np.ones((3, 4))), Tensor(np.ones((3, 2))),
                             mask=causal_mask(3))

def test_multi_head_output_shape(config, rng):
    attention = MultiHeadAttention(config, rng)
    x = Tensor(rng.normal(size=(5, 8)))
    assert attention(x).shape == (5, 8)
    assert len(attention.heads(x, x)) == 2
    with pytest.raises(DimensionError):
        attention(Tensor(np.ones((5, 6))))

def test_encoder_is_permutation_equivariant_without_mask(config, rng):
    encoder = TransformerEncoder(config, rng)
    x = rng.normal(size=(6, 8))
    order = rng.permutation(6)
    out = encoder(Tensor(x)).data
    permuted = encoder(Tensor(x[order])).data
    np.testing.assert_allclose(permuted, out[order], atol=1e-10)

def test_causal_encoder_ignores_future_rows(config, rng):
    encoder = TransformerEncoder(config, rng)
    x = rng.normal(size=(6, 8))
    changed = x.copy()
    changed[4:] += 5.0
    a = encoder(Tensor(x), causal_mask(6)).data
    b = encoder(Tensor(changed), causal_mask(6)).data
    np.testing.assert_allclose(a[:4], b[:4], atol=1e-12)
    assert not np.allclose(a[4:], b[4:])

def test_zero_layer_encoder_is_identity(rng):
    encoder = TransformerEncoder(TransformerConfig(num_layers=0, num_heads=1, d_model=4), rng)
    x = Tensor(rng.normal(size=(3, 4)))
    np.testing.assert_array_equal(encoder(x).data, x.data)
    assert encoder.num_parameters() == 0

def test_encoder_parameter_names(config, rng):
    names = [name for name, _ in TransformerEncoder(config, rng).named_parameters()]
    assert names[0] == 'layers.0.attention.query.weight'
    assert 'layers.1.feed_forward_norm.bias' in names

def test_encoder_gradients(config, rng):
    encoder = TransformerEncoder(config, rng)
    x = Tensor(rng.normal(size=(5, 8)))
    direction = Tensor.constant(rng.normal(size=(5, 8)))
    error = grad_check(lambda: ops.sum(ops.mul(encoder(x, causal_mask(5)), direction)),
                       encoder.parameters(), num_samples=60, seed=2, floor=1e-6)
    assert error < 1e-4
