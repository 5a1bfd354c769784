"""
test_network.py
Tests for the dance generator's forward pass and generation.
"""

import numpy as np
import pytest

from keydance.autodiff import Tape, Tensor, ops
from keydance.config import DanceModelConfig
from keydance.dance import DanceModelWeights, assemble_cross_input, forward, forward_tensor, generate
from keydance.dance.gradcheck import MODEL_FLOOR, model_grad_check, tiny_check_config
from keydance.models import FRAME_DIM, KeyPoseSet
from keydance.transformer import sinusoidal_pe
from keydance.utils.exceptions import DimensionError, ValidationError

@pytest.fixture
def weights(tiny_config):
    return DanceModelWeights(tiny_config, seed=0)

@pytest.fixture
def inputs(motion_factory, music_factory, keys_factory):
    music = music_factory(num_frames=16)
    motion = motion_factory(num_frames=16)
    keys = keys_factory(frame_indices=[8, 12])
    return music, motion.window(0, 4), keys

def test_generate_shape_and_seed_echo(weights, inputs):
    music, seed, keys = inputs
    out = generate(music, seed, keys, weights, name="take")
    assert out.frames.shape == (16, FRAME_DIM)
    np.testing.assert_array_equal(out.frames[:4], seed.frames)
    assert out.name == "take"

def test_forward_predicts_seed_span_too(weights, inputs):
    music, seed, keys = inputs
    predicted = forward(music, seed, keys, weights)
    generated = generate(music, seed, keys, weights)
    np.testing.assert_array_equal(predicted.frames[4:], generated.frames[4:])
    assert not np.allclose(predicted.frames[:4], seed.frames)

def test_generation_is_deterministic(weights, inputs):
    music, seed, keys = inputs
    first = generate(music, seed, keys, weights).frames
    second = generate(music, seed, keys, DanceModelWeights(weights.config, seed=0)).frames
    np.testing.assert_array_equal(first, second)

def test_different_init_seed_changes_output(weights, inputs):
    music, seed, keys = inputs
    other = DanceModelWeights(weights.config, seed=1)
    assert not np.allclose(generate(music, seed, keys, weights).frames[4:],
                           generate(music, seed, keys, other).frames[4:])

def test_keys_influence_output(weights, inputs):
    music, seed, keys = inputs
    with_keys = generate(music, seed, keys, weights).frames
    without = generate(music, seed, KeyPoseSet(), weights).frames
    assert not np.allclose(with_keys[4:], without[4:])

def test_keys_in_seed_span_are_ignored(weights, inputs):
    music, seed, keys = inputs
    extra = np.random.default_rng(5).normal(size=(1, keys.poses.shape[1]))
    inside = KeyPoseSet(frame_indices=[1, 8, 12], poses=np.vstack([extra, keys.poses]))
    np.testing.assert_allclose(generate(music, seed, inside, weights).frames,
                               generate(music, seed, keys, weights).frames)

def test_keys_in_seed_span_kept_on_request(inputs):
    music, seed, keys = inputs
    config = DanceModelConfig.from_preset('tiny', seed_len=4, music_len=16, keys_in_seed_span=True)
    weights = DanceModelWeights(config, seed=0)
    inside = KeyPoseSet(frame_indices=[1, 8, 12], poses=np.vstack([keys.poses[:1], keys.poses]))
    assert not np.allclose(generate(music, seed, inside, weights).frames,
                           generate(music, seed, keys, weights).frames)

def test_local_pe_ablation_changes_output(inputs):
    music, seed, keys = inputs
    with_pe = DanceModelWeights(DanceModelConfig.from_preset('tiny', seed_len=4, music_len=16), seed=0)
    without_pe = DanceModelWeights(
        DanceModelConfig.from_preset('tiny', seed_len=4, music_len=16, use_local_pe=False), seed=0
    )
    assert not np.allclose(generate(music, seed, keys, with_pe).frames,
                           generate(music, seed, keys, without_pe).frames)

def test_key_outside_music_raises(weights, inputs, keys_factory):
    music, seed, _ = inputs
    with pytest.raises(ValidationError):
        generate(music, seed, keys_factory(frame_indices=[16]), weights)

def test_seed_must_be_shorter_than_music(weights, inputs, motion_factory):
    music, _, keys = inputs
    with pytest.raises(ValidationError):
        generate(music, motion_factory(num_frames=16), keys, weights)

def test_sequence_longer_than_table(inputs, motion_factory, music_factory):
    config = DanceModelConfig.from_preset('tiny', seed_len=4, music_len=16, max_len=24)
    weights = DanceModelWeights(config, seed=0)
    with pytest.raises(ValidationError):
        generate(music_factory(num_frames=30), motion_factory(num_frames=4), KeyPoseSet(), weights)

def test_forward_tensor_records_on_tape(weights, inputs):
    music, seed, keys = inputs
    weights.zero_grad()
    with Tape() as tape:
        prediction = forward_tensor(music, seed, keys, weights)
        loss = ops.sum(ops.square(prediction))
    tape.backward(loss)
    assert prediction.shape == (16, FRAME_DIM)
    assert np.any(weights.key_embedding.weight.grad != 0.0)
    assert np.any(weights.music_encoder.parameters()[0].grad != 0.0)

def test_assemble_cross_input_checks_shapes():
    table = sinusoidal_pe(32, 8)
    motion = Tensor(np.ones((2, 8)))
    music = Tensor(np.ones((3, 8)))
    out = assemble_cross_input(motion, music, Tensor(np.zeros((5, 8))), np.zeros((5, 8)), table)
    np.testing.assert_allclose(out.data, 1.0 + table.values[:5])
    with pytest.raises(DimensionError):
        assemble_cross_input(motion, music, Tensor(np.zeros((4, 8))), np.zeros((5, 8)), table)
    with pytest.raises(DimensionError):
        assemble_cross_input(motion, Tensor(np.ones((3, 4))), Tensor(np.zeros((5, 8))), np.zeros((5, 8)), table)

def test_parameter_layout(weights):
    names = [name for name, _ in weights.named_parameters()]
    assert names[0] == 'music_embedding.weight'
    assert names[-1] == 'output_projection.bias'
    assert any(name.startswith('cross_transformer.layers.1.') for name in names)
    assert weights.describe()['parameters'] == weights.num_parameters()

def test_full_model_gradient_check():
    config = tiny_check_config(num_frames=12, seed_len=3, num_keys=2)
    assert model_grad_check(config, seed=0, num_samples=40, floor=MODEL_FLOOR) < 1e-3

def test_zeroed_key_path_ignores_keys(inputs):
    music, seed, keys = inputs
    config = DanceModelConfig.from_preset('tiny', seed_len=4, music_len=16, use_local_pe=False)
    weights = DanceModelWeights(config, seed=0)
    weights.key_embedding.weight.data[...] = 0.0
    weights.key_embedding.bias.data[...] = 0.0
    np.testing.assert_array_equal(generate(music, seed, keys, weights).frames,
                                  generate(music, seed, KeyPoseSet(), weights).frames)
