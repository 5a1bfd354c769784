"""
dance/network.py
The key-pose conditioned dance generator.

Music features and seed motion go through their own encoders; the cross
transformer sees [seed ; music] in time order plus the key-pose embedding,
the local positional embedding and the standard positional table, and the
last T rows are projected back to 147-D frames.
"""

from typing import Dict, Optional

import numpy as np

from ..autodiff import ops
from ..autodiff.layers import LinearLayer, Module
from ..autodiff.tensor import Tensor, no_grad
from ..conditioning.keypose import embed_key_poses
from ..conditioning.local_pe import local_positional_embedding
from ..config import DanceModelConfig
from ..models.motion import FRAME_DIM, POSE_DIM, KeyPoseSet, MotionSequence
from ..models.music import FEATURE_DIM, MusicFeatureSequence
from ..transformer.encoder import TransformerEncoder
from ..transformer.positional import PositionalTable, sinusoidal_pe
from ..utils.exceptions import DimensionError, ValidationError
from ..utils.logging import get_logger

logger = get_logger(__name__)

class DanceModelWeights(Module):
    """All trainable parameters plus the fixed positional tables."""

    def __init__(self, config: DanceModelConfig, seed: int = 0):
        super().__init__()
        self.config = config
        rng = np.random.default_rng(seed)
        width = config.d_model
        self.music_embedding = self.register_module('music_embedding', LinearLayer(FEATURE_DIM, width, rng))
        self.motion_embedding = self.register_module('motion_embedding', LinearLayer(FRAME_DIM, width, rng))
        self.key_embedding = self.register_module('key_embedding', LinearLayer(POSE_DIM, width, rng))
        self.music_encoder = self.register_module('music_encoder', TransformerEncoder(config.encoder, rng))
        self.motion_encoder = self.register_module('motion_encoder', TransformerEncoder(config.encoder, rng))
        self.cross_transformer = self.register_module('cross_transformer', TransformerEncoder(config.cross, rng))
        self.output_projection = self.register_module('output_projection', LinearLayer(width, FRAME_DIM, rng))
        self.positional_table: PositionalTable = sinusoidal_pe(config.cross.max_len, width)
        self.half_table: PositionalTable = sinusoidal_pe(config.cross.max_len, width // 2)

    def describe(self) -> Dict[str, int]:
        return {
            'd_model': self.config.d_model,
            'cross_layers': self.config.cross.num_layers,
            'heads': self.config.cross.num_heads,
            'encoder_layers': self.config.encoder_layers,
            'parameters': self.num_parameters(),
        }

def assemble_cross_input(motion_encoded: Tensor, music_encoded: Tensor, key_embedding: Tensor,
                         local_pe: np.ndarray, positional_table: PositionalTable) -> Tensor:
    """
    concat_time(E^M, E^A) + E^P + PE^L + PE[0..L).

    Args:
        motion_encoded: T′×d seed encoding
        music_encoded: T×d music encoding
        key_embedding: L×d zero-padded key-pose embedding
        local_pe: L×d local positional embedding
        positional_table: Standard sinusoidal table, at least L rows

    Raises:
        DimensionError: widths or lengths disagree
    """
    width = motion_encoded.shape[1]
    if music_encoded.shape[1] != width:
        raise DimensionError(f"seed width {width} and music width {music_encoded.shape[1]} differ")
    length = motion_encoded.shape[0] + music_encoded.shape[0]
    if key_embedding.shape != (length, width):
        raise DimensionError(f"key-pose embedding must be {(length, width)}, got {key_embedding.shape}")
    if local_pe.shape != (length, width):
        raise DimensionError(f"local positional embedding must be {(length, width)}, got {local_pe.shape}")
    if positional_table.width != width:
        raise DimensionError(f"positional table width {positional_table.width} differs from {width}")
    joined = ops.concat_rows([motion_encoded, music_encoded])
    offsets = local_pe + positional_table.rows(length)
    return ops.add(ops.add(joined, key_embedding), Tensor.constant(offsets))

def active_keys(keys: KeyPoseSet, seed_len: int, num_frames: int, config: DanceModelConfig) -> KeyPoseSet:
    """Keys the model conditions on: those inside the seed span are dropped unless keys_in_seed_span."""
    if keys.frame_indices and keys.frame_indices[-1] >= num_frames:
        raise ValidationError(f"key frame {keys.frame_indices[-1]} outside [0, {num_frames - 1}]")
    if config.keys_in_seed_span:
        return keys
    kept = keys.within(seed_len, num_frames - 1)
    if len(kept) != len(keys):
        logger.debug(f"Ignoring {len(keys) - len(kept)} key poses inside the seed span")
    return kept

def _encode(sequence: np.ndarray, embedding: LinearLayer, encoder: TransformerEncoder,
            positional_table: PositionalTable) -> Tensor:
    embedded = embedding(Tensor.constant(sequence))
    return encoder(ops.add(embedded, Tensor.constant(positional_table.rows(sequence.shape[0]))))

def forward_tensor(music: MusicFeatureSequence, seed: MotionSequence, keys: KeyPoseSet,
                   weights: DanceModelWeights) -> Tensor:
    """
    Predict all T frames as a tensor; recorded on the active tape, if any.

    Args:
        music: T×15 features; T fixes the generated length
        seed: T′×147 seed motion, 1 <= T′ < T
        keys: Key poses with frame indices in [0, T-1]
        weights: Model parameters

    Returns:
        T×147 prediction

    Raises:
        ValidationError: T′ >= T, T′+T above max_len or keys out of range
    """
    config = weights.config
    num_frames, seed_len = music.num_frames, seed.num_frames
    if seed_len >= num_frames:
        raise ValidationError(f"seed length {seed_len} must be shorter than the music length {num_frames}")
    length = seed_len + num_frames
    if length > config.cross.max_len:
        raise ValidationError(f"T'+T={length} exceeds max_len {config.cross.max_len}")
    keys = active_keys(keys, seed_len, num_frames, config)

    music_encoded = _encode(music.frames, weights.music_embedding, weights.music_encoder, weights.positional_table)
    motion_encoded = _encode(seed.frames, weights.motion_embedding, weights.motion_encoder, weights.positional_table)
    key_embedding = embed_key_poses(keys, length, seed_len, weights.key_embedding).matrix
    if config.use_local_pe:
        local_pe = local_positional_embedding(keys.frame_indices, length, seed_len, weights.half_table).matrix
    else:
        local_pe = np.zeros((length, config.d_model))

    cross_input = assemble_cross_input(motion_encoded, music_encoded, key_embedding, local_pe,
                                       weights.positional_table)
    hidden = weights.cross_transformer(cross_input)
    return weights.output_projection(ops.slice_rows(hidden, seed_len, length))

def forward(music: MusicFeatureSequence, seed: MotionSequence, keys: KeyPoseSet,
            weights: DanceModelWeights) -> MotionSequence:
    """Inference pass: T predicted frames, seed positions included as predicted."""
    with no_grad():
        prediction = forward_tensor(music, seed, keys, weights)
    return MotionSequence(frames=prediction.data, fps=music.fps, name=seed.name)

def generate(music: MusicFeatureSequence, seed: MotionSequence, keys: KeyPoseSet,
             weights: DanceModelWeights, name: Optional[str] = None) -> MotionSequence:
    """T frames: the seed echoed over [0, T′), predictions over [T′, T). Deterministic."""
    predicted = forward(music, seed, keys, weights)
    frames = np.array(predicted.frames)
    frames[:seed.num_frames] = seed.frames
    logger.debug(f"Generated {frames.shape[0]} frames from a {seed.num_frames}-frame seed and {len(keys)} keys")
    return MotionSequence(frames=frames, fps=music.fps, name=name or seed.name)
