"""
conditioning/keypose.py
Zero-padded key-pose embedding E^(P): row (offset + t_i) holds φ(ŷ_{t_i}),
every other row is zero.
"""

from dataclasses import dataclass
from typing import FrozenSet

import numpy as np

from ..autodiff import ops
from ..autodiff.layers import LinearLayer
from ..autodiff.tensor import Tensor
from ..models.motion import KeyPoseSet, POSE_DIM
from ..utils.exceptions import DimensionError, ValidationError

@dataclass(frozen=True)
class KeyPoseEmbedding:
    matrix: Tensor
    active_positions: FrozenSet[int]

def embed_key_poses(keys: KeyPoseSet, length: int, offset: int, projection: LinearLayer) -> KeyPoseEmbedding:
    """
    Embed key poses into an L×d_model matrix.

    Args:
        keys: Key poses (frame index t_i, 144-D pose)
        length: L, the cross-modal sequence length
        offset: Sequence position of motion frame 0
        projection: φ, a 144 → d_model linear layer

    Raises:
        ValidationError: offset + t_i falls outside [0, L)
    """
    if projection.in_features != POSE_DIM:
        raise DimensionError(f"key-pose projection must take {POSE_DIM} inputs")
    positions = [offset + t for t in keys.frame_indices]
    if positions and (positions[0] < 0 or positions[-1] >= length):
        raise ValidationError(f"key pose positions {positions} outside the sequence of length {length}")
    if not positions:
        return KeyPoseEmbedding(matrix=Tensor.zeros(length, projection.out_features), active_positions=frozenset())
    embedded = projection(Tensor.constant(keys.poses))
    return KeyPoseEmbedding(
        matrix=ops.scatter_rows(embedded, positions, length),
        active_positions=frozenset(positions)
    )
