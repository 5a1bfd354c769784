"""
experiments/influence.py
How far the effect of a single key pose reaches in the generated motion.
"""

from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from ..dance.network import DanceModelWeights, forward
from ..models.motion import KeyPoseSet, MotionSequence
from ..models.music import MusicFeatureSequence
from ..utils.exceptions import ValidationError

NEAR_WINDOW = 10
FAR_DISTANCE = 60

@dataclass
class InfluenceProfile:
    """Per-frame L2 change of the prediction after perturbing one key pose."""
    key_frame: int
    changes: np.ndarray
    near_window: int = NEAR_WINDOW
    far_distance: int = FAR_DISTANCE

    def _distances(self) -> np.ndarray:
        return np.abs(np.arange(self.changes.size) - self.key_frame)

    @property
    def near_change(self) -> float:
        near = self.changes[self._distances() <= self.near_window]
        return float(near.mean()) if near.size else 0.0

    @property
    def far_change(self) -> Optional[float]:
        """None when no frame is far enough from the key."""
        far = self.changes[self._distances() >= self.far_distance]
        return float(far.mean()) if far.size else None

    @property
    def ratio(self) -> Optional[float]:
        far = self.far_change
        if far is None:
            return None
        return float('inf') if far == 0.0 else self.near_change / far

    @property
    def connected(self) -> bool:
        return bool(np.any(self.changes > 0.0))

    def summary(self) -> Dict[str, Any]:
        return {
            'key_frame': self.key_frame,
            'near_change': self.near_change,
            'far_change': self.far_change,
            'ratio': self.ratio,
            'connected': self.connected,
        }

def key_influence_profile(weights: DanceModelWeights, music: MusicFeatureSequence, seed: MotionSequence,
                          keys: KeyPoseSet, key_index: int, delta: float = 0.1,
                          rng_seed: int = 0) -> InfluenceProfile:
    """
    Move key `key_index` by `delta` along a random unit direction and measure
    ‖generated_t − generated′_t‖ for every frame t.

    Raises:
        ValidationError: key_index out of range or delta not positive
    """
    if not 0 <= key_index < len(keys):
        raise ValidationError(f"key index {key_index} outside the {len(keys)} keys")
    if delta <= 0:
        raise ValidationError("perturbation size must be > 0")
    direction = np.random.default_rng(rng_seed).normal(size=keys.poses.shape[1])
    direction /= np.linalg.norm(direction)
    poses = np.array(keys.poses)
    poses[key_index] += delta * direction
    perturbed = KeyPoseSet(frame_indices=list(keys.frame_indices), poses=poses)

    baseline = forward(music, seed, keys, weights).frames
    moved = forward(music, seed, perturbed, weights).frames
    return InfluenceProfile(key_frame=keys.frame_indices[key_index],
                            changes=np.linalg.norm(moved - baseline, axis=1))
