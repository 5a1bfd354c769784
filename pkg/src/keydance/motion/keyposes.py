"""
motion/keyposes.py
Key-pose extraction and key-position sampling.
"""

from enum import Enum
from typing import List, Optional, Sequence

import numpy as np

from ..models.motion import KeyPoseSet, MotionSequence, POSE_DIM
from ..utils.exceptions import ValidationError

class KeySamplingStrategy(Enum):
    """Key position sampling strategies."""
    UNIFORM = "uniform"
    RANDOM = "random"
    BEAT_ALIGNED = "beat_aligned"

def extract_key_poses(motion: MotionSequence, positions: Sequence[int]) -> KeyPoseSet:
    """Copy the pose part (translation dropped) of the frames at `positions`."""
    positions = [int(p) for p in positions]
    if any(b <= a for a, b in zip(positions, positions[1:])):
        raise ValidationError("key positions must be strictly increasing")
    if positions and (positions[0] < 0 or positions[-1] >= motion.num_frames):
        raise ValidationError(f"key positions outside [0, {motion.num_frames - 1}]")
    return KeyPoseSet(frame_indices=positions, poses=motion.frames[positions, :POSE_DIM])

def _evenly_spaced(count: int, total: int) -> np.ndarray:
    """`count` strictly increasing offsets in [0, total), centered in equal bins."""
    return np.floor((np.arange(count) + 0.5) * total / count).astype(np.int64)

def sample_key_positions(num_frames: int,
                         seed_len: int,
                         num_keys: int,
                         strategy: KeySamplingStrategy = KeySamplingStrategy.UNIFORM,
                         rng: Optional[np.random.Generator] = None,
                         beats: Optional[Sequence[int]] = None,
                         allow_seed_span: bool = False) -> List[int]:
    """
    Pick key frame indices inside the generated span [T′, T−1].

    Args:
        num_frames: T
        seed_len: T′
        num_keys: M
        strategy: uniform, random or beat_aligned
        rng: Generator for the random strategy
        beats: Beat frames for the beat_aligned strategy
        allow_seed_span: Sample from [0, T−1] instead

    Returns:
        M strictly increasing indices

    Raises:
        ValidationError: M exceeds the available frames, or too few beats
    """
    strategy = KeySamplingStrategy(strategy)
    lo = 0 if allow_seed_span else seed_len
    hi = num_frames - 1
    available = hi - lo + 1
    if num_keys < 0:
        raise ValidationError("number of key poses must be >= 0")
    if num_keys > max(available, 0):
        raise ValidationError(f"{num_keys} key poses do not fit in {max(available, 0)} frames")
    if num_keys == 0:
        return []

    if strategy is KeySamplingStrategy.UNIFORM:
        return [int(lo + offset) for offset in _evenly_spaced(num_keys, available)]

    if strategy is KeySamplingStrategy.RANDOM:
        rng = rng if rng is not None else np.random.default_rng()
        chosen = rng.choice(available, size=num_keys, replace=False)
        return [int(lo + offset) for offset in np.sort(chosen)]

    candidates = sorted({int(b) for b in (beats or []) if lo <= b <= hi})
    if len(candidates) < num_keys:
        raise ValidationError(f"only {len(candidates)} beats inside the generated span, {num_keys} requested")
    return [candidates[i] for i in _evenly_spaced(num_keys, len(candidates))]
