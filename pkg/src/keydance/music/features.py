"""
music/features.py
Assembling the 15-D music representation and reading beats off it.
"""

import numpy as np

from ..models.motion import DEFAULT_FPS
from ..models.music import (
    BEAT_CHANNEL, CHROMA_DIM, DOWNBEAT_DIM, ONSET_DIM,
    BeatAnnotation, MusicFeatureSequence
)
from ..utils.exceptions import ValidationError

DEFAULT_BEAT_THRESHOLD = 0.5

def _columns(name: str, values, width: int) -> np.ndarray:
    array = np.asarray(values, dtype=np.float64)
    if array.ndim == 1 and width == 1:
        array = array.reshape(-1, 1)
    if array.ndim != 2 or array.shape[1] != width:
        raise ValidationError(f"{name} must be T×{width}, got shape {array.shape}")
    return array

def assemble_features(chroma, downbeat, onset, fps: float = DEFAULT_FPS) -> MusicFeatureSequence:
    """Concatenate chroma[0..12), downbeat[12..14) and onset[14] per frame."""
    parts = [
        _columns('chroma', chroma, CHROMA_DIM),
        _columns('downbeat', downbeat, DOWNBEAT_DIM),
        _columns('onset', onset, ONSET_DIM),
    ]
    lengths = {part.shape[0] for part in parts}
    if len(lengths) != 1:
        raise ValidationError(f"feature lengths differ: {[part.shape[0] for part in parts]}")
    try:
        return MusicFeatureSequence(frames=np.concatenate(parts, axis=1), fps=fps)
    except ValueError as e:
        raise ValidationError(str(e))

def musical_beats(features: MusicFeatureSequence, threshold: float = DEFAULT_BEAT_THRESHOLD) -> BeatAnnotation:
    """Frames whose beat-flag channel exceeds `threshold`."""
    if threshold < 0:
        raise ValidationError("beat threshold must be >= 0")
    frames = np.flatnonzero(features.frames[:, BEAT_CHANNEL] > threshold)
    return BeatAnnotation(beat_frames=[int(f) for f in frames], num_frames=features.num_frames)
