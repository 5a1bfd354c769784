"""
music.py
This module defines the 15-D per-frame music representation
(12 chroma + beat flag + downbeat flag + onset strength) and beat annotations.
"""

from typing import List, Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from ..serializers.json_serializer import KeydanceBase
from .motion import DEFAULT_FPS

CHROMA_DIM = 12
DOWNBEAT_DIM = 2
ONSET_DIM = 1
FEATURE_DIM = CHROMA_DIM + DOWNBEAT_DIM + ONSET_DIM
BEAT_CHANNEL = 12
DOWNBEAT_CHANNEL = 13
ONSET_CHANNEL = 14

def _strictly_increasing(values: List[int]) -> bool:
    return all(b > a for a, b in zip(values, values[1:]))

class MusicFeatureSequence(KeydanceBase):
    """Per-frame music features.

    Properties:
        frames (np.ndarray): T×15; chroma is clamped to [0, 1] on ingestion.
        fps (float): Frames per second, matches the paired motion.
        beat_frames (Optional[List[int]]): Beat metadata from the dataset, if any.
    """
    frames: np.ndarray = Field(..., description="T×15 feature frames")
    fps: float = Field(default=DEFAULT_FPS, gt=0, description="Frames per second")
    beat_frames: Optional[List[int]] = Field(default=None, description="Beat frames from metadata")

    @field_validator('frames', mode='before')
    def validate_frames(cls, value):
        array = np.array(value, dtype=np.float64)
        if array.ndim != 2 or array.shape[1] != FEATURE_DIM:
            raise ValueError(f"music features must be T×{FEATURE_DIM}, got shape {array.shape}")
        if array.shape[0] == 0:
            raise ValueError("music feature sequence must not be empty")
        if not np.all(np.isfinite(array)):
            raise ValueError("music features must be finite")
        array[:, :CHROMA_DIM] = np.clip(array[:, :CHROMA_DIM], 0.0, 1.0)
        array.flags.writeable = False
        return array

    @model_validator(mode='after')
    def validate_beats(self) -> 'MusicFeatureSequence':
        if self.beat_frames is not None:
            if not _strictly_increasing(self.beat_frames):
                raise ValueError("beat frames must be strictly increasing")
            if self.beat_frames and (self.beat_frames[0] < 0 or self.beat_frames[-1] >= self.num_frames):
                raise ValueError("beat frames outside the sequence")
        return self

    @property
    def num_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def chroma(self) -> np.ndarray:
        return self.frames[:, :CHROMA_DIM]

    @property
    def downbeat(self) -> np.ndarray:
        return self.frames[:, CHROMA_DIM:CHROMA_DIM + DOWNBEAT_DIM]

    @property
    def onset(self) -> np.ndarray:
        return self.frames[:, ONSET_CHANNEL:]

    def window(self, start: int, stop: int) -> 'MusicFeatureSequence':
        beats = None
        if self.beat_frames is not None:
            beats = [b - start for b in self.beat_frames if start <= b < stop]
        return MusicFeatureSequence(frames=self.frames[start:stop], fps=self.fps, beat_frames=beats)

class BeatAnnotation(KeydanceBase):
    """Musical beat positions (frame indices)."""
    beat_frames: List[int] = Field(default_factory=list, description="Strictly increasing beat frames")
    num_frames: Optional[int] = Field(default=None, ge=1, description="Length of the annotated sequence")

    @model_validator(mode='after')
    def validate_frames(self) -> 'BeatAnnotation':
        if not _strictly_increasing(self.beat_frames):
            raise ValueError("beat frames must be strictly increasing")
        if self.beat_frames and self.beat_frames[0] < 0:
            raise ValueError("beat frames must be non-negative")
        if self.num_frames is not None and self.beat_frames and self.beat_frames[-1] >= self.num_frames:
            raise ValueError("beat frames outside the sequence")
        return self

    def __len__(self) -> int:
        return len(self.beat_frames)
