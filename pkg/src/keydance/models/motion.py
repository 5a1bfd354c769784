"""
motion.py
This module defines the motion types: 147-D frames (24 joints × 6-D rotation
plus root translation), motion sequences and key-pose sets.
"""

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from pydantic import Field, field_validator, model_validator

from ..serializers.json_serializer import KeydanceBase

NUM_JOINTS = 24
ROTATION_DIM = 6
POSE_DIM = NUM_JOINTS * ROTATION_DIM
TRANSLATION_DIM = 3
FRAME_DIM = POSE_DIM + TRANSLATION_DIM
DEFAULT_FPS = 30.0

def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array

@dataclass(frozen=True)
class MotionFrame:
    """One frame: 144-D pose (joint rotations) and 3-D root translation in meters."""
    pose: np.ndarray
    translation: np.ndarray

class MotionSequence(KeydanceBase):
    """A motion clip.

    Properties:
        frames (np.ndarray): T×147 values, rotations first then translation.
        fps (float): Frames per second.
        name (Optional[str]): Clip name used in sidecars and reports.
    """
    frames: np.ndarray = Field(..., description="T×147 motion frames")
    fps: float = Field(default=DEFAULT_FPS, gt=0, description="Frames per second")
    name: Optional[str] = Field(default=None, description="Clip name")

    @field_validator('frames', mode='before')
    def validate_frames(cls, value):
        array = np.array(value, dtype=np.float64)
        if array.ndim != 2 or array.shape[1] != FRAME_DIM:
            raise ValueError(f"motion frames must be T×{FRAME_DIM}, got shape {array.shape}")
        if array.shape[0] == 0:
            raise ValueError("motion sequence must not be empty")
        if not np.all(np.isfinite(array)):
            raise ValueError("motion frames must be finite")
        return _frozen(array)

    @classmethod
    def from_parts(cls, poses: np.ndarray, translations: np.ndarray,
                   fps: float = DEFAULT_FPS, name: Optional[str] = None) -> 'MotionSequence':
        return cls(frames=np.concatenate([poses, translations], axis=1), fps=fps, name=name)

    @property
    def num_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def poses(self) -> np.ndarray:
        """T×144 rotation part."""
        return self.frames[:, :POSE_DIM]

    @property
    def translations(self) -> np.ndarray:
        return self.frames[:, POSE_DIM:]

    def frame(self, index: int) -> MotionFrame:
        return MotionFrame(pose=self.frames[index, :POSE_DIM], translation=self.frames[index, POSE_DIM:])

    def window(self, start: int, stop: int) -> 'MotionSequence':
        return MotionSequence(frames=self.frames[start:stop], fps=self.fps, name=self.name)

    def with_frames(self, frames: np.ndarray) -> 'MotionSequence':
        return MotionSequence(frames=frames, fps=self.fps, name=self.name)

class KeyPoseSet(KeydanceBase):
    """Key-pose constraints: M (frame index, 144-D pose) pairs, translation-free.

    Validation:
        - frame indices strictly increasing and non-negative
        - poses has one 144-D row per index
    """
    frame_indices: List[int] = Field(default_factory=list, description="Strictly increasing frame indices")
    poses: np.ndarray = Field(default_factory=lambda: _frozen(np.zeros((0, POSE_DIM))), description="M×144 poses")

    @field_validator('poses', mode='before')
    def validate_poses(cls, value):
        array = np.array(value, dtype=np.float64)
        if array.size == 0:
            array = array.reshape(0, POSE_DIM)
        if array.ndim != 2 or array.shape[1] != POSE_DIM:
            raise ValueError(f"key poses must be M×{POSE_DIM}, got shape {array.shape}")
        if not np.all(np.isfinite(array)):
            raise ValueError("key poses must be finite")
        return _frozen(array)

    @model_validator(mode='after')
    def validate_indices(self) -> 'KeyPoseSet':
        indices = self.frame_indices
        if any(i < 0 for i in indices):
            raise ValueError("key frame indices must be non-negative")
        if any(b <= a for a, b in zip(indices, indices[1:])):
            raise ValueError("key frame indices must be strictly increasing")
        if len(indices) != self.poses.shape[0]:
            raise ValueError(f"{len(indices)} key indices but {self.poses.shape[0]} poses")
        return self

    def __len__(self) -> int:
        return len(self.frame_indices)

    def within(self, lo: int, hi: int) -> 'KeyPoseSet':
        """Keys with lo <= t <= hi."""
        keep = [i for i, t in enumerate(self.frame_indices) if lo <= t <= hi]
        return KeyPoseSet(frame_indices=[self.frame_indices[i] for i in keep], poses=self.poses[keep])
