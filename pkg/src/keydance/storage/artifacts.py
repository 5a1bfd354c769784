"""
storage/artifacts.py
Motion and music artifacts: a tensor file plus a JSON sidecar next to it
(`clip.mdrt` + `clip.mdrt.json`), and key-pose request files.
"""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from pydantic import ValidationError as PydanticValidationError

from ..models.motion import FRAME_DIM, POSE_DIM, KeyPoseSet, MotionSequence
from ..models.music import MusicFeatureSequence
from ..serializers.json_serializer import KeydanceSerializer
from ..utils.exceptions import FormatError, ValidationError
from ..utils.logging import get_logger
from .tensor_file import read_tensor, write_tensor

logger = get_logger(__name__)

PathLike = Union[str, Path]

def sidecar_path(path: PathLike) -> Path:
    path = Path(path)
    return path.with_suffix(path.suffix + '.json')

def _write_sidecar(path: PathLike, data: Dict[str, Any]) -> None:
    sidecar_path(path).write_text(KeydanceSerializer.to_json_string(data, indent=2) + '\n')

def _read_sidecar(path: PathLike) -> Dict[str, Any]:
    sidecar = sidecar_path(path)
    if not sidecar.exists():
        raise FormatError(f"missing sidecar {sidecar}")
    try:
        data = json.loads(sidecar.read_text())
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON in {sidecar}: {e}")
    if not isinstance(data, dict):
        raise FormatError(f"{sidecar} must hold a JSON object")
    return data

def save_motion(path: PathLike, motion: MotionSequence) -> Path:
    path = write_tensor(path, motion.frames)
    _write_sidecar(path, {'fps': motion.fps, 'name': motion.name})
    logger.debug(f"Saved motion {motion.name!r} ({motion.num_frames} frames) to {path}")
    return path

def load_motion(path: PathLike) -> MotionSequence:
    frames = read_tensor(path)
    meta = _read_sidecar(path)
    try:
        return MotionSequence(frames=frames, fps=meta.get('fps', 30.0), name=meta.get('name'))
    except PydanticValidationError as e:
        raise ValidationError(f"{path}: {e}")

def save_music(path: PathLike, music: MusicFeatureSequence) -> Path:
    path = write_tensor(path, music.frames)
    _write_sidecar(path, {'fps': music.fps, 'beat_frames': music.beat_frames})
    logger.debug(f"Saved music features ({music.num_frames} frames) to {path}")
    return path

def load_music(path: PathLike) -> MusicFeatureSequence:
    frames = read_tensor(path)
    meta = _read_sidecar(path)
    try:
        return MusicFeatureSequence(frames=frames, fps=meta.get('fps', 30.0), beat_frames=meta.get('beat_frames'))
    except PydanticValidationError as e:
        raise ValidationError(f"{path}: {e}")

def _pose_from_file(path: Path) -> np.ndarray:
    values = read_tensor(path).reshape(-1)
    if values.size == FRAME_DIM:
        values = values[:POSE_DIM]
    if values.size != POSE_DIM:
        raise FormatError(f"{path}: key pose must hold {POSE_DIM} values, found {values.size}")
    return values

def load_keys(path: PathLike, reference: Optional[MotionSequence] = None) -> KeyPoseSet:
    """
    Read a key-pose request file.

    The file is a JSON list (or {"keys": [...]}) of entries
    {"frame": t, "pose_file": "pose.mdrt"} or {"frame": t, "from_gt": true}.
    Pose files are resolved relative to the request file; from_gt copies the
    pose at frame t of `reference`.

    Raises:
        FormatError: malformed entries
        ValidationError: from_gt without a reference, or a frame outside it
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise FormatError(f"cannot read key file {path}: {e}")
    entries = data.get('keys') if isinstance(data, dict) else data
    if not isinstance(entries, list):
        raise FormatError(f"{path}: expected a list of key entries")

    pairs = []
    for entry in entries:
        frame = entry.get('frame') if isinstance(entry, dict) else None
        if not isinstance(frame, int) or isinstance(frame, bool):
            raise FormatError(f"{path}: every key needs an integer 'frame', got {entry!r}")
        if entry.get('from_gt'):
            if reference is None:
                raise ValidationError("key requests pose from ground truth but no reference motion was given")
            if not 0 <= frame < reference.num_frames:
                raise ValidationError(f"key frame {frame} outside the reference motion")
            pose = reference.poses[frame]
        elif 'pose_file' in entry:
            pose = _pose_from_file(path.parent / entry['pose_file'])
        else:
            raise FormatError(f"{path}: key at frame {frame} needs 'pose_file' or 'from_gt'")
        pairs.append((frame, pose))

    pairs.sort(key=lambda pair: pair[0])
    try:
        return KeyPoseSet(frame_indices=[f for f, _ in pairs],
                          poses=np.stack([p for _, p in pairs]) if pairs else np.zeros((0, POSE_DIM)))
    except PydanticValidationError as e:
        raise ValidationError(f"{path}: {e}")

def save_keys(path: PathLike, frames: list) -> Path:
    """Write a from_gt key request for the given frames."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(KeydanceSerializer.to_json_string(
        {'keys': [{'frame': int(f), 'from_gt': True} for f in frames]}, indent=2) + '\n')
    return path
