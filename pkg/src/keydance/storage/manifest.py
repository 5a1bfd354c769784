"""
storage/manifest.py
Dataset manifests on disk. Sample file paths are relative to the manifest.
"""

import json
from pathlib import Path
from typing import Tuple, Union

from pydantic import ValidationError as PydanticValidationError

from ..models.dataset import DatasetManifest, SampleEntry
from ..models.motion import MotionSequence
from ..models.music import MusicFeatureSequence
from ..utils.exceptions import FormatError, ValidationError
from ..utils.logging import get_logger
from .artifacts import load_motion, load_music

logger = get_logger(__name__)

MANIFEST_NAME = 'manifest.json'

def save_manifest(path: Union[str, Path], manifest: DatasetManifest) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(manifest.model_dump_json(indent=2) + '\n')
    logger.info(f"Wrote manifest with {len(manifest.samples)} samples to {path}")
    return path

def load_manifest(path: Union[str, Path], check_files: bool = True) -> DatasetManifest:
    """
    Read a manifest; a directory means its manifest.json.

    Raises:
        FormatError: unreadable or malformed JSON
        ValidationError: invalid entries or referenced files missing
    """
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise FormatError(f"cannot read manifest {path}: {e}")
    try:
        manifest = DatasetManifest.model_validate(data)
    except PydanticValidationError as e:
        raise ValidationError(f"invalid manifest {path}: {e}")

    if check_files:
        missing = [
            f for sample in manifest.samples for f in (sample.music_file, sample.motion_file)
            if not (path.parent / f).exists()
        ]
        if missing:
            raise ValidationError(f"manifest {path} references missing files: {missing[:5]}")
    return manifest

def load_sample(root: Union[str, Path], sample: SampleEntry) -> Tuple[MusicFeatureSequence, MotionSequence]:
    """
    Load one pair and check it agrees with its entry.

    Raises:
        ValidationError: fps or length mismatch between music, motion and entry
    """
    root = Path(root)
    if root.is_file():
        root = root.parent
    music = load_music(root / sample.music_file)
    motion = load_motion(root / sample.motion_file)
    if not music.fps == motion.fps == sample.fps:
        raise ValidationError(
            f"sample {sample.name}: fps differs (music {music.fps}, motion {motion.fps}, manifest {sample.fps})"
        )
    if music.num_frames != motion.num_frames:
        raise ValidationError(
            f"sample {sample.name}: {music.num_frames} music frames vs {motion.num_frames} motion frames"
        )
    if music.beat_frames is None:
        music = music.model_copy(update={'beat_frames': list(sample.beat_frames)})
    return music, motion
