"""
datasets/loader.py
Turning a manifest on disk into training samples.
"""

from pathlib import Path
from typing import List, Optional, Union

from ..config import SynthSpec
from ..dance.training import TrainingSample
from ..storage.manifest import load_manifest, load_sample
from ..utils.exceptions import ValidationError
from ..utils.logging import get_logger
from .synth import clip_name, synth_clip

logger = get_logger(__name__)

def load_samples(manifest_path: Union[str, Path], split: Optional[str] = 'train') -> List[TrainingSample]:
    """
    Load every pair of a split (all pairs when split is None).

    Raises:
        ValidationError: the split is empty or a pair is inconsistent
    """
    manifest_path = Path(manifest_path)
    manifest = load_manifest(manifest_path)
    root = manifest_path if manifest_path.is_dir() else manifest_path.parent
    entries = manifest.samples if split is None else manifest.split(split)
    if not entries:
        raise ValidationError(f"manifest {manifest_path} has no samples" + (f" in split {split!r}" if split else ""))
    samples = []
    for entry in entries:
        music, motion = load_sample(root, entry)
        samples.append(TrainingSample(name=entry.name, music=music, motion=motion))
    logger.info(f"Loaded {len(samples)} samples from {manifest_path}")
    return samples

def synth_samples(spec: SynthSpec) -> List[TrainingSample]:
    """The synthetic corpus in memory, without touching disk."""
    samples = []
    for index in range(spec.num_clips):
        music, motion = synth_clip(spec, index)
        samples.append(TrainingSample(name=clip_name(index), music=music, motion=motion))
    return samples
