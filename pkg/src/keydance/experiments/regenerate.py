"""
experiments/regenerate.py
Dataset enlargement: new dance clips for existing music, each generated from
key poses sampled at random positions of the clip's own ground truth.
"""

from pathlib import Path
from typing import List, Optional, Union

import numpy as np

from ..dance.network import DanceModelWeights, generate
from ..models.dataset import DatasetManifest, SampleEntry
from ..motion.keyposes import KeySamplingStrategy, extract_key_poses, sample_key_positions
from ..storage.artifacts import save_motion, save_music
from ..storage.manifest import MANIFEST_NAME, load_manifest, load_sample, save_manifest
from ..utils.exceptions import ValidationError
from ..utils.logging import get_logger

logger = get_logger(__name__)

def regenerate(manifest_path: Union[str, Path], weights: DanceModelWeights, out_dir: Union[str, Path],
               variants: int = 2, seed: int = 0, split: Optional[str] = 'train',
               num_keys: Optional[int] = None) -> DatasetManifest:
    """
    Write `variants` regenerated clips per source clip plus a manifest.

    Each variant crops a random T-frame window, takes its first T′ frames as
    seed and keys at random positions of the generated span.
    """
    if variants < 1:
        raise ValidationError("variants must be >= 1")
    manifest_path = Path(manifest_path)
    root = manifest_path if manifest_path.is_dir() else manifest_path.parent
    source = load_manifest(manifest_path)
    entries = source.samples if split is None else source.split(split)
    config = weights.config
    num_keys = config.keys_per_sample if num_keys is None else num_keys
    out_dir = Path(out_dir)

    samples: List[SampleEntry] = []
    for index, entry in enumerate(entries):
        music, motion = load_sample(root, entry)
        if motion.num_frames < config.music_len:
            logger.warning(f"Skipping {entry.name}: {motion.num_frames} frames, the model needs {config.music_len}")
            continue
        for variant in range(variants):
            rng = np.random.default_rng([seed, index, variant])
            start = int(rng.integers(0, motion.num_frames - config.music_len + 1))
            music_window = music.window(start, start + config.music_len)
            motion_window = motion.window(start, start + config.music_len)
            positions = sample_key_positions(config.music_len, config.seed_len, num_keys,
                                             KeySamplingStrategy.RANDOM, rng)
            keys = extract_key_poses(motion_window, positions)
            name = f"{entry.name}_regen{variant:02d}"
            generated = generate(music_window, motion_window.window(0, config.seed_len), keys, weights, name=name)

            music_file = f"music/{name}.mdrt"
            motion_file = f"motion/{name}.mdrt"
            save_music(out_dir / music_file, music_window)
            save_motion(out_dir / motion_file, generated)
            samples.append(SampleEntry(
                name=name,
                music_file=music_file,
                motion_file=motion_file,
                fps=entry.fps,
                beat_frames=music_window.beat_frames or [],
                split=entry.split,
            ))
    manifest = DatasetManifest(samples=samples, source={
        'generator': 'regenerate', 'from': str(manifest_path), 'variants': variants, 'seed': seed,
    })
    save_manifest(out_dir / MANIFEST_NAME, manifest)
    logger.info(f"Regenerated {len(samples)} clips from {len(entries)} sources into {out_dir}")
    return manifest
