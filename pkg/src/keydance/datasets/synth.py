"""
datasets/synth.py
Synthetic beat-locked corpus.

Music: chroma is a smoothed random walk in [0, 1], the beat flag is set at
multiples of P, the downbeat flag on every fourth beat and onset strength is
a Gaussian bump at each beat.

Motion: every joint swings about its own axis on top of a random base
rotation, all joints sharing the phase cos(π(t − t0)/P). Joint angular
velocity vanishes at t = t0 + kP; with t0 = BEAT_LAG + 0.5 the stillest
frame-to-frame change is the one starting at frame kP + BEAT_LAG, so each
beat (frame 0 included) is a strict kinetic-velocity minimum one frame
later. The root drifts slowly in the ground plane.
"""

from pathlib import Path
from typing import List, Tuple, Union

import numpy as np

from ..config import SynthSpec
from ..models.dataset import DatasetManifest, SampleEntry
from ..models.motion import NUM_JOINTS, MotionSequence
from ..models.music import BEAT_CHANNEL, CHROMA_DIM, DOWNBEAT_CHANNEL, FEATURE_DIM, ONSET_CHANNEL, MusicFeatureSequence
from ..motion.rotation import axis_angle_to_rotmat, random_rotation, rotmats_to_pose
from ..storage.artifacts import save_motion, save_music
from ..storage.manifest import MANIFEST_NAME, save_manifest
from ..utils.logging import get_logger

logger = get_logger(__name__)

BEAT_LAG = 1
BEATS_PER_BAR = 4
ONSET_WIDTH = 2.0
CHROMA_STEP = 0.08
CHROMA_SMOOTHING = 9
ROOT_HEIGHT = 0.9
DRIFT = 0.25
SWAY = 0.05

def beat_frames(spec: SynthSpec) -> List[int]:
    return list(range(0, spec.num_frames, spec.beat_period))

def synth_music(spec: SynthSpec, rng: np.random.Generator) -> MusicFeatureSequence:
    t = np.arange(spec.num_frames, dtype=np.float64)
    beats = beat_frames(spec)
    frames = np.zeros((spec.num_frames, FEATURE_DIM))

    walk = rng.uniform(0.2, 0.8, CHROMA_DIM) + np.cumsum(
        rng.normal(0.0, CHROMA_STEP, (spec.num_frames, CHROMA_DIM)), axis=0
    )
    kernel = np.ones(CHROMA_SMOOTHING) / CHROMA_SMOOTHING
    padded = np.pad(walk, ((CHROMA_SMOOTHING // 2, CHROMA_SMOOTHING // 2), (0, 0)), mode='edge')
    smooth = np.stack([np.convolve(padded[:, c], kernel, mode='valid') for c in range(CHROMA_DIM)], axis=1)
    frames[:, :CHROMA_DIM] = np.clip(smooth, 0.0, 1.0)

    for k, b in enumerate(beats):
        frames[b, BEAT_CHANNEL] = 1.0
        if k % BEATS_PER_BAR == 0:
            frames[b, DOWNBEAT_CHANNEL] = 1.0
    bumps = np.exp(-((t[:, None] - np.asarray(beats, dtype=np.float64)[None, :]) ** 2) / (2 * ONSET_WIDTH ** 2))
    frames[:, ONSET_CHANNEL] = bumps.sum(axis=1)
    return MusicFeatureSequence(frames=frames, fps=spec.fps, beat_frames=beats)

def synth_motion(spec: SynthSpec, rng: np.random.Generator, name: str) -> MotionSequence:
    t = np.arange(spec.num_frames, dtype=np.float64)
    t0 = BEAT_LAG + 0.5 + spec.phase_shift
    phase = np.cos(np.pi * (t - t0) / spec.beat_period)

    rotations = np.empty((spec.num_frames, NUM_JOINTS, 3, 3))
    for joint in range(NUM_JOINTS):
        base = random_rotation(rng)
        axis = rng.normal(size=3)
        amplitude = spec.amplitude * rng.uniform(0.5, 1.5)
        for frame in range(spec.num_frames):
            rotations[frame, joint] = base @ axis_angle_to_rotmat(axis, amplitude * phase[frame])
    poses = np.stack([rotmats_to_pose(frame_rotations) for frame_rotations in rotations])

    heading = rng.uniform(0.0, 2.0 * np.pi)
    progress = t / spec.num_frames
    translations = np.stack([
        DRIFT * progress * np.cos(heading) + SWAY * np.sin(2 * np.pi * progress),
        np.full(spec.num_frames, ROOT_HEIGHT),
        DRIFT * progress * np.sin(heading),
    ], axis=1)
    return MotionSequence.from_parts(poses, translations, fps=spec.fps, name=name)

def synth_clip(spec: SynthSpec, index: int) -> Tuple[MusicFeatureSequence, MotionSequence]:
    """Clip `index` of the corpus; depends only on (spec, index)."""
    rng = np.random.default_rng([spec.seed, index])
    name = clip_name(index)
    return synth_music(spec, rng), synth_motion(spec, rng, name)

def clip_name(index: int) -> str:
    return f"clip_{index:03d}"

def synth_dataset(spec: SynthSpec, out_dir: Union[str, Path]) -> DatasetManifest:
    """
    Write every clip (music/<name>.mdrt, motion/<name>.mdrt with sidecars)
    and manifest.json into `out_dir`.
    """
    out_dir = Path(out_dir)
    num_test = int(np.floor(spec.num_clips * spec.test_fraction))
    samples = []
    for index in range(spec.num_clips):
        music, motion = synth_clip(spec, index)
        name = clip_name(index)
        music_file = f"music/{name}.mdrt"
        motion_file = f"motion/{name}.mdrt"
        save_music(out_dir / music_file, music)
        save_motion(out_dir / motion_file, motion)
        samples.append(SampleEntry(
            name=name,
            music_file=music_file,
            motion_file=motion_file,
            fps=spec.fps,
            beat_frames=beat_frames(spec),
            split='test' if index >= spec.num_clips - num_test else 'train',
        ))
    manifest = DatasetManifest(samples=samples, source={'generator': 'synth', **_spec_dict(spec)})
    save_manifest(out_dir / MANIFEST_NAME, manifest)
    logger.info(f"Synthesized {spec.num_clips} clips of {spec.num_frames} frames (P={spec.beat_period}) in {out_dir}")
    return manifest

def _spec_dict(spec: SynthSpec) -> dict:
    return {
        'num_frames': spec.num_frames, 'fps': spec.fps, 'beat_period': spec.beat_period,
        'num_clips': spec.num_clips, 'seed': spec.seed, 'amplitude': spec.amplitude,
        'phase_shift': spec.phase_shift, 'test_fraction': spec.test_fraction,
    }
