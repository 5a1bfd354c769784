"""
experiments/curves.py
Tables for plotting: the loss weight ω(t) for (λ, σ) pairs, and per-frame
kinetic velocity with music onsets and both kinds of beats.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..dance.loss import weight_curve_array
from ..evaluation.metrics import detect_motion_beats
from ..models.motion import MotionSequence
from ..models.music import ONSET_CHANNEL, MusicFeatureSequence
from ..motion.kinematics import kinetic_velocity
from ..utils.exceptions import ValidationError

OMEGA_FIELDS = ['lambda', 'sigma', 'frame', 'tau', 'omega']
VELOCITY_FIELDS = [
    'frame', 'time', 'onset', 'music_beat',
    'velocity_generated', 'motion_beat_generated', 'velocity_real', 'motion_beat_real',
]

def key_fractions_to_frames(fractions: Sequence[float], num_frames: int) -> List[float]:
    """Normalized key times → (possibly fractional) frame positions."""
    for f in fractions:
        if not 0.0 <= f <= 1.0:
            raise ValidationError(f"key position {f} outside [0, 1]")
    return [f * num_frames for f in sorted(fractions)]

def omega_rows(num_frames: int, key_positions: Sequence[float],
               pairs: Sequence[Tuple[float, float]]) -> List[Dict[str, Any]]:
    """One row per (λ, σ, frame); key_positions are in frames."""
    rows = []
    for lam, sigma in pairs:
        omega = weight_curve_array(num_frames, key_positions, lam, sigma)
        for frame, value in enumerate(omega):
            rows.append({
                'lambda': lam, 'sigma': sigma, 'frame': frame,
                'tau': frame / num_frames, 'omega': float(value),
            })
    return rows

def _beat_flags(beats: Sequence[int], num_frames: int) -> np.ndarray:
    flags = np.zeros(num_frames, dtype=int)
    flags[[b for b in beats if 0 <= b < num_frames]] = 1
    return flags

def velocity_rows(music: MusicFeatureSequence, generated: MotionSequence,
                  real: Optional[MotionSequence] = None,
                  music_beats: Optional[Sequence[int]] = None) -> List[Dict[str, Any]]:
    """
    Per-frame overlay table. Velocity at frame t is the change from t to t+1,
    so the last frame has no velocity.
    """
    num_frames = generated.num_frames
    if music.num_frames != num_frames or (real is not None and real.num_frames != num_frames):
        raise ValidationError("music, generated and real motion must have the same number of frames")
    beats = music_beats if music_beats is not None else (music.beat_frames or [])
    music_flags = _beat_flags(beats, num_frames)
    gen_velocity = kinetic_velocity(generated)
    gen_flags = _beat_flags(detect_motion_beats(generated), num_frames)
    if real is not None:
        real_velocity = kinetic_velocity(real)
        real_flags = _beat_flags(detect_motion_beats(real), num_frames)

    rows = []
    for t in range(num_frames):
        row = {
            'frame': t,
            'time': t / generated.fps,
            'onset': float(music.frames[t, ONSET_CHANNEL]),
            'music_beat': int(music_flags[t]),
            'velocity_generated': float(gen_velocity[t]) if t < num_frames - 1 else '',
            'motion_beat_generated': int(gen_flags[t]),
            'velocity_real': '',
            'motion_beat_real': '',
        }
        if real is not None:
            row['velocity_real'] = float(real_velocity[t]) if t < num_frames - 1 else ''
            row['motion_beat_real'] = int(real_flags[t])
        rows.append(row)
    return rows
