"""
Synthetic corpus generation and dataset loading.
"""

from .synth import BEAT_LAG, beat_frames, synth_music, synth_motion, synth_clip, clip_name, synth_dataset
from .loader import load_samples, synth_samples

__all__ = [
    'BEAT_LAG', 'beat_frames', 'synth_music', 'synth_motion', 'synth_clip', 'clip_name', 'synth_dataset',
    'load_samples', 'synth_samples',
]
