"""
test_metrics.py
Tests for consistency error, smoothness, motion beats and beat hit rate.
"""

import numpy as np
import pytest

from keydance.config import SynthSpec
from keydance.datasets.synth import beat_frames, synth_clip
from keydance.evaluation import (
    beat_hit_rate, consistency_error, count_beat_hits, detect_motion_beats, evaluate, smoothness_cv,
    velocity_minima
)
from keydance.models import FRAME_DIM, KeyPoseSet, MotionSequence, POSE_DIM
from keydance.motion import extract_key_poses
from keydance.utils.exceptions import UndefinedMetricError, ValidationError

def _steps(deltas):
    """Motion whose consecutive frame differences are exactly `deltas`."""
    frames = np.zeros((len(deltas) + 1, FRAME_DIM))
    frames[1:, 0] = np.cumsum(deltas)
    return MotionSequence(frames=frames)

def test_consistency_error_examples():
    generated = MotionSequence(frames=np.zeros((10, FRAME_DIM)))
    poses = np.zeros((2, POSE_DIM))
    poses[0, 0] = 0.5
    poses[1, :2] = 1.0
    keys = KeyPoseSet(frame_indices=[3, 7], poses=poses)
    assert consistency_error(generated, KeyPoseSet(frame_indices=[3], poses=poses[:1])) == pytest.approx(0.25)
    assert consistency_error(generated, KeyPoseSet(frame_indices=[7], poses=poses[1:])) == pytest.approx(2.0)
    assert consistency_error(generated, keys) == pytest.approx(1.125)

def test_consistency_error_ignores_translation(motion_factory):
    motion = motion_factory(num_frames=20)
    keys = extract_key_poses(motion, [5, 15])
    moved = motion.frames.copy()
    moved[:, POSE_DIM:] += 3.0
    assert consistency_error(motion.with_frames(moved), keys) == 0.0

def test_consistency_error_needs_keys(motion_factory):
    with pytest.raises(UndefinedMetricError):
        consistency_error(motion_factory(num_frames=5), KeyPoseSet())

def test_consistency_error_key_outside(motion_factory, keys_factory):
    with pytest.raises(ValidationError):
        consistency_error(motion_factory(num_frames=10), keys_factory(frame_indices=[12]))

def test_smoothness_example():
    assert smoothness_cv(_steps([1.0, 1.0, 1.0, 3.0])) == pytest.approx(0.5774, abs=1e-4)

def test_constant_speed_is_perfectly_smooth():
    assert smoothness_cv(_steps([0.5] * 6)) == pytest.approx(0.0, abs=1e-12)

def test_frozen_motion_has_undefined_smoothness():
    with pytest.raises(UndefinedMetricError):
        smoothness_cv(MotionSequence(frames=np.ones((5, FRAME_DIM))))

def test_smoothness_needs_three_frames():
    with pytest.raises(ValidationError):
        smoothness_cv(_steps([1.0]))

@pytest.mark.parametrize("series,expected", [
    ([3, 1, 2], [1]),
    ([3, 1, 1, 2], [1]),
    ([1, 2, 3], []),
    ([3, 2, 1], []),
    ([2, 1, 2, 0, 5, 4, 6], [1, 3, 5]),
    ([3, 1, 1, 0, 2], [3]),
])
def test_velocity_minima(series, expected):
    assert velocity_minima(np.array(series, dtype=float)) == expected

def test_hit_rate_example():
    assert beat_hit_rate([12], [10, 50], delta=2) == 0.5
    assert beat_hit_rate([12], [10, 50], delta=1) == 0.0

def test_motion_beats_can_be_reused():
    assert count_beat_hits([10], [9, 11], delta=1) == 2

def test_hit_rate_needs_music_beats():
    with pytest.raises(UndefinedMetricError):
        beat_hit_rate([1, 2], [], delta=2)
    assert beat_hit_rate([], [4], delta=2) == 0.0

def test_negative_delta():
    with pytest.raises(ValidationError):
        count_beat_hits([1], [1], delta=-1)

def test_beat_locked_motion_hits_every_beat():
    spec = SynthSpec(num_frames=120, beat_period=20, num_clips=1, seed=0)
    _, motion = synth_clip(spec, 0)
    beats = beat_frames(spec)
    assert detect_motion_beats(motion) == [b + 1 for b in beats]
    assert beat_hit_rate(detect_motion_beats(motion), beats, delta=1) == 1.0
    assert beat_hit_rate(detect_motion_beats(motion), beats, delta=0) == 0.0

def test_half_period_shift_misses_every_beat():
    spec = SynthSpec(num_frames=120, beat_period=20, num_clips=1, seed=0, phase_shift=10)
    _, motion = synth_clip(spec, 0)
    for delta in (1, 2, 3, 4, 5):
        assert beat_hit_rate(detect_motion_beats(motion), beat_frames(spec), delta) == 0.0

def test_evaluate_collects_metrics(synth_pair):
    music, motion = synth_pair
    keys = extract_key_poses(motion, [30, 60])
    report = evaluate(motion, keys, music.beat_frames, name="gt")
    assert report.name == "gt"
    assert report.consistency_error == 0.0
    assert report.smoothness_cv is not None
    assert sorted(report.beat_hit_rate) == [1, 2, 3, 4, 5]
    assert report.beat_hit_rate[1] == 1.0
    assert report.num_keys == 2
    assert report.undefined == {}
    assert report.window_seconds(3) == pytest.approx(0.1)

def test_evaluate_records_undefined_metrics():
    frozen = MotionSequence(frames=np.zeros((8, FRAME_DIM)))
    report = evaluate(frozen, None, [], deltas=[1])
    assert report.consistency_error is None
    assert report.smoothness_cv is None
    assert report.beat_hit_rate == {}
    assert set(report.undefined) == {'consistency_error', 'smoothness_cv', 'beat_hit_rate'}
