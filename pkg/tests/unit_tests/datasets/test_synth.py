"""
test_synth.py
Tests for the synthetic corpus and manifest loading.
"""

import numpy as np
import pytest

from keydance.config import SynthSpec
from keydance.datasets import beat_frames, load_samples, synth_clip, synth_dataset, synth_samples
from keydance.models import BEAT_CHANNEL, DOWNBEAT_CHANNEL, FEATURE_DIM, FRAME_DIM
from keydance.music import musical_beats
from keydance.storage import MANIFEST_NAME, load_manifest
from keydance.utils.exceptions import ValidationError

@pytest.fixture
def spec():
    return SynthSpec(num_frames=90, beat_period=15, num_clips=4, seed=5, test_fraction=0.25)

def test_beat_frames(spec):
    assert beat_frames(spec) == [0, 15, 30, 45, 60, 75]

def test_music_flags_every_beat(spec):
    music, motion = synth_clip(spec, 0)
    assert music.frames.shape == (90, FEATURE_DIM)
    assert motion.frames.shape == (90, FRAME_DIM)
    assert np.flatnonzero(music.frames[:, BEAT_CHANNEL]).tolist() == beat_frames(spec)
    assert np.flatnonzero(music.frames[:, DOWNBEAT_CHANNEL]).tolist() == [0, 60]
    assert music.beat_frames == beat_frames(spec)
    assert musical_beats(music).beat_frames == beat_frames(spec)

def test_clips_are_deterministic(spec):
    first = synth_clip(spec, 2)
    second = synth_clip(spec, 2)
    np.testing.assert_array_equal(first[1].frames, second[1].frames)
    np.testing.assert_array_equal(first[0].frames, second[0].frames)
    other = synth_clip(spec, 3)
    assert not np.allclose(first[1].frames, other[1].frames)

def test_synth_samples(spec):
    samples = synth_samples(spec)
    assert [s.name for s in samples] == ["clip_000", "clip_001", "clip_002", "clip_003"]
    np.testing.assert_array_equal(samples[1].motion.frames, synth_clip(spec, 1)[1].frames)

def test_synth_dataset_on_disk(tmp_path, spec):
    manifest = synth_dataset(spec, tmp_path)
    assert (tmp_path / MANIFEST_NAME).exists()
    assert (tmp_path / "motion" / "clip_000.mdrt").exists()
    assert (tmp_path / "music" / "clip_003.mdrt.json").exists()
    assert [s.name for s in manifest.split('test')] == ["clip_003"]
    assert load_manifest(tmp_path).source['beat_period'] == 15

def test_load_samples(tmp_path, spec):
    synth_dataset(spec, tmp_path)
    train = load_samples(tmp_path / MANIFEST_NAME)
    assert [s.name for s in train] == ["clip_000", "clip_001", "clip_002"]
    everything = load_samples(tmp_path, split=None)
    assert len(everything) == 4
    expected = synth_clip(spec, 0)[1].frames
    np.testing.assert_allclose(train[0].motion.frames, expected, atol=1e-6)
    assert train[0].music.beat_frames == beat_frames(spec)

def test_empty_split(tmp_path):
    synth_dataset(SynthSpec(num_frames=60, beat_period=15, num_clips=2), tmp_path)
    with pytest.raises(ValidationError):
        load_samples(tmp_path, split='test')

def test_spec_validation():
    with pytest.raises(ValidationError):
        SynthSpec(num_frames=20, beat_period=15)
    with pytest.raises(ValidationError):
        SynthSpec(beat_period=1)
