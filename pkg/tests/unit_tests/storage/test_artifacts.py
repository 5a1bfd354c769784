"""
test_artifacts.py
Tests for motion/music artifacts, key request files and manifests.
"""

import json
from pathlib import Path

import numpy as np
import pytest

from keydance.models import DatasetManifest, POSE_DIM, SampleEntry
from keydance.storage import (
    load_keys, load_manifest, load_motion, load_music, load_sample, save_keys, save_manifest, save_motion,
    save_music, sidecar_path, write_tensor
)
from keydance.utils.exceptions import FormatError, ValidationError

def test_sidecar_path():
    assert sidecar_path("data/clip.mdrt") == Path("data/clip.mdrt.json")

def test_motion_round_trip(tmp_path, motion_factory):
    motion = motion_factory(num_frames=12, name="walk", fps=60.0)
    path = save_motion(tmp_path / "walk.mdrt", motion)
    loaded = load_motion(path)
    assert loaded.name == "walk"
    assert loaded.fps == 60.0
    np.testing.assert_allclose(loaded.frames, motion.frames, rtol=1e-6, atol=1e-7)
    assert json.loads(sidecar_path(path).read_text()) == {"fps": 60.0, "name": "walk"}

def test_music_round_trip_keeps_beats(tmp_path, music_factory):
    music = music_factory(num_frames=20, beat_frames=[0, 10])
    loaded = load_music(save_music(tmp_path / "song.mdrt", music))
    assert loaded.beat_frames == [0, 10]
    np.testing.assert_allclose(loaded.frames, music.frames, atol=1e-7)

def test_missing_sidecar(tmp_path):
    write_tensor(tmp_path / "bare.mdrt", np.zeros((3, 147)))
    with pytest.raises(FormatError):
        load_motion(tmp_path / "bare.mdrt")

def test_wrong_width_is_a_validation_error(tmp_path):
    path = write_tensor(tmp_path / "narrow.mdrt", np.zeros((3, 10)))
    sidecar_path(path).write_text('{"fps": 30.0}')
    with pytest.raises(ValidationError):
        load_motion(path)

def test_keys_from_ground_truth(tmp_path, motion_factory):
    reference = motion_factory(num_frames=30)
    path = save_keys(tmp_path / "keys.json", [20, 5])
    keys = load_keys(path, reference)
    assert keys.frame_indices == [5, 20]
    np.testing.assert_array_equal(keys.poses[0], reference.poses[5])

def test_keys_from_pose_files(tmp_path, motion_factory):
    reference = motion_factory(num_frames=10)
    write_tensor(tmp_path / "a.mdrt", reference.poses[3])
    write_tensor(tmp_path / "b.mdrt", reference.frames[7])
    (tmp_path / "keys.json").write_text(json.dumps([
        {"frame": 12, "pose_file": "b.mdrt"},
        {"frame": 4, "pose_file": "a.mdrt"},
    ]))
    keys = load_keys(tmp_path / "keys.json")
    assert keys.frame_indices == [4, 12]
    assert keys.poses.shape == (2, POSE_DIM)
    np.testing.assert_allclose(keys.poses[1], reference.poses[7], atol=1e-6)

def test_keys_need_reference_for_ground_truth(tmp_path, motion_factory):
    path = save_keys(tmp_path / "keys.json", [5])
    with pytest.raises(ValidationError):
        load_keys(path)
    with pytest.raises(ValidationError):
        load_keys(path, motion_factory(num_frames=4))

@pytest.mark.parametrize("payload", [
    '{"keys": 3}',
    '[{"frame": "one", "from_gt": true}]',
    '[{"frame": 1}]',
    '[{"frame": true, "from_gt": true}]',
    'not json',
])
def test_malformed_key_files(tmp_path, motion_factory, payload):
    (tmp_path / "keys.json").write_text(payload)
    with pytest.raises(FormatError):
        load_keys(tmp_path / "keys.json", motion_factory(num_frames=5))

def test_duplicate_key_frames(tmp_path, motion_factory):
    (tmp_path / "keys.json").write_text('[{"frame": 2, "from_gt": true}, {"frame": 2, "from_gt": true}]')
    with pytest.raises(ValidationError):
        load_keys(tmp_path / "keys.json", motion_factory(num_frames=5))

def _write_pair(root, name, music, motion):
    save_music(root / f"music/{name}.mdrt", music)
    save_motion(root / f"motion/{name}.mdrt", motion)
    return SampleEntry(name=name, music_file=f"music/{name}.mdrt", motion_file=f"motion/{name}.mdrt",
                       beat_frames=[0, 8])

def test_manifest_round_trip(tmp_path, motion_factory, music_factory):
    entry = _write_pair(tmp_path, "one", music_factory(num_frames=16), motion_factory(num_frames=16))
    save_manifest(tmp_path / "manifest.json", DatasetManifest(samples=[entry], source={"generator": "test"}))
    manifest = load_manifest(tmp_path)
    assert manifest.samples[0].name == "one"
    assert manifest.source == {"generator": "test"}
    music, motion = load_sample(tmp_path, manifest.samples[0])
    assert music.beat_frames == [0, 8]
    assert motion.num_frames == 16

def test_manifest_missing_files(tmp_path):
    entry = SampleEntry(name="ghost", music_file="music/ghost.mdrt", motion_file="motion/ghost.mdrt")
    save_manifest(tmp_path / "manifest.json", DatasetManifest(samples=[entry]))
    with pytest.raises(ValidationError):
        load_manifest(tmp_path)
    assert load_manifest(tmp_path, check_files=False).samples[0].name == "ghost"

def test_manifest_rejects_duplicate_names(tmp_path):
    entry = {"name": "x", "music_file": "a", "motion_file": "b"}
    (tmp_path / "manifest.json").write_text(json.dumps({"samples": [entry, entry]}))
    with pytest.raises(ValidationError):
        load_manifest(tmp_path, check_files=False)

def test_unreadable_manifest(tmp_path):
    (tmp_path / "manifest.json").write_text("{")
    with pytest.raises(FormatError):
        load_manifest(tmp_path)

def test_sample_length_mismatch(tmp_path, motion_factory, music_factory):
    entry = _write_pair(tmp_path, "odd", music_factory(num_frames=16), motion_factory(num_frames=12))
    with pytest.raises(ValidationError):
        load_sample(tmp_path, entry)

def test_sample_fps_mismatch(tmp_path, motion_factory, music_factory):
    entry = _write_pair(tmp_path, "fast", music_factory(num_frames=16), motion_factory(num_frames=16, fps=60.0))
    with pytest.raises(ValidationError):
        load_sample(tmp_path, entry)
