"""
test_cli.py
Tests for the keydance command line.
"""

import csv
import json
import logging

import numpy as np
import pytest
from click.testing import CliRunner

from keydance.cli import build_config, main
from keydance.storage import MANIFEST_NAME, load_motion, save_keys

@pytest.fixture
def runner():
    yield CliRunner()
    # the CLI points the root handler at the runner's stream, which is closed by now
    logging.getLogger().handlers.clear()

@pytest.fixture
def dataset(tmp_path, runner):
    out = tmp_path / "data"
    result = runner.invoke(main, ["synth", "--out", str(out), "--frames", "40", "--period", "10",
                                  "--clips", "2", "--seed", "3"])
    assert result.exit_code == 0, result.output
    return out

TRAIN_FLAGS = ["--steps", "1", "--batch-size", "1", "--preset", "tiny", "--seed-len", "4", "--music-len", "16",
               "--keys-per-sample", "2"]

def test_synth_writes_manifest(dataset):
    manifest = json.loads((dataset / MANIFEST_NAME).read_text())
    assert [s['name'] for s in manifest['samples']] == ["clip_000", "clip_001"]

def test_synth_rejects_short_clips(tmp_path, runner):
    result = runner.invoke(main, ["synth", "--out", str(tmp_path / "x"), "--frames", "10", "--period", "10"])
    assert result.exit_code == 3
    assert "error[3]" in result.output

def test_eval_single_clip(tmp_path, runner, dataset):
    keys = save_keys(tmp_path / "keys.json", [10, 30])
    motion = str(dataset / "motion" / "clip_000.mdrt")
    result = runner.invoke(main, [
        "eval", "--motion", motion, "--reference", motion, "--music", str(dataset / "music" / "clip_000.mdrt"),
        "--keys", str(keys), "--deltas", "1,2", "--out", str(tmp_path / "report"),
    ])
    assert result.exit_code == 0, result.output
    payload = json.loads((tmp_path / "report.json").read_text())
    assert set(payload['reports']) == {"synthesized", "real"}
    assert payload['reports']['real']['consistency_error'] == 0.0
    assert payload['reports']['real']['beat_hit_rate'] == {'1': 1.0, '2': 1.0}
    with (tmp_path / "report.csv").open() as f:
        assert len(list(csv.DictReader(f))) == 4

def test_eval_needs_inputs(tmp_path, runner):
    result = runner.invoke(main, ["eval", "--out", str(tmp_path / "r")])
    assert result.exit_code == 2

def test_eval_dataset(tmp_path, runner, dataset):
    result = runner.invoke(main, ["eval", "--data", str(dataset), "--jobs", "2", "--out", str(tmp_path / "all")])
    assert result.exit_code == 0, result.output
    payload = json.loads((tmp_path / "all.json").read_text())
    assert sorted(payload['reports']) == ["clip_000", "clip_001"]
    assert payload['aggregate']['beat_hit_rate@1'] == 1.0

def test_eval_bad_deltas(tmp_path, runner, dataset):
    result = runner.invoke(main, ["eval", "--data", str(dataset), "--deltas", "1,x", "--out", str(tmp_path / "r")])
    assert result.exit_code == 2

def test_curves_omega(tmp_path, runner):
    out = tmp_path / "omega.csv"
    result = runner.invoke(main, ["curves", "--omega", "--lambda", "0,3", "--sigma", "0.1", "--keys", "0.5",
                                  "--frames", "10", "--out", str(out)])
    assert result.exit_code == 0, result.output
    with out.open() as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 20
    assert float(rows[15]['omega']) == pytest.approx(4.0)

def test_curves_needs_one_mode(tmp_path, runner):
    result = runner.invoke(main, ["curves", "--out", str(tmp_path / "c.csv")])
    assert result.exit_code == 2

def test_curves_velocity(tmp_path, runner, dataset):
    out = tmp_path / "velocity.csv"
    result = runner.invoke(main, ["curves", "--velocity", "--music", str(dataset / "music" / "clip_000.mdrt"),
                                  "--motion", str(dataset / "motion" / "clip_000.mdrt"), "--out", str(out)])
    assert result.exit_code == 0, result.output
    with out.open() as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 40
    assert rows[11]['motion_beat_generated'] == "1"

def test_bad_config_file(tmp_path, runner, dataset):
    config = tmp_path / "config.json"
    config.write_text('{"model": {"preset": "huge"}}')
    result = runner.invoke(main, ["train", "--data", str(dataset), "--out", str(tmp_path / "ckpt"),
                                  "--config", str(config)])
    assert result.exit_code == 2

def test_train_generate_regenerate(tmp_path, runner, dataset):
    checkpoint = tmp_path / "ckpt"
    result = runner.invoke(main, ["train", "--data", str(dataset), "--out", str(checkpoint), *TRAIN_FLAGS])
    assert result.exit_code == 0, result.output
    assert (checkpoint / "weights.mdrc").exists()
    assert (checkpoint / "loss.csv").exists()

    keys = save_keys(tmp_path / "keys.json", [8, 12])
    out = tmp_path / "take.mdrt"
    result = runner.invoke(main, [
        "generate", "--checkpoint", str(checkpoint), "--music", str(dataset / "music" / "clip_000.mdrt"),
        "--reference", str(dataset / "motion" / "clip_000.mdrt"), "--keys", str(keys), "--out", str(out),
    ])
    assert result.exit_code == 0, result.output
    generated = load_motion(out)
    reference = load_motion(dataset / "motion" / "clip_000.mdrt")
    assert generated.num_frames == 40
    assert generated.name == "take"
    np.testing.assert_array_equal(generated.frames[:4], reference.frames[:4])

    result = runner.invoke(main, [
        "regenerate", "--data", str(dataset), "--checkpoint", str(checkpoint), "--out", str(tmp_path / "regen"),
        "--variants", "1",
    ])
    assert result.exit_code == 0, result.output
    regen = json.loads((tmp_path / "regen" / MANIFEST_NAME).read_text())
    assert len(regen['samples']) == 2
    assert load_motion(tmp_path / "regen" / regen['samples'][0]['motion_file']).num_frames == 16

def test_generate_needs_seed(tmp_path, runner, dataset):
    checkpoint = tmp_path / "ckpt"
    runner.invoke(main, ["train", "--data", str(dataset), "--out", str(checkpoint), *TRAIN_FLAGS])
    result = runner.invoke(main, ["generate", "--checkpoint", str(checkpoint),
                                  "--music", str(dataset / "music" / "clip_000.mdrt"),
                                  "--out", str(tmp_path / "take.mdrt")])
    assert result.exit_code == 2

@pytest.fixture
def custom_config(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({
        'model': {'preset': 'tiny', 'cross': {'num_layers': 3, 'num_heads': 2, 'd_model': 48},
                  'encoder_layers': 1, 'seed_len': 10, 'music_len': 120},
        'log_level': 'warning',
    }))
    return path

def test_length_flags_keep_custom_sizes(custom_config):
    model = build_config(str(custom_config), seed_len=4, music_len=16, keys_per_sample=2).model
    assert (model.cross.num_layers, model.d_model) == (3, 48)
    assert (model.seed_len, model.music_len, model.keys_per_sample) == (4, 16, 2)

def test_preset_flag_replaces_sizes(custom_config):
    model = build_config(str(custom_config), preset='tiny', seed_len=4).model
    assert (model.cross.num_layers, model.d_model) == (2, 32)
    assert (model.seed_len, model.music_len) == (4, 120)

def test_config_log_level_applies(tmp_path, runner, dataset, custom_config):
    result = runner.invoke(main, ["train", "--data", str(dataset), "--out", str(tmp_path / "ckpt"),
                                  "--config", str(custom_config), *TRAIN_FLAGS])
    assert result.exit_code == 0, result.output
    assert logging.getLogger().level == logging.WARNING

def test_log_level_flag_wins(tmp_path, runner, dataset, custom_config):
    result = runner.invoke(main, ["--log-level", "DEBUG", "train", "--data", str(dataset),
                                  "--out", str(tmp_path / "ckpt"), "--config", str(custom_config), *TRAIN_FLAGS])
    assert result.exit_code == 0, result.output
    assert logging.getLogger().level == logging.DEBUG
