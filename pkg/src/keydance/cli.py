"""
Command-line entry point: synth, train, generate, eval, gradcheck, curves,
sweep and regenerate.

Every KeydanceException is reported as ``error[<code>]: <message>`` on
standard error and the process exits with the exception's exit code
(2 usage/config, 3 validation, 4 numeric).
"""

import asyncio
import functools
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional

import click
from pydantic import ValidationError as PydanticValidationError

from .autodiff.gradcheck import check_ops
from .config import LOG_LEVELS, KeydanceConfig, SynthSpec
from .dance.checkpoint import load_checkpoint, save_checkpoint
from .dance.gradcheck import model_grad_check, tiny_check_config
from .dance.network import generate as generate_motion
from .dance.training import train as train_model
from .datasets.loader import load_samples
from .datasets.synth import synth_dataset
from .evaluation.batch import ClipEvaluation, evaluate_batch
from .evaluation.metrics import evaluate
from .evaluation.reports import write_report_csv, write_report_json, write_rows_csv
from .experiments.curves import OMEGA_FIELDS, VELOCITY_FIELDS, key_fractions_to_frames, omega_rows, velocity_rows
from .experiments.regenerate import regenerate as regenerate_dataset
from .experiments.sweep import DEFAULT_LAMBDAS, DEFAULT_SIGMAS, SWEEP_FIELDS, run_sweep
from .models.motion import KeyPoseSet
from .music.features import musical_beats
from .serializers.json_serializer import KeydanceSerializer
from .storage.artifacts import load_keys, load_motion, load_music, save_motion
from .storage.manifest import load_manifest, load_sample
from .utils.exceptions import KeydanceException, NumericError, UsageError, ValidationError
from .utils.logging import configure_logging, get_logger

logger = get_logger(__name__)

OP_TOLERANCE = 1e-6
MODEL_TOLERANCE = 1e-3

def handle_errors(command):
    """Map library exceptions onto stable exit codes."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except KeydanceException as e:
            click.echo(f"error[{e.exit_code}]: {e}", err=True)
            sys.exit(e.exit_code)
        except PydanticValidationError as e:
            click.echo(f"error[3]: {e}", err=True)
            sys.exit(3)
    return wrapper

def _floats(text: Optional[str], name: str) -> Optional[List[float]]:
    if text is None:
        return None
    try:
        return [float(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise UsageError(f"--{name} expects comma-separated numbers, got {text!r}")

def _ints(text: str, name: str) -> List[int]:
    try:
        return [int(v) for v in text.split(',') if v.strip()]
    except ValueError:
        raise UsageError(f"--{name} expects comma-separated integers, got {text!r}")

def build_config(config_path: Optional[str], preset: Optional[str] = None, lam: Optional[float] = None,
                 sigma: Optional[float] = None, steps: Optional[int] = None, batch_size: Optional[int] = None,
                 seed: Optional[int] = None, lr_scale: Optional[float] = None,
                 seed_len: Optional[int] = None, music_len: Optional[int] = None,
                 keys_per_sample: Optional[int] = None, fixed_keys: bool = False) -> KeydanceConfig:
    """Config file (or KEYDANCE_* environment) first, explicit flags on top.

    --preset replaces the architecture sizes; the length flags only touch
    their own fields, so custom sizes from the file survive them.
    """
    config = KeydanceConfig.from_file(config_path) if config_path else KeydanceConfig.from_env()
    model = config.model
    if preset is not None:
        model = type(model).from_preset(
            preset,
            seed_len=model.seed_len,
            music_len=model.music_len,
            keys_per_sample=model.keys_per_sample,
            keys_in_seed_span=model.keys_in_seed_span,
            use_local_pe=model.use_local_pe,
        )
    lengths = {k: v for k, v in (('seed_len', seed_len), ('music_len', music_len),
                                 ('keys_per_sample', keys_per_sample)) if v is not None}
    if lengths:
        span = lengths.get('seed_len', model.seed_len) + lengths.get('music_len', model.music_len)
        cross = replace(model.cross, max_len=max(model.cross.max_len, span))
        model = replace(model, cross=cross, **lengths)
    loss = replace(config.loss, **{k: v for k, v in (('lam', lam), ('sigma', sigma)) if v is not None})
    schedule_overrides = {k: v for k, v in (('total_steps', steps), ('batch_size', batch_size),
                                            ('lr_scale', lr_scale)) if v is not None}
    if fixed_keys:
        schedule_overrides['resample_keys'] = False
    schedule = replace(config.schedule, **schedule_overrides)
    _apply_log_level(config.log_level)
    return replace(config, model=model, loss=loss, schedule=schedule,
                   seed=config.seed if seed is None else seed)

def _apply_log_level(level: str) -> None:
    """Use the config's level unless --log-level was given."""
    ctx = click.get_current_context(silent=True)
    if ctx is None:
        return
    options = ctx.find_root().obj or {}
    if options.get('log_level') is None:
        configure_logging(level, options.get('log_file'))

def training_options(command):
    """Flags shared by train and sweep."""
    options = [
        click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False), help='YAML or JSON config'),
        click.option('--preset', type=click.Choice(['large', 'light', 'tiny']), help='Model size preset'),
        click.option('--steps', type=int, help='Training steps'),
        click.option('--batch-size', type=int, help='Clips per step'),
        click.option('--seed', type=int, help='Seed for initialization and data order'),
        click.option('--lr-scale', type=float, help='Multiplier on every learning-rate stage'),
        click.option('--seed-len', type=int, help="Seed frames T'"),
        click.option('--music-len', type=int, help='Generated frames T'),
        click.option('--keys-per-sample', type=int, help='Key poses per training window'),
        click.option('--fixed-keys', is_flag=True, help='Draw key positions once per clip instead of every step'),
    ]
    for option in reversed(options):
        command = option(command)
    return command

@click.group()
@click.option('--log-level', type=click.Choice(LOG_LEVELS, case_sensitive=False),
              default=None, help='Logging level (the config file\'s, else INFO, when unset)')
@click.option('--log-file', type=click.Path(dir_okay=False), default=None, help='Also log to this file')
@click.pass_context
def main(ctx: click.Context, log_level: Optional[str], log_file: Optional[str]):
    """Key-pose constrained, music-driven dance generation."""
    ctx.obj = {'log_level': log_level, 'log_file': log_file}
    configure_logging(log_level, log_file)

@main.command()
@click.option('--out', required=True, type=click.Path(file_okay=False), help='Dataset directory')
@click.option('--frames', type=int, default=240, show_default=True, help='Frames per clip (T)')
@click.option('--fps', type=float, default=30.0, show_default=True)
@click.option('--period', type=int, default=30, show_default=True, help='Beat period P in frames')
@click.option('--clips', type=int, default=2, show_default=True)
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--amplitude', type=float, default=0.3, show_default=True, help='Joint swing in radians')
@click.option('--phase-shift', type=int, default=0, show_default=True, help='Displace motion phase by frames')
@click.option('--test-fraction', type=float, default=0.0, show_default=True)
@handle_errors
def synth(out, frames, fps, period, clips, seed, amplitude, phase_shift, test_fraction):
    """Write a synthetic beat-locked dataset."""
    spec = SynthSpec(num_frames=frames, fps=fps, beat_period=period, num_clips=clips, seed=seed,
                     amplitude=amplitude, phase_shift=phase_shift, test_fraction=test_fraction)
    manifest = synth_dataset(spec, out)
    click.echo(f"wrote {len(manifest.samples)} clips to {out}")

@main.command()
@click.option('--data', required=True, type=click.Path(exists=True), help='Dataset manifest or directory')
@click.option('--out', required=True, type=click.Path(file_okay=False), help='Checkpoint directory')
@click.option('--lambda', 'lam', type=float, help='Key-pose weight λ')
@click.option('--sigma', type=float, help='Key-pose weight width σ (normalized time)')
@training_options
@handle_errors
def train(data, out, lam, sigma, config_path, preset, steps, batch_size, seed, lr_scale,
          seed_len, music_len, keys_per_sample, fixed_keys):
    """Train a model and write a checkpoint plus loss log."""
    config = build_config(config_path, preset, lam, sigma, steps, batch_size, seed, lr_scale,
                          seed_len, music_len, keys_per_sample, fixed_keys)
    samples = load_samples(data, 'train')
    manifest = load_manifest(data)
    probe = None
    if manifest.split('test'):
        probe = load_samples(data, 'test')[0]
    result = train_model(samples, config.model, config.loss, config.schedule, seed=config.seed, probe=probe)
    save_checkpoint(out, result.weights, config, step=result.steps)
    result.log.to_csv(Path(out) / 'loss.csv')
    click.echo(f"initial loss {result.log.initial_loss} final loss {result.log.final_loss}")

@main.command()
@click.option('--checkpoint', required=True, type=click.Path(exists=True, file_okay=False))
@click.option('--music', required=True, type=click.Path(exists=True, dir_okay=False), help='Music feature file (T×15)')
@click.option('--seed-motion', type=click.Path(exists=True, dir_okay=False),
              help="Seed motion; its first T' frames are used")
@click.option('--reference', type=click.Path(exists=True, dir_okay=False),
              help='Ground-truth motion for from_gt keys and as seed fallback')
@click.option('--keys', 'keys_path', type=click.Path(exists=True, dir_okay=False), help='Key-pose request JSON')
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='Output motion file')
@handle_errors
def generate(checkpoint, music, seed_motion, reference, keys_path, out):
    """Generate T frames of motion for a music clip."""
    loaded = load_checkpoint(checkpoint)
    seed_len = loaded.config.model.seed_len
    music_seq = load_music(music)
    reference_motion = load_motion(reference) if reference else None
    if seed_motion is None and reference_motion is None:
        raise UsageError("generate needs --seed-motion or --reference")
    seed_source = load_motion(seed_motion) if seed_motion else reference_motion
    if seed_source.num_frames < seed_len:
        raise UsageError(f"seed motion has {seed_source.num_frames} frames, the model needs {seed_len}")
    keys = load_keys(keys_path, reference_motion) if keys_path else KeyPoseSet()
    generated = generate_motion(music_seq, seed_source.window(0, seed_len), keys, loaded.weights,
                                name=Path(out).stem)
    save_motion(out, generated)
    click.echo(f"wrote {generated.num_frames} frames to {out}")

def _music_beats(music_path: str) -> List[int]:
    music = load_music(music_path)
    if music.beat_frames is not None:
        return list(music.beat_frames)
    return musical_beats(music).beat_frames

@main.command(name='eval')
@click.option('--motion', type=click.Path(exists=True, dir_okay=False), help='Motion to evaluate')
@click.option('--music', type=click.Path(exists=True, dir_okay=False), help='Music features with beats')
@click.option('--keys', 'keys_path', type=click.Path(exists=True, dir_okay=False), help='Key-pose request JSON')
@click.option('--reference', type=click.Path(exists=True, dir_okay=False),
              help='Ground-truth motion, evaluated as the real row')
@click.option('--data', type=click.Path(exists=True), help='Evaluate every clip of a manifest instead')
@click.option('--generated', type=click.Path(exists=True, file_okay=False),
              help='With --data: directory of <clip>.mdrt motions replacing the ground truth')
@click.option('--deltas', default='1,2,3,4,5', show_default=True, help='Beat windows δ in frames')
@click.option('--jobs', type=int, default=1, show_default=True, help='Clips evaluated concurrently')
@click.option('--out', required=True, help='Report path prefix; writes <out>.json and <out>.csv')
@handle_errors
def eval_command(motion, music, keys_path, reference, data, generated, deltas, jobs, out):
    """Consistency error, smoothness and beat hit rate."""
    delta_list = _ints(deltas, 'deltas')
    if data:
        _eval_manifest(data, generated, delta_list, jobs, out)
        return
    if not motion or not music:
        raise UsageError("eval needs --motion and --music, or --data")

    beats = _music_beats(music)
    generated_motion = load_motion(motion)
    reference_motion = load_motion(reference) if reference else None
    key_source = reference_motion if reference_motion is not None else generated_motion
    keys = load_keys(keys_path, key_source) if keys_path else None
    reports = {'synthesized': evaluate(generated_motion, keys, beats, delta_list)}
    if reference_motion is not None:
        reports['real'] = evaluate(reference_motion, keys, beats, delta_list)
    write_report_json(f"{out}.json", reports)
    write_report_csv(f"{out}.csv", reports)
    for label, report in reports.items():
        rates = ' '.join(f"δ={d}:{r:.3f}" for d, r in sorted(report.beat_hit_rate.items()))
        click.echo(f"{label}: E_c={report.consistency_error} S_cv={report.smoothness_cv} {rates}")

def _eval_manifest(data: str, generated: Optional[str], deltas: List[int], jobs: int, out: str) -> None:
    manifest = load_manifest(data)
    root = Path(data) if Path(data).is_dir() else Path(data).parent
    clips = []
    for entry in manifest.samples:
        _, motion = load_sample(root, entry)
        if generated:
            motion = load_motion(Path(generated) / f"{entry.name}.mdrt")
        clips.append(ClipEvaluation(name=entry.name, motion=motion, keys=None, music_beats=entry.beat_frames))
    result = asyncio.run(evaluate_batch(clips, jobs=jobs, deltas=deltas))
    reports = {report.name: report for report in result.reports}
    write_report_json(f"{out}.json", reports, aggregate=result.aggregate)
    write_report_csv(f"{out}.csv", reports)
    for key, value in result.aggregate.items():
        click.echo(f"{key}: {value:.6f}")
    if result.failed:
        raise ValidationError(f"{len(result.failed)} clips could not be evaluated: {sorted(result.failed)}")

@main.command()
@click.option('--preset', type=click.Choice(['large', 'light', 'tiny']), default='tiny', show_default=True)
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--frames', type=int, default=16, show_default=True, help='T of the checked model')
@click.option('--seed-len', type=int, default=4, show_default=True)
@click.option('--keys', 'num_keys', type=int, default=2, show_default=True)
@click.option('--coords', type=int, default=200, show_default=True, help='Sampled parameter coordinates')
@handle_errors
def gradcheck(preset, seed, frames, seed_len, num_keys, coords):
    """Finite-difference check of every op and of the full model."""
    failures = []
    for name, error in check_ops(seed).items():
        click.echo(f"{name}: {error:.3e}")
        if error >= OP_TOLERANCE:
            failures.append(name)
    config = tiny_check_config(frames, seed_len, num_keys, preset)
    model_error = model_grad_check(config, seed=seed, num_samples=coords)
    click.echo(f"model: {model_error:.3e}")
    if model_error >= MODEL_TOLERANCE:
        failures.append('model')
    if failures:
        raise NumericError(f"gradient check failed for {', '.join(failures)}")

@main.command()
@click.option('--omega', is_flag=True, help='Tabulate the loss weight ω(t)')
@click.option('--velocity', is_flag=True, help='Tabulate kinetic velocity and beats')
@click.option('--lambda', 'lams', default='3', show_default=True, help='λ values, comma-separated')
@click.option('--sigma', 'sigmas', default='0.1', show_default=True, help='σ values, paired with --lambda')
@click.option('--keys', 'key_fractions', default='0.25,0.5,0.75', show_default=True,
              help='Key positions as fractions of the sequence')
@click.option('--frames', type=int, default=100, show_default=True, help='T for the ω table')
@click.option('--music', type=click.Path(exists=True, dir_okay=False))
@click.option('--motion', type=click.Path(exists=True, dir_okay=False), help='Generated motion')
@click.option('--reference', type=click.Path(exists=True, dir_okay=False), help='Real motion')
@click.option('--out', required=True, type=click.Path(dir_okay=False), help='CSV path')
@handle_errors
def curves(omega, velocity, lams, sigmas, key_fractions, frames, music, motion, reference, out):
    """CSV tables of ω(t) or of velocity overlays."""
    if omega == velocity:
        raise UsageError("choose exactly one of --omega and --velocity")
    if omega:
        lam_values, sigma_values = _floats(lams, 'lambda'), _floats(sigmas, 'sigma')
        if len(sigma_values) == 1:
            sigma_values = sigma_values * len(lam_values)
        if len(lam_values) == 1:
            lam_values = lam_values * len(sigma_values)
        if len(lam_values) != len(sigma_values):
            raise UsageError("--lambda and --sigma need the same number of values")
        keys = key_fractions_to_frames(_floats(key_fractions, 'keys'), frames)
        rows = omega_rows(frames, keys, list(zip(lam_values, sigma_values)))
        write_rows_csv(out, rows, OMEGA_FIELDS)
        click.echo(f"wrote {len(rows)} rows to {out}")
        return
    if not music or not motion:
        raise UsageError("--velocity needs --music and --motion")
    music_seq = load_music(music)
    rows = velocity_rows(music_seq, load_motion(motion), load_motion(reference) if reference else None,
                         _music_beats(music))
    write_rows_csv(out, rows, VELOCITY_FIELDS)
    click.echo(f"wrote {len(rows)} rows to {out}")

@main.command()
@click.option('--data', required=True, type=click.Path(exists=True), help='Dataset manifest or directory')
@click.option('--out', required=True, type=click.Path(file_okay=False), help='Output directory')
@click.option('--lambdas', default=','.join(str(v) for v in DEFAULT_LAMBDAS), show_default=True)
@click.option('--sigmas', default=','.join(str(v) for v in DEFAULT_SIGMAS), show_default=True)
@training_options
@handle_errors
def sweep(data, out, lambdas, sigmas, config_path, preset, steps, batch_size, seed, lr_scale,
          seed_len, music_len, keys_per_sample, fixed_keys):
    """Train one model per (λ, σ) and report the consistency/smoothness trend."""
    config = build_config(config_path, preset, None, None, steps, batch_size, seed, lr_scale,
                          seed_len, music_len, keys_per_sample, fixed_keys)
    train_samples = load_samples(data, 'train')
    manifest = load_manifest(data)
    eval_samples = load_samples(data, 'test') if manifest.split('test') else train_samples
    result = run_sweep(train_samples, eval_samples, config, _floats(lambdas, 'lambdas'), _floats(sigmas, 'sigmas'))
    out_dir = Path(out)
    write_rows_csv(out_dir / 'sweep.csv', result.rows(), SWEEP_FIELDS)
    trends: Dict[str, dict] = {str(s): result.trend(s).summary() for s in result.sigmas()}
    (out_dir / 'trends.json').write_text(KeydanceSerializer.to_json_string(trends, indent=2) + '\n')
    for sigma, summary in trends.items():
        click.echo(f"σ={sigma}: {json.dumps(summary, sort_keys=True)}")

@main.command()
@click.option('--data', required=True, type=click.Path(exists=True), help='Source manifest or directory')
@click.option('--checkpoint', required=True, type=click.Path(exists=True, file_okay=False))
@click.option('--out', required=True, type=click.Path(file_okay=False), help='Output dataset directory')
@click.option('--variants', type=int, default=2, show_default=True, help='New clips per source clip')
@click.option('--seed', type=int, default=0, show_default=True)
@handle_errors
def regenerate(data, checkpoint, out, variants, seed):
    """Enlarge a dataset with clips regenerated from random key poses."""
    loaded = load_checkpoint(checkpoint)
    manifest = regenerate_dataset(data, loaded.weights, out, variants=variants, seed=seed)
    click.echo(f"wrote {len(manifest.samples)} regenerated clips to {out}")

if __name__ == '__main__':
    main()
