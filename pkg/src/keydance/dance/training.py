"""
dance/training.py
Training loop: random window crops, per-sample key poses taken from the
ground truth, the key-weighted loss and Adam with a step-wise schedule.

Everything random comes from generators seeded by `seed`, so a run is
reproducible bit for bit.
"""

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..autodiff import ops
from ..autodiff.optim import AdamState, adam_step
from ..autodiff.tensor import Tape
from ..config import DanceModelConfig, LossParams, TrainSchedule
from ..evaluation.metrics import consistency_error
from ..models.motion import MotionSequence
from ..models.music import MusicFeatureSequence
from ..motion.keyposes import KeySamplingStrategy, extract_key_poses, sample_key_positions
from ..utils.exceptions import NumericError, TrainingDivergedError, ValidationError
from ..utils.logging import get_logger
from .loss import weighted_loss
from .network import DanceModelWeights, active_keys, forward_tensor, generate

logger = get_logger(__name__)

@dataclass
class TrainingSample:
    """A music/motion pair. `key_positions`, when set, pins the keys (window-relative)."""
    name: str
    music: MusicFeatureSequence
    motion: MotionSequence
    key_positions: Optional[List[int]] = None

    def __post_init__(self):
        if self.music.num_frames != self.motion.num_frames:
            raise ValidationError(
                f"sample {self.name}: {self.music.num_frames} music frames vs {self.motion.num_frames} motion frames"
            )

@dataclass
class StepRecord:
    step: int
    lr: float
    loss: float
    probe_consistency_error: Optional[float] = None

@dataclass
class TrainingLog:
    records: List[StepRecord] = field(default_factory=list)

    @property
    def initial_loss(self) -> Optional[float]:
        return self.records[0].loss if self.records else None

    @property
    def final_loss(self) -> Optional[float]:
        return self.records[-1].loss if self.records else None

    def probes(self) -> List[Tuple[int, float]]:
        return [(r.step, r.probe_consistency_error) for r in self.records if r.probe_consistency_error is not None]

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open('w', newline='') as f:
            writer = csv.writer(f)
            writer.writerow(['step', 'lr', 'loss', 'probe_consistency_error'])
            for r in self.records:
                writer.writerow([
                    r.step, repr(r.lr), repr(r.loss),
                    '' if r.probe_consistency_error is None else repr(r.probe_consistency_error)
                ])
        return path

@dataclass
class TrainingResult:
    weights: DanceModelWeights
    log: TrainingLog
    optimizer: AdamState
    steps: int

class Trainer:
    """
    Owns the model, optimizer and data stream of one training run.

    Args:
        samples: Training pairs, each at least T frames long
        config: Architecture and sequence lengths
        loss_params: λ and σ
        schedule: Steps, batch size and learning rate
        seed: Seeds both initialization and data order
        probe: Held-out pair whose E_c is logged every probe_interval steps
        weights: Start from these instead of a fresh initialization
    """

    def __init__(self,
                 samples: Sequence[TrainingSample],
                 config: DanceModelConfig,
                 loss_params: LossParams,
                 schedule: TrainSchedule,
                 seed: int = 0,
                 probe: Optional[TrainingSample] = None,
                 weights: Optional[DanceModelWeights] = None):
        if not samples:
            raise ValidationError("training needs at least one sample")
        for sample in samples:
            if sample.motion.num_frames < config.music_len:
                raise ValidationError(
                    f"sample {sample.name} has {sample.motion.num_frames} frames, the model needs {config.music_len}"
                )
        self.samples = list(samples)
        self.config = config
        self.loss_params = loss_params
        self.schedule = schedule
        self.seed = seed
        self.probe = probe
        self.weights = weights if weights is not None else DanceModelWeights(config, seed=seed)
        self.optimizer = AdamState(lr=schedule.base_lr * schedule.lr_scale)
        self.rng = np.random.default_rng([seed, 1])
        self.log = TrainingLog()
        self._order: List[int] = []
        self._fixed_keys: Dict[str, List[int]] = {}
        if not schedule.resample_keys:
            key_rng = np.random.default_rng([seed, 2])
            for sample in self.samples:
                self._fixed_keys[sample.name] = (
                    list(sample.key_positions) if sample.key_positions is not None else self._draw_keys(key_rng)
                )

    def _draw_keys(self, rng: np.random.Generator) -> List[int]:
        config = self.config
        return sample_key_positions(config.music_len, config.seed_len, config.keys_per_sample,
                                    KeySamplingStrategy.RANDOM, rng, allow_seed_span=config.keys_in_seed_span)

    def _next_batch(self) -> List[TrainingSample]:
        batch = []
        while len(batch) < self.schedule.batch_size:
            if not self._order:
                self._order = list(self.rng.permutation(len(self.samples)))
            batch.append(self.samples[self._order.pop(0)])
        return batch

    def _crop(self, sample: TrainingSample) -> Tuple[MusicFeatureSequence, MotionSequence]:
        """A random T-frame window; the seed is the first T′ frames of it."""
        length = self.config.music_len
        start = int(self.rng.integers(0, sample.motion.num_frames - length + 1))
        return sample.music.window(start, start + length), sample.motion.window(start, start + length)

    def _keys_for(self, sample: TrainingSample) -> List[int]:
        if sample.key_positions is not None:
            return list(sample.key_positions)
        if not self.schedule.resample_keys:
            return self._fixed_keys[sample.name]
        return self._draw_keys(self.rng)

    def batch_loss(self, batch: Sequence[TrainingSample]):
        """Mean weighted loss over the batch, recorded on the active tape."""
        losses = []
        for sample in batch:
            music, motion = self._crop(sample)
            positions = self._keys_for(sample)
            keys = active_keys(extract_key_poses(motion, positions), self.config.seed_len,
                               self.config.music_len, self.config)
            seed = motion.window(0, self.config.seed_len)
            prediction = forward_tensor(music, seed, keys, self.weights)
            losses.append(weighted_loss(prediction, motion.frames, keys.frame_indices,
                                        self.loss_params.lam, self.loss_params.sigma))
        total = losses[0]
        for loss in losses[1:]:
            total = ops.add(total, loss)
        return ops.scale(total, 1.0 / len(losses))

    def step(self, step: int) -> StepRecord:
        lr = self.schedule.lr_at(step)
        batch = self._next_batch()
        self.weights.zero_grad()
        try:
            with Tape() as tape:
                loss = self.batch_loss(batch)
            value = loss.item()
            tape.backward(loss)
        except NumericError as e:
            raise TrainingDivergedError(step, lr, str(e))
        if not np.isfinite(value):
            raise TrainingDivergedError(step, lr, f"loss is {value}")
        adam_step(self.weights.named_parameters(), self.optimizer, lr)
        return StepRecord(step=step, lr=lr, loss=value)

    def probe_error(self) -> Optional[float]:
        """E_c on the first T frames of the probe pair with uniformly spaced keys."""
        if self.probe is None:
            return None
        config = self.config
        music = self.probe.music.window(0, config.music_len)
        motion = self.probe.motion.window(0, config.music_len)
        positions = self.probe.key_positions if self.probe.key_positions is not None else sample_key_positions(
            config.music_len, config.seed_len, config.keys_per_sample, KeySamplingStrategy.UNIFORM,
            allow_seed_span=config.keys_in_seed_span
        )
        if not positions:
            return None
        keys = extract_key_poses(motion, positions)
        generated = generate(music, motion.window(0, config.seed_len), keys, self.weights)
        return consistency_error(generated, keys)

    def run(self) -> TrainingResult:
        schedule = self.schedule
        logger.info(
            f"Training {self.config.preset} model ({self.weights.num_parameters()} parameters) "
            f"for {schedule.total_steps} steps, batch {schedule.batch_size}, "
            f"λ={self.loss_params.lam} σ={self.loss_params.sigma}"
        )
        for step in range(schedule.total_steps):
            record = self.step(step)
            last = step == schedule.total_steps - 1
            if schedule.probe_interval > 0 and (step % schedule.probe_interval == 0 or last):
                record.probe_consistency_error = self.probe_error()
            self.log.records.append(record)
            if schedule.log_interval > 0 and (step % schedule.log_interval == 0 or last):
                probe = record.probe_consistency_error
                logger.info(
                    f"step {step} lr {record.lr:.2e} loss {record.loss:.6f}"
                    + (f" probe E_c {probe:.6f}" if probe is not None else "")
                )
        return TrainingResult(weights=self.weights, log=self.log, optimizer=self.optimizer,
                              steps=schedule.total_steps)

def train(samples: Sequence[TrainingSample],
          config: DanceModelConfig,
          loss_params: LossParams,
          schedule: TrainSchedule,
          seed: int = 0,
          probe: Optional[TrainingSample] = None,
          weights: Optional[DanceModelWeights] = None) -> TrainingResult:
    """Train a model; zero steps returns the initialization unchanged."""
    return Trainer(samples, config, loss_params, schedule, seed, probe, weights).run()
