"""
keydance configuration management.
"""

from typing import Dict, Any, Optional, Tuple
from dataclasses import asdict, dataclass, field, replace
import yaml
import json
import os

from .utils.exceptions import ConfigError, ValidationError
from .utils.logging import get_logger

logger = get_logger(__name__)

PRESETS = ('large', 'light', 'tiny')
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')

@dataclass
class TransformerConfig:
    """Transformer stack configuration."""
    num_layers: int
    num_heads: int
    d_model: int
    ff_dim: Optional[int] = None  # 4·d_model when unset
    max_len: int = 512

    def __post_init__(self):
        if self.ff_dim is None:
            self.ff_dim = 4 * self.d_model
        if self.num_layers < 0 or self.num_heads <= 0 or self.d_model <= 0 or self.ff_dim <= 0 or self.max_len <= 0:
            raise ValidationError(f"transformer sizes must be positive: {self}")
        if self.d_model % self.num_heads:
            raise ValidationError(f"d_model {self.d_model} is not divisible by {self.num_heads} heads")

    @property
    def head_dim(self) -> int:
        return self.d_model // self.num_heads

@dataclass
class DanceModelConfig:
    """Architecture and sequence bookkeeping of the dance generator."""
    preset: str
    cross: TransformerConfig
    encoder_layers: int = 4
    seed_len: int = 10
    music_len: int = 120
    keys_per_sample: int = 4
    keys_in_seed_span: bool = False
    use_local_pe: bool = True

    def __post_init__(self):
        if self.encoder_layers < 0:
            raise ValidationError("encoder_layers must be >= 0")
        if not 1 <= self.seed_len < self.music_len:
            raise ValidationError(f"seed_len must satisfy 1 <= T' < T, got T'={self.seed_len}, T={self.music_len}")
        if self.seed_len + self.music_len > self.cross.max_len:
            raise ValidationError(f"T'+T={self.seed_len + self.music_len} exceeds max_len {self.cross.max_len}")
        if self.cross.d_model % 4:
            raise ValidationError("d_model must be divisible by 4 (two even halves for the local positional embedding)")
        if self.keys_per_sample < 0:
            raise ValidationError("keys_per_sample must be >= 0")

    @property
    def d_model(self) -> int:
        return self.cross.d_model

    @property
    def encoder(self) -> TransformerConfig:
        return replace(self.cross, num_layers=self.encoder_layers)

    @classmethod
    def from_preset(cls, preset: str = 'tiny', **overrides) -> 'DanceModelConfig':
        """Build a config from the large/light/tiny presets, with field overrides."""
        sizes = {
            'large': dict(num_layers=12, num_heads=10, d_model=800, encoder_layers=4),
            'light': dict(num_layers=8, num_heads=4, d_model=256, encoder_layers=4),
            'tiny': dict(num_layers=2, num_heads=2, d_model=32, encoder_layers=1),
        }
        if preset not in sizes:
            raise ConfigError(f"Unknown preset {preset!r}; expected one of {PRESETS}")
        base = dict(sizes[preset])
        base.update({k: v for k, v in overrides.items() if k in ('num_layers', 'num_heads', 'd_model', 'encoder_layers')})
        seed_len = overrides.get('seed_len', 10)
        music_len = overrides.get('music_len', 120)
        cross = TransformerConfig(
            num_layers=base['num_layers'],
            num_heads=base['num_heads'],
            d_model=base['d_model'],
            ff_dim=overrides.get('ff_dim'),
            max_len=overrides.get('max_len', max(512, seed_len + music_len)),
        )
        return cls(
            preset=preset,
            cross=cross,
            encoder_layers=base['encoder_layers'],
            seed_len=seed_len,
            music_len=music_len,
            keys_per_sample=overrides.get('keys_per_sample', 4),
            keys_in_seed_span=overrides.get('keys_in_seed_span', False),
            use_local_pe=overrides.get('use_local_pe', True),
        )

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DanceModelConfig':
        data = dict(data)
        cross = data.pop('cross', None)
        if cross is None:
            return cls.from_preset(data.pop('preset', 'tiny'), **data)
        return cls(cross=TransformerConfig(**cross), **data)

@dataclass
class LossParams:
    """Weighted reconstruction loss: ω(t) = 1 + λ·Σ exp(-(τ-τ_i)²/2σ²), τ = t/T."""
    lam: float = 3.0
    sigma: float = 0.1

    def __post_init__(self):
        if self.lam < 0:
            raise ValidationError("lambda must be >= 0")
        if self.sigma <= 0:
            raise ValidationError("sigma must be > 0")

@dataclass
class TrainSchedule:
    """Step-wise learning rate and batching.

    The full-scale schedule holds 1e-4 and drops to 1e-5 at 100k and 1e-6 at 250k
    iterations. Desk runs keep the three stages but place the drops at fixed
    fractions of total_steps and multiply every stage by lr_scale.
    """
    total_steps: int = 2000
    batch_size: int = 4
    base_lr: float = 1e-4
    decay: float = 0.1
    milestones: Tuple[float, ...] = (0.4, 0.8)
    absolute_milestones: bool = False
    lr_scale: float = 1.0
    resample_keys: bool = True
    log_interval: int = 100
    probe_interval: int = 200

    def __post_init__(self):
        self.milestones = tuple(self.milestones)
        if self.total_steps < 0 or self.batch_size < 1:
            raise ValidationError("total_steps must be >= 0 and batch_size >= 1")
        if any(b <= a for a, b in zip(self.milestones, self.milestones[1:])):
            raise ValidationError("learning-rate milestones must be increasing")

    @classmethod
    def full_scale(cls, total_steps: int = 300_000, batch_size: int = 20) -> 'TrainSchedule':
        return cls(total_steps=total_steps, batch_size=batch_size, base_lr=1e-4,
                   milestones=(100_000, 250_000), absolute_milestones=True)

    def thresholds(self) -> Tuple[int, ...]:
        if self.absolute_milestones:
            return tuple(int(m) for m in self.milestones)
        return tuple(int(round(m * self.total_steps)) for m in self.milestones)

    def lr_at(self, step: int) -> float:
        drops = sum(1 for threshold in self.thresholds() if step >= threshold)
        return self.base_lr * self.lr_scale * (self.decay ** drops)

@dataclass
class SynthSpec:
    """Synthetic corpus: beat-locked motion paired with beat-flagged music features."""
    num_frames: int = 240
    fps: float = 30.0
    beat_period: int = 30
    num_clips: int = 2
    seed: int = 0
    amplitude: float = 0.3
    phase_shift: int = 0
    test_fraction: float = 0.0

    def __post_init__(self):
        if self.beat_period < 2:
            raise ValidationError("beat period P must be >= 2")
        if self.num_frames < 2 * self.beat_period:
            raise ValidationError("T must be at least 2P")
        if self.num_clips < 1 or self.fps <= 0 or self.amplitude <= 0:
            raise ValidationError("num_clips, fps and amplitude must be positive")
        if not 0.0 <= self.test_fraction < 1.0:
            raise ValidationError("test_fraction must be in [0, 1)")

@dataclass
class KeydanceConfig:
    """Main keydance configuration."""
    model: DanceModelConfig = field(default_factory=DanceModelConfig.from_preset)
    loss: LossParams = field(default_factory=LossParams)
    schedule: TrainSchedule = field(default_factory=TrainSchedule)
    seed: int = 0
    log_level: str = 'INFO'

    def __post_init__(self):
        self.log_level = str(self.log_level).upper()
        if self.log_level not in LOG_LEVELS:
            raise ConfigError(f"Unknown log level {self.log_level!r}; expected one of {LOG_LEVELS}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'KeydanceConfig':
        """Create config from dictionary."""
        try:
            return cls(
                model=DanceModelConfig.from_dict(data.get('model', {})),
                loss=LossParams(**data.get('loss', {})),
                schedule=TrainSchedule(**data.get('schedule', {})),
                seed=int(data.get('seed', 0)),
                log_level=data.get('log_level', 'INFO')
            )
        except Exception as e:
            raise ConfigError(f"Failed to create config: {e}")

    @classmethod
    def from_file(cls, path: str) -> 'KeydanceConfig':
        """Load configuration from file."""
        try:
            with open(path) as f:
                if path.endswith('.yaml') or path.endswith('.yml'):
                    data = yaml.safe_load(f) or {}
                else:
                    data = json.load(f)
        except Exception as e:
            raise ConfigError(f"Failed to load config file: {e}")
        return cls.from_dict(data)

    @classmethod
    def from_env(cls) -> 'KeydanceConfig':
        """Load configuration from environment variables."""
        try:
            return cls(
                model=DanceModelConfig.from_preset(os.getenv('KEYDANCE_PRESET', 'tiny')),
                loss=LossParams(
                    lam=float(os.getenv('KEYDANCE_LAMBDA', '3.0')),
                    sigma=float(os.getenv('KEYDANCE_SIGMA', '0.1'))
                ),
                schedule=TrainSchedule(
                    total_steps=int(os.getenv('KEYDANCE_STEPS', '2000')),
                    batch_size=int(os.getenv('KEYDANCE_BATCH_SIZE', '4'))
                ),
                seed=int(os.getenv('KEYDANCE_SEED', '0')),
                log_level=os.getenv('KEYDANCE_LOG_LEVEL', 'INFO')
            )
        except Exception as e:
            raise ConfigError(f"Failed to load config from env: {e}")

    def to_dict(self) -> Dict[str, Any]:
        """Convert config to dictionary."""
        schedule = asdict(self.schedule)
        schedule['milestones'] = list(schedule['milestones'])
        return {
            'model': asdict(self.model),
            'loss': asdict(self.loss),
            'schedule': schedule,
            'seed': self.seed,
            'log_level': self.log_level
        }

    def save(self, path: str) -> None:
        """Save configuration to file."""
        try:
            data = self.to_dict()
            with open(path, 'w') as f:
                if path.endswith('.yaml') or path.endswith('.yml'):
                    yaml.dump(data, f, default_flow_style=False)
                else:
                    json.dump(data, f, indent=2, sort_keys=True)
        except Exception as e:
            raise ConfigError(f"Failed to save config: {e}")
