"""
experiments/sweep.py
Train one model per (λ, σ) cell on the same data and seed and compare key
consistency against smoothness.
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import spearmanr

from ..config import KeydanceConfig, LossParams
from ..dance.network import DanceModelWeights, generate
from ..dance.training import TrainingSample, train
from ..evaluation.metrics import consistency_error, smoothness_cv
from ..motion.keyposes import KeySamplingStrategy, extract_key_poses, sample_key_positions
from ..utils.exceptions import UndefinedMetricError, ValidationError
from ..utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_LAMBDAS = (0.0, 1.0, 3.0, 5.0)
DEFAULT_SIGMAS = (0.05, 0.1, 0.2)
EVAL_KEYS = 4
SWEEP_FIELDS = ['lambda', 'sigma', 'consistency_error', 'smoothness_cv', 'final_loss']

@dataclass
class SweepCell:
    lam: float
    sigma: float
    consistency_error: float
    smoothness_cv: Optional[float]
    final_loss: Optional[float]

@dataclass
class TrendCheck:
    """λ trend at one σ, cells ordered by λ."""
    sigma: float
    lams: List[float]
    errors: List[float]
    smoothness: List[Optional[float]]

    @property
    def error_improves(self) -> bool:
        """E_c at the largest λ is below E_c at the smallest."""
        return self.errors[-1] < self.errors[0]

    @property
    def inversions(self) -> int:
        """Adjacent pairs where E_c rises with λ."""
        return sum(1 for a, b in zip(self.errors, self.errors[1:]) if b > a)

    @property
    def passes(self) -> bool:
        return self.error_improves and self.inversions <= 1

    @property
    def smoothness_spearman(self) -> Optional[float]:
        values = [s for s in self.smoothness if s is not None]
        if len(values) != len(self.lams) or len(set(values)) < 2:
            return None
        rho = spearmanr(self.lams, values).correlation
        return None if np.isnan(rho) else float(rho)

    @property
    def smoothness_tradeoff(self) -> bool:
        """S_cv rises with λ, by endpoints or by rank correlation."""
        first, last = self.smoothness[0], self.smoothness[-1]
        rho = self.smoothness_spearman
        return (first is not None and last is not None and last > first) or (rho is not None and rho > 0)

    @property
    def tradeoff_contradicted(self) -> bool:
        """E_c and S_cv both strictly improve at every step of λ."""
        if any(s is None for s in self.smoothness):
            return False
        error_down = all(b < a for a, b in zip(self.errors, self.errors[1:]))
        smooth_down = all(b < a for a, b in zip(self.smoothness, self.smoothness[1:]))
        return error_down and smooth_down

    def summary(self) -> Dict[str, Any]:
        return {
            'sigma': self.sigma,
            'error_improves': self.error_improves,
            'inversions': self.inversions,
            'passes': self.passes,
            'smoothness_spearman': self.smoothness_spearman,
            'smoothness_tradeoff': self.smoothness_tradeoff,
            'tradeoff_contradicted': self.tradeoff_contradicted,
        }

@dataclass
class SweepResult:
    cells: List[SweepCell] = field(default_factory=list)

    def sigmas(self) -> List[float]:
        return sorted({c.sigma for c in self.cells})

    def trend(self, sigma: float) -> TrendCheck:
        cells = sorted((c for c in self.cells if c.sigma == sigma), key=lambda c: c.lam)
        if len(cells) < 2:
            raise ValidationError(f"σ={sigma} needs at least two λ values for a trend")
        return TrendCheck(
            sigma=sigma,
            lams=[c.lam for c in cells],
            errors=[c.consistency_error for c in cells],
            smoothness=[c.smoothness_cv for c in cells],
        )

    def rows(self) -> List[Dict[str, Any]]:
        return [
            {
                'lambda': c.lam, 'sigma': c.sigma, 'consistency_error': c.consistency_error,
                'smoothness_cv': '' if c.smoothness_cv is None else c.smoothness_cv,
                'final_loss': '' if c.final_loss is None else c.final_loss,
            }
            for c in sorted(self.cells, key=lambda c: (c.sigma, c.lam))
        ]

def evaluate_model(weights: DanceModelWeights, samples: Sequence[TrainingSample],
                   num_keys: int = EVAL_KEYS) -> Tuple[float, Optional[float]]:
    """
    Mean E_c and S_cv over the first T frames of each sample, keys evenly
    spread over the generated span.
    """
    config = weights.config
    errors, smoothness = [], []
    for sample in samples:
        music = sample.music.window(0, config.music_len)
        motion = sample.motion.window(0, config.music_len)
        positions = sample_key_positions(config.music_len, config.seed_len, num_keys, KeySamplingStrategy.UNIFORM)
        keys = extract_key_poses(motion, positions)
        generated = generate(music, motion.window(0, config.seed_len), keys, weights)
        errors.append(consistency_error(generated, keys))
        try:
            smoothness.append(smoothness_cv(generated))
        except UndefinedMetricError:
            pass
    mean_s = float(np.mean(smoothness)) if len(smoothness) == len(samples) else None
    return float(np.mean(errors)), mean_s

def run_sweep(train_samples: Sequence[TrainingSample], eval_samples: Sequence[TrainingSample],
              config: KeydanceConfig, lams: Sequence[float] = DEFAULT_LAMBDAS,
              sigmas: Sequence[float] = DEFAULT_SIGMAS) -> SweepResult:
    """Every cell shares data, seed, schedule and architecture; only λ and σ change."""
    if not eval_samples:
        raise ValidationError("sweep needs at least one evaluation sample")
    result = SweepResult()
    for sigma in sigmas:
        for lam in lams:
            loss = LossParams(lam=lam, sigma=sigma)
            schedule = replace(config.schedule, probe_interval=0)
            trained = train(train_samples, config.model, loss, schedule, seed=config.seed)
            e_c, s_cv = evaluate_model(trained.weights, eval_samples)
            result.cells.append(SweepCell(lam=lam, sigma=sigma, consistency_error=e_c,
                                          smoothness_cv=s_cv, final_loss=trained.log.final_loss))
            logger.info(f"Sweep cell λ={lam} σ={sigma}: E_c={e_c:.6f} S_cv={s_cv}")
    return result
