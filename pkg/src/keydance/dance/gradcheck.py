"""
dance/gradcheck.py
End-to-end gradient check of the weighted loss through the whole model.
"""

import numpy as np

from ..autodiff.gradcheck import grad_check
from ..config import DanceModelConfig
from ..models.motion import FRAME_DIM, MotionSequence
from ..models.music import FEATURE_DIM, MusicFeatureSequence
from ..motion.keyposes import KeySamplingStrategy, extract_key_poses, sample_key_positions
from ..utils.logging import get_logger
from .loss import weighted_loss
from .network import DanceModelWeights, forward_tensor

logger = get_logger(__name__)

MODEL_FLOOR = 1e-4

def model_grad_check(config: DanceModelConfig, seed: int = 0, num_samples: int = 200,
                     lam: float = 3.0, sigma: float = 0.1, eps: float = 1e-5,
                     floor: float = MODEL_FLOOR) -> float:
    """
    Max relative error of d(weighted loss)/d(parameters) on random inputs.

    Inputs are T music frames, a T′-frame seed and keys_per_sample keys drawn
    from a random ground truth, all sized by `config`.
    """
    rng = np.random.default_rng([seed, 3])
    num_frames, seed_len = config.music_len, config.seed_len
    music = MusicFeatureSequence(frames=rng.uniform(0.0, 1.0, (num_frames, FEATURE_DIM)))
    target = MotionSequence(frames=0.5 * rng.normal(size=(num_frames, FRAME_DIM)))
    positions = sample_key_positions(num_frames, seed_len, config.keys_per_sample,
                                     KeySamplingStrategy.RANDOM, rng)
    keys = extract_key_poses(target, positions)
    seed_motion = target.window(0, seed_len)
    weights = DanceModelWeights(config, seed=seed)

    def loss():
        return weighted_loss(forward_tensor(music, seed_motion, keys, weights), target.frames, positions, lam, sigma)

    error = grad_check(loss, weights.parameters(), eps=eps, num_samples=num_samples, seed=seed, floor=floor)
    logger.info(f"Model gradient check on {num_samples} coordinates: max rel err {error:.3e}")
    return error

def tiny_check_config(num_frames: int = 16, seed_len: int = 4, num_keys: int = 2,
                      preset: str = 'tiny') -> DanceModelConfig:
    """The small model used for end-to-end gradient checks."""
    return DanceModelConfig.from_preset(preset, seed_len=seed_len, music_len=num_frames, keys_per_sample=num_keys)
