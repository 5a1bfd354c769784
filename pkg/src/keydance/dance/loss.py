"""
dance/loss.py
Key-weighted reconstruction loss.
"""

from typing import Optional, Sequence, Union

import numpy as np

from ..autodiff import ops
from ..autodiff.tensor import Tensor
from ..utils.exceptions import DimensionError, ValidationError

def _check_params(lam: float, sigma: float) -> None:
    if lam < 0:
        raise ValidationError(f"lambda must be >= 0, got {lam}")
    if sigma <= 0:
        raise ValidationError(f"sigma must be > 0, got {sigma}")

def weight_curve_array(num_frames: int, key_positions: Sequence[int], lam: float, sigma: float) -> np.ndarray:
    """ω(t) for t = 0..T-1 with normalized time τ = t/T."""
    _check_params(lam, sigma)
    if num_frames < 1:
        raise ValidationError("weight curve needs at least one frame")
    tau = np.arange(num_frames, dtype=np.float64) / num_frames
    centers = np.asarray(list(key_positions), dtype=np.float64) / num_frames
    if centers.size == 0:
        return np.ones(num_frames)
    bumps = np.exp(-((tau[:, None] - centers[None, :]) ** 2) / (2.0 * sigma ** 2))
    return 1.0 + lam * bumps.sum(axis=1)

def weight_curve(t: int, key_positions: Sequence[int], num_frames: int, lam: float, sigma: float) -> float:
    """ω at a single frame t."""
    if not 0 <= t < num_frames:
        raise ValidationError(f"frame {t} outside [0, {num_frames})")
    return float(weight_curve_array(num_frames, key_positions, lam, sigma)[t])

def weighted_loss(pred: Tensor, target: Union[Tensor, np.ndarray], key_positions: Sequence[int],
                  lam: float, sigma: float, weights: Optional[np.ndarray] = None) -> Tensor:
    """
    (1/T) Σ_t ω(t)·‖pred_t − target_t‖².

    Args:
        pred: T×147 prediction on the tape
        target: T×147 ground truth
        key_positions: Key frame indices in [0, T)
        lam: λ, bump height
        sigma: σ, bump width in normalized time
        weights: Precomputed ω, overrides lam/sigma

    Returns:
        Scalar loss tensor
    """
    target = target if isinstance(target, Tensor) else Tensor.constant(target)
    if pred.shape != target.shape or pred.data.ndim != 2:
        raise DimensionError(f"prediction {pred.shape} and target {target.shape} differ")
    num_frames = pred.shape[0]
    if weights is None:
        weights = weight_curve_array(num_frames, key_positions, lam, sigma)
    per_frame = ops.scale_rows(ops.square(ops.sub(pred, target)), weights)
    return ops.scale(ops.sum(per_frame), 1.0 / num_frames)
