"""
evaluation/metrics.py
Consistency error, smoothness, motion beats and beat hit rate.
"""

from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from ..models.motion import POSE_DIM, KeyPoseSet, MotionSequence
from ..models.reports import EvalReport
from ..motion.kinematics import kinetic_velocity
from ..utils.exceptions import UndefinedMetricError, ValidationError
from ..utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_DELTAS = (1, 2, 3, 4, 5)

def consistency_error(generated: MotionSequence, keys: KeyPoseSet) -> float:
    """
    E_c: mean over keys of the squared 144-D pose distance at the key frame.

    Raises:
        UndefinedMetricError: no keys
        ValidationError: a key frame outside the generated motion
    """
    if len(keys) == 0:
        raise UndefinedMetricError('consistency_error', 'no keys')
    indices = np.asarray(keys.frame_indices)
    if indices[-1] >= generated.num_frames:
        raise ValidationError(f"key frame {indices[-1]} outside the {generated.num_frames} generated frames")
    diff = generated.frames[indices, :POSE_DIM] - keys.poses
    return float(np.mean(np.sum(diff * diff, axis=1)))

def frame_differences(motion: MotionSequence) -> np.ndarray:
    """‖frame_{t+1} − frame_t‖ over all 147 dims."""
    return np.linalg.norm(np.diff(motion.frames, axis=0), axis=1)

def smoothness_cv(motion: MotionSequence) -> float:
    """
    S_cv = population sd / |mean| of the frame differences.

    Raises:
        ValidationError: fewer than three frames
        UndefinedMetricError: frozen motion (mean difference is zero)
    """
    if motion.num_frames < 3:
        raise ValidationError("smoothness needs at least three frames")
    diffs = frame_differences(motion)
    mean = float(np.mean(diffs))
    if mean == 0.0:
        raise UndefinedMetricError('smoothness_cv', 'frozen motion')
    return float(np.std(diffs) / abs(mean))

def velocity_minima(velocity: np.ndarray) -> List[int]:
    """
    Strict local minima of a series; a flat-bottomed minimum reports its first index.

    An index t qualifies when the nearest different value on each side is larger.
    """
    velocity = np.asarray(velocity, dtype=np.float64)
    minima = []
    t = 1
    n = velocity.size
    while t < n - 1:
        if velocity[t - 1] > velocity[t]:
            end = t
            while end + 1 < n and velocity[end + 1] == velocity[t]:
                end += 1
            if end + 1 < n and velocity[end + 1] > velocity[t]:
                minima.append(t)
            t = end + 1
        else:
            t += 1
    return minima

def detect_motion_beats(motion: MotionSequence) -> List[int]:
    """Frames where kinetic velocity has a local minimum."""
    if motion.num_frames < 3:
        raise ValidationError("beat detection needs at least three frames")
    return velocity_minima(kinetic_velocity(motion))

def count_beat_hits(motion_beats: Sequence[int], music_beats: Sequence[int], delta: int) -> int:
    """Musical beats with some motion beat within ±delta frames; motion beats may be reused."""
    if delta < 0:
        raise ValidationError("delta must be >= 0")
    motion = np.sort(np.asarray(list(motion_beats), dtype=np.int64))
    if motion.size == 0:
        return 0
    hits = 0
    for beat in music_beats:
        index = np.searchsorted(motion, beat - delta, side='left')
        if index < motion.size and motion[index] <= beat + delta:
            hits += 1
    return hits

def beat_hit_rate(motion_beats: Sequence[int], music_beats: Sequence[int], delta: int, fps: float = 30.0) -> float:
    """
    N_{d&m} / N_m with the window [−δ/f_d, δ/f_d] expressed in frames.

    Raises:
        UndefinedMetricError: no musical beats
    """
    if fps <= 0:
        raise ValidationError("fps must be > 0")
    music_beats = list(music_beats)
    if not music_beats:
        raise UndefinedMetricError('beat_hit_rate', 'no musical beats')
    return count_beat_hits(motion_beats, music_beats, delta) / len(music_beats)

def evaluate(generated: MotionSequence, keys: Optional[KeyPoseSet], music_beats: Sequence[int],
             deltas: Iterable[int] = DEFAULT_DELTAS, fps: Optional[float] = None,
             name: Optional[str] = None) -> EvalReport:
    """
    All metrics for one clip. Undefined metrics are left empty and the reason
    is recorded under `undefined` instead of raising.
    """
    fps = generated.fps if fps is None else fps
    keys = keys if keys is not None else KeyPoseSet()
    deltas = sorted(set(int(d) for d in deltas))
    undefined: Dict[str, str] = {}

    e_c = s_cv = None
    try:
        e_c = consistency_error(generated, keys)
    except UndefinedMetricError as e:
        undefined[e.metric] = e.reason
    try:
        s_cv = smoothness_cv(generated)
    except UndefinedMetricError as e:
        undefined[e.metric] = e.reason

    motion_beats = detect_motion_beats(generated)
    music_beats = list(music_beats)
    rates: Dict[int, float] = {}
    hits: Dict[int, int] = {}
    if music_beats:
        for delta in deltas:
            hits[delta] = count_beat_hits(motion_beats, music_beats, delta)
            rates[delta] = hits[delta] / len(music_beats)
    else:
        undefined['beat_hit_rate'] = 'no musical beats'

    report = EvalReport(
        name=name or generated.name,
        consistency_error=e_c,
        smoothness_cv=s_cv,
        beat_hit_rate=rates,
        beat_hits=hits,
        num_music_beats=len(music_beats),
        num_motion_beats=len(motion_beats),
        num_keys=len(keys),
        fps=fps,
        undefined=undefined,
    )
    logger.debug(f"Evaluated {report.name}: E_c={e_c} S_cv={s_cv} hit@δ={rates}")
    return report
