"""
evaluation/batch.py
Concurrent evaluation of many clips.

Each clip is evaluated in a worker thread; at most `jobs` run at a time. The
aggregate is computed from reports sorted by clip name, so the output does
not depend on completion order.
"""

import asyncio
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from ..models.motion import KeyPoseSet, MotionSequence
from ..models.reports import EvalReport
from ..utils.exceptions import KeydanceException, UsageError
from ..utils.logging import get_logger
from .metrics import DEFAULT_DELTAS, evaluate

logger = get_logger(__name__)

@dataclass
class ClipEvaluation:
    """One clip to evaluate."""
    name: str
    motion: MotionSequence
    keys: Optional[KeyPoseSet]
    music_beats: Sequence[int]
    fps: Optional[float] = None

@dataclass
class BatchResult:
    """Reports sorted by name, failures by name, and per-metric means."""
    reports: List[EvalReport] = field(default_factory=list)
    failed: Dict[str, str] = field(default_factory=dict)
    aggregate: Dict[str, float] = field(default_factory=dict)

def aggregate_reports(reports: Iterable[EvalReport]) -> Dict[str, float]:
    """Mean of every metric over the reports where it is defined."""
    reports = sorted(reports, key=lambda r: r.name or '')
    values: Dict[str, List[float]] = {}
    for report in reports:
        if report.consistency_error is not None:
            values.setdefault('consistency_error', []).append(report.consistency_error)
        if report.smoothness_cv is not None:
            values.setdefault('smoothness_cv', []).append(report.smoothness_cv)
        for delta, rate in sorted(report.beat_hit_rate.items()):
            values.setdefault(f'beat_hit_rate@{delta}', []).append(rate)
    return {key: float(np.mean(vals)) for key, vals in sorted(values.items())}

async def evaluate_batch(clips: Sequence[ClipEvaluation], jobs: int = 1,
                         deltas: Iterable[int] = DEFAULT_DELTAS) -> BatchResult:
    """
    Evaluate clips with up to `jobs` running concurrently.

    Raises:
        UsageError: jobs < 1 or duplicate clip names
    """
    if jobs < 1:
        raise UsageError("jobs must be >= 1")
    names = [clip.name for clip in clips]
    if len(set(names)) != len(names):
        raise UsageError("clip names must be unique within a batch")
    deltas = tuple(deltas)
    semaphore = asyncio.Semaphore(jobs)

    async def run(clip: ClipEvaluation) -> EvalReport:
        async with semaphore:
            return await asyncio.to_thread(
                evaluate, clip.motion, clip.keys, clip.music_beats, deltas, clip.fps, clip.name
            )

    outcomes = await asyncio.gather(*(run(clip) for clip in clips), return_exceptions=True)

    result = BatchResult()
    for clip, outcome in zip(clips, outcomes):
        if isinstance(outcome, EvalReport):
            result.reports.append(outcome)
        elif isinstance(outcome, KeydanceException):
            logger.error(f"Failed to evaluate {clip.name}: {outcome}")
            result.failed[clip.name] = str(outcome)
        else:
            raise outcome
    result.reports.sort(key=lambda r: r.name or '')
    result.aggregate = aggregate_reports(result.reports)
    logger.info(f"Evaluated {len(result.reports)} clips ({len(result.failed)} failed) with {jobs} jobs")
    return result
