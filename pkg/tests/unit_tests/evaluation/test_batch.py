"""
test_batch.py
Tests for concurrent batch evaluation.
"""

import numpy as np
import pytest

from keydance.config import SynthSpec
from keydance.datasets.synth import beat_frames, synth_clip
from keydance.evaluation import ClipEvaluation, aggregate_reports, evaluate, evaluate_batch
from keydance.models import FRAME_DIM, MotionSequence
from keydance.motion import extract_key_poses
from keydance.utils.exceptions import UsageError

CORPUS = SynthSpec(num_frames=80, beat_period=20, num_clips=3, seed=11)

def _clips():
    clips = []
    for index in range(CORPUS.num_clips):
        _, motion = synth_clip(CORPUS, index)
        clips.append(ClipEvaluation(
            name=motion.name,
            motion=motion,
            keys=extract_key_poses(motion, [10, 40]),
            music_beats=beat_frames(CORPUS),
        ))
    return clips

@pytest.mark.asyncio
async def test_batch_matches_single_evaluation():
    clips = _clips()
    result = await evaluate_batch(list(reversed(clips)), jobs=2)
    assert [r.name for r in result.reports] == sorted(c.name for c in clips)
    assert result.failed == {}
    for clip, report in zip(clips, result.reports):
        single = evaluate(clip.motion, clip.keys, clip.music_beats, name=clip.name)
        assert report.model_dump() == single.model_dump()

@pytest.mark.asyncio
async def test_aggregate_is_independent_of_jobs():
    clips = _clips()
    one = await evaluate_batch(clips, jobs=1)
    many = await evaluate_batch(clips, jobs=3)
    assert one.aggregate == many.aggregate
    assert one.aggregate['consistency_error'] == 0.0
    assert one.aggregate['beat_hit_rate@1'] == 1.0

@pytest.mark.asyncio
async def test_failed_clip_is_recorded():
    clips = _clips()
    clips.append(ClipEvaluation(
        name="too_short", motion=MotionSequence(frames=np.zeros((2, FRAME_DIM))), keys=None, music_beats=[0],
    ))
    result = await evaluate_batch(clips, jobs=2)
    assert list(result.failed) == ["too_short"]
    assert len(result.reports) == CORPUS.num_clips

@pytest.mark.asyncio
async def test_bad_jobs():
    with pytest.raises(UsageError):
        await evaluate_batch(_clips(), jobs=0)

@pytest.mark.asyncio
async def test_duplicate_names():
    clips = _clips()
    clips[1].name = clips[0].name
    with pytest.raises(UsageError):
        await evaluate_batch(clips)

def test_aggregate_skips_undefined():
    frozen = evaluate(MotionSequence(frames=np.zeros((6, FRAME_DIM))), None, [2], deltas=[1], name="a")
    _, motion = synth_clip(CORPUS, 0)
    moving = evaluate(motion, None, beat_frames(CORPUS), deltas=[1], name="b")
    aggregate = aggregate_reports([moving, frozen])
    assert 'consistency_error' not in aggregate
    assert aggregate['smoothness_cv'] == pytest.approx(moving.smoothness_cv)
    assert aggregate['beat_hit_rate@1'] == pytest.approx((0.0 + 1.0) / 2)
