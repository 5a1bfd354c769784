"""
conftest.py
Shared factories and fixtures for the keydance test suite.
"""

import factory
import numpy as np
import pytest
from factory.fuzzy import FuzzyChoice

from keydance.config import DanceModelConfig, SynthSpec
from keydance.datasets.synth import synth_clip
from keydance.models import FEATURE_DIM, FRAME_DIM, KeyPoseSet, MotionSequence, MusicFeatureSequence, POSE_DIM

class MotionSequenceFactory(factory.Factory):
    class Meta:
        model = MotionSequence

    class Params:
        num_frames = 32
        seed = factory.Sequence(lambda n: n)

    frames = factory.LazyAttribute(
        lambda o: 0.5 * np.random.default_rng(o.seed).normal(size=(o.num_frames, FRAME_DIM))
    )
    fps = 30.0
    name = factory.Sequence(lambda n: f"motion_{n:03d}")

class MusicFeatureSequenceFactory(factory.Factory):
    class Meta:
        model = MusicFeatureSequence

    class Params:
        num_frames = 32
        seed = factory.Sequence(lambda n: 1000 + n)

    frames = factory.LazyAttribute(
        lambda o: np.random.default_rng(o.seed).uniform(0.0, 1.0, size=(o.num_frames, FEATURE_DIM))
    )
    fps = 30.0

class KeyPoseSetFactory(factory.Factory):
    class Meta:
        model = KeyPoseSet

    class Params:
        seed = factory.Sequence(lambda n: 2000 + n)

    frame_indices = FuzzyChoice([[8, 16], [10, 20, 30], [12]])
    poses = factory.LazyAttribute(
        lambda o: np.random.default_rng(o.seed).normal(size=(len(o.frame_indices), POSE_DIM))
    )

@pytest.fixture
def motion_factory():
    return MotionSequenceFactory

@pytest.fixture
def music_factory():
    return MusicFeatureSequenceFactory

@pytest.fixture
def keys_factory():
    return KeyPoseSetFactory

@pytest.fixture
def synth_spec():
    """A short beat-locked corpus: T=120, P=20."""
    return SynthSpec(num_frames=120, beat_period=20, num_clips=2, seed=3)

@pytest.fixture
def synth_pair(synth_spec):
    return synth_clip(synth_spec, 0)

@pytest.fixture
def tiny_config():
    """Tiny model with T'=4, T=16 and two keys."""
    return DanceModelConfig.from_preset('tiny', seed_len=4, music_len=16, keys_per_sample=2)
