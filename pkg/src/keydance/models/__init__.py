from .motion import (
    MotionFrame, MotionSequence, KeyPoseSet,
    NUM_JOINTS, ROTATION_DIM, POSE_DIM, TRANSLATION_DIM, FRAME_DIM, DEFAULT_FPS
)
from .music import (
    MusicFeatureSequence, BeatAnnotation,
    CHROMA_DIM, DOWNBEAT_DIM, ONSET_DIM, FEATURE_DIM, BEAT_CHANNEL, DOWNBEAT_CHANNEL, ONSET_CHANNEL
)
from .reports import EvalReport
from .dataset import SampleEntry, DatasetManifest

__all__ = [
    'MotionFrame', 'MotionSequence', 'KeyPoseSet',
    'MusicFeatureSequence', 'BeatAnnotation',
    'EvalReport', 'SampleEntry', 'DatasetManifest',
    'NUM_JOINTS', 'ROTATION_DIM', 'POSE_DIM', 'TRANSLATION_DIM', 'FRAME_DIM', 'DEFAULT_FPS',
    'CHROMA_DIM', 'DOWNBEAT_DIM', 'ONSET_DIM', 'FEATURE_DIM', 'BEAT_CHANNEL', 'DOWNBEAT_CHANNEL', 'ONSET_CHANNEL'
]
