"""
keydance package initialization.
"""

# Export data models
from .models import (
    MotionFrame, MotionSequence, KeyPoseSet,
    MusicFeatureSequence, BeatAnnotation,
    EvalReport, SampleEntry, DatasetManifest,
)

# Export configuration
from .config import DanceModelConfig, KeydanceConfig, LossParams, SynthSpec, TrainSchedule, TransformerConfig

# Export the model and its drivers
from .dance import (
    DanceModelWeights, generate, weighted_loss, weight_curve,
    Trainer, train, save_checkpoint, load_checkpoint,
)
from .evaluation import evaluate, evaluate_batch

# Export serializers
from .serializers.json_serializer import KeydanceSerializer

__all__ = [
    'MotionFrame', 'MotionSequence', 'KeyPoseSet',
    'MusicFeatureSequence', 'BeatAnnotation',
    'EvalReport', 'SampleEntry', 'DatasetManifest',
    'DanceModelConfig', 'KeydanceConfig', 'LossParams', 'SynthSpec', 'TrainSchedule', 'TransformerConfig',
    'DanceModelWeights', 'generate', 'weighted_loss', 'weight_curve',
    'Trainer', 'train', 'save_checkpoint', 'load_checkpoint',
    'evaluate', 'evaluate_batch',
    'KeydanceSerializer'
]
