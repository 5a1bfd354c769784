"""
The dance generator: network, weighted loss, training and checkpoints.
"""

from .loss import weight_curve, weight_curve_array, weighted_loss
from .network import DanceModelWeights, active_keys, assemble_cross_input, forward_tensor, forward, generate
from .training import TrainingSample, StepRecord, TrainingLog, TrainingResult, Trainer, train
from .checkpoint import Checkpoint, save_checkpoint, load_checkpoint
from .gradcheck import model_grad_check, tiny_check_config

__all__ = [
    'weight_curve', 'weight_curve_array', 'weighted_loss',
    'DanceModelWeights', 'active_keys', 'assemble_cross_input', 'forward_tensor', 'forward', 'generate',
    'TrainingSample', 'StepRecord', 'TrainingLog', 'TrainingResult', 'Trainer', 'train',
    'Checkpoint', 'save_checkpoint', 'load_checkpoint',
    'model_grad_check', 'tiny_check_config',
]
