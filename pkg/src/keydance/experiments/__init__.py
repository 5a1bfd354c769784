"""
Experiment drivers: curve tables, λ/σ sweeps, key influence and regeneration.
"""

from .curves import OMEGA_FIELDS, VELOCITY_FIELDS, key_fractions_to_frames, omega_rows, velocity_rows
from .influence import InfluenceProfile, key_influence_profile
from .sweep import (
    DEFAULT_LAMBDAS, DEFAULT_SIGMAS, SWEEP_FIELDS,
    SweepCell, TrendCheck, SweepResult, evaluate_model, run_sweep
)
from .regenerate import regenerate

__all__ = [
    'OMEGA_FIELDS', 'VELOCITY_FIELDS', 'key_fractions_to_frames', 'omega_rows', 'velocity_rows',
    'InfluenceProfile', 'key_influence_profile',
    'DEFAULT_LAMBDAS', 'DEFAULT_SIGMAS', 'SWEEP_FIELDS',
    'SweepCell', 'TrendCheck', 'SweepResult', 'evaluate_model', 'run_sweep',
    'regenerate',
]
