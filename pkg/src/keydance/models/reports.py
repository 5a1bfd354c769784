"""
reports.py
Evaluation report: consistency error, smoothness and beat hit rates.
"""

from typing import Dict, Optional

from pydantic import Field, model_validator

from ..serializers.json_serializer import KeydanceBase

class EvalReport(KeydanceBase):
    """Metrics for one generated clip.

    Properties:
        consistency_error (Optional[float]): E_c over the key frames; None when undefined.
        smoothness_cv (Optional[float]): S_cv; None when undefined.
        beat_hit_rate (Dict[int, float]): δ → N_{d&m}/N_m.
        beat_hits (Dict[int, int]): δ → N_{d&m}.
        num_music_beats (int): N_m.
        num_motion_beats (int): Detected motion beats.
        fps (float): f_d used to express δ as a time window.
        undefined (Dict[str, str]): metric → reason for every metric that is undefined.
    """
    name: Optional[str] = Field(default=None, description="Clip name")
    consistency_error: Optional[float] = Field(default=None, ge=0)
    smoothness_cv: Optional[float] = Field(default=None, ge=0)
    beat_hit_rate: Dict[int, float] = Field(default_factory=dict)
    beat_hits: Dict[int, int] = Field(default_factory=dict)
    num_music_beats: int = Field(default=0, ge=0)
    num_motion_beats: int = Field(default=0, ge=0)
    num_keys: int = Field(default=0, ge=0)
    fps: float = Field(default=30.0, gt=0)
    undefined: Dict[str, str] = Field(default_factory=dict)

    @model_validator(mode='after')
    def validate_rates(self) -> 'EvalReport':
        for delta, rate in self.beat_hit_rate.items():
            if not 0.0 <= rate <= 1.0:
                raise ValueError(f"hit rate at δ={delta} outside [0, 1]: {rate}")
        return self

    def window_seconds(self, delta: int) -> float:
        """Half-width of the alignment window δ/f_d in seconds."""
        return delta / self.fps
