"""
dataset.py
Dataset manifest: paired music/motion files with beat metadata and split.
"""

from typing import Any, Dict, List, Literal, Optional

from pydantic import Field, field_validator, model_validator

from ..serializers.json_serializer import KeydanceBase

class SampleEntry(KeydanceBase):
    """One music/motion pair. Paths are relative to the manifest's directory."""
    name: str = Field(..., description="Clip name")
    music_file: str = Field(..., description="Music TensorFile, T×15")
    motion_file: str = Field(..., description="Motion TensorFile, T×147")
    fps: float = Field(default=30.0, gt=0)
    beat_frames: List[int] = Field(default_factory=list, description="Ground-truth musical beats")
    split: Literal['train', 'test'] = Field(default='train')

    @field_validator('beat_frames')
    def validate_beats(cls, value):
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("beat frames must be strictly increasing")
        return value

class DatasetManifest(KeydanceBase):
    """All samples of a dataset plus how it was produced."""
    samples: List[SampleEntry] = Field(default_factory=list)
    source: Optional[Dict[str, Any]] = Field(default=None, description="Generator settings, if synthetic")

    @model_validator(mode='after')
    def validate_names(self) -> 'DatasetManifest':
        names = [s.name for s in self.samples]
        if len(set(names)) != len(names):
            raise ValueError("sample names must be unique")
        return self

    def split(self, which: str) -> List[SampleEntry]:
        return [s for s in self.samples if s.split == which]
