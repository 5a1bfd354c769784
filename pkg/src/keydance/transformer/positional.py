"""
transformer/positional.py
Sinusoidal positional tables.
"""

from dataclasses import dataclass

import numpy as np

from ..utils.exceptions import ValidationError

@dataclass(frozen=True)
class PositionalTable:
    """PE[N × d]: PE(pos, 2i) = sin(pos/10000^(2i/d)), PE(pos, 2i+1) = cos(...)."""
    values: np.ndarray

    @property
    def max_len(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    def rows(self, count: int) -> np.ndarray:
        if count > self.max_len:
            raise ValidationError(f"positional table has {self.max_len} rows, {count} requested")
        return self.values[:count]

def sinusoidal_pe(max_len: int, width: int) -> PositionalTable:
    if width <= 0 or width % 2:
        raise ValidationError(f"positional table width must be a positive even number, got {width}")
    if max_len < 1:
        raise ValidationError("positional table needs at least one row")
    positions = np.arange(max_len, dtype=np.float64)[:, None]
    rates = 10000.0 ** (np.arange(0, width, 2, dtype=np.float64) / width)
    values = np.empty((max_len, width))
    values[:, 0::2] = np.sin(positions / rates)
    values[:, 1::2] = np.cos(positions / rates)
    values.flags.writeable = False
    return PositionalTable(values=values)
