"""
conditioning/local_pe.py
Local positional embedding PE^(L).

For sequence position p with motion time t = p - offset, the left half is the
half-width table row |t - t_i| of the nearest key at or before t, and the
right half is row |t_j - t| of the nearest key at or after t. A missing
neighbor gives a zero half; positions before offset are all zero.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..transformer.positional import PositionalTable
from ..utils.exceptions import ValidationError

@dataclass(frozen=True)
class LocalPositionalEmbedding:
    matrix: np.ndarray

    @property
    def left(self) -> np.ndarray:
        return self.matrix[:, :self.matrix.shape[1] // 2]

    @property
    def right(self) -> np.ndarray:
        return self.matrix[:, self.matrix.shape[1] // 2:]

def local_positional_embedding(key_positions: Sequence[int], length: int, offset: int,
                               half_table: PositionalTable) -> LocalPositionalEmbedding:
    """
    Build PE^(L) (L × 2·half_width).

    Args:
        key_positions: Motion-frame indices of the key poses, strictly increasing
        length: L
        offset: Sequence position of motion frame 0
        half_table: Sinusoidal table of width d_model/2; distances clamp to its last row

    Raises:
        ValidationError: key positions are not strictly increasing
    """
    keys = np.asarray(list(key_positions), dtype=np.int64)
    if np.any(np.diff(keys) <= 0):
        raise ValidationError("key positions must be sorted and distinct")
    half = half_table.width
    matrix = np.zeros((length, 2 * half))
    if keys.size == 0:
        return LocalPositionalEmbedding(matrix=matrix)

    if not 0 <= offset <= length:
        raise ValidationError(f"offset {offset} outside [0, {length}]")
    last_row = half_table.max_len - 1
    rows = np.arange(offset, length)
    times = rows - offset
    left = np.searchsorted(keys, times, side='right') - 1
    right = np.searchsorted(keys, times, side='left')

    has_left = left >= 0
    distance = np.minimum(times[has_left] - keys[left[has_left]], last_row)
    matrix[rows[has_left], :half] = half_table.values[distance]

    has_right = right < keys.size
    distance = np.minimum(keys[right[has_right]] - times[has_right], last_row)
    matrix[rows[has_right], half:] = half_table.values[distance]

    return LocalPositionalEmbedding(matrix=matrix)
