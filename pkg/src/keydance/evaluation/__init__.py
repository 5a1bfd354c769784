"""
Consistency, smoothness and beat-alignment metrics.
"""

from .metrics import (
    DEFAULT_DELTAS,
    consistency_error, frame_differences, smoothness_cv,
    velocity_minima, detect_motion_beats, count_beat_hits, beat_hit_rate, evaluate
)
from .batch import ClipEvaluation, BatchResult, aggregate_reports, evaluate_batch
from .reports import report_to_dict, report_rows, write_report_json, write_report_csv, write_rows_csv

__all__ = [
    'DEFAULT_DELTAS',
    'consistency_error', 'frame_differences', 'smoothness_cv',
    'velocity_minima', 'detect_motion_beats', 'count_beat_hits', 'beat_hit_rate', 'evaluate',
    'ClipEvaluation', 'BatchResult', 'aggregate_reports', 'evaluate_batch',
    'report_to_dict', 'report_rows', 'write_report_json', 'write_report_csv', 'write_rows_csv',
]
