"""
evaluation/reports.py
Writing evaluation reports as JSON and as CSV rows, one per δ.
"""

import csv
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from ..models.reports import EvalReport
from ..serializers.json_serializer import KeydanceSerializer
from ..utils.logging import get_logger

logger = get_logger(__name__)

CSV_FIELDS = [
    'name', 'label', 'delta', 'window_seconds', 'beat_hit_rate', 'beat_hits',
    'num_music_beats', 'num_motion_beats', 'consistency_error', 'smoothness_cv',
]

def report_to_dict(report: EvalReport) -> Dict[str, Any]:
    """All fields, undefined metrics as null."""
    data = report.model_dump()
    data['beat_hit_rate'] = {str(k): v for k, v in sorted(report.beat_hit_rate.items())}
    data['beat_hits'] = {str(k): v for k, v in sorted(report.beat_hits.items())}
    return data

def report_rows(report: EvalReport, label: Optional[str] = None) -> List[Dict[str, Any]]:
    """One row per δ; a report without hit rates still gets a single row."""
    shared = {
        'name': report.name or '',
        'label': label or '',
        'num_music_beats': report.num_music_beats,
        'num_motion_beats': report.num_motion_beats,
        'consistency_error': '' if report.consistency_error is None else report.consistency_error,
        'smoothness_cv': '' if report.smoothness_cv is None else report.smoothness_cv,
    }
    if not report.beat_hit_rate:
        return [{**shared, 'delta': '', 'window_seconds': '', 'beat_hit_rate': '', 'beat_hits': ''}]
    return [
        {
            **shared,
            'delta': delta,
            'window_seconds': report.window_seconds(delta),
            'beat_hit_rate': report.beat_hit_rate[delta],
            'beat_hits': report.beat_hits.get(delta, 0),
        }
        for delta in sorted(report.beat_hit_rate)
    ]

def write_report_json(path: Union[str, Path], reports: Dict[str, EvalReport],
                      aggregate: Optional[Dict[str, float]] = None) -> Path:
    """`reports` maps a label ("synthesized", "real", clip name) to its report."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload: Dict[str, Any] = {'reports': {label: report_to_dict(r) for label, r in reports.items()}}
    if aggregate is not None:
        payload['aggregate'] = aggregate
    path.write_text(KeydanceSerializer.to_json_string(payload, indent=2) + '\n')
    logger.info(f"Wrote evaluation report to {path}")
    return path

def write_report_csv(path: Union[str, Path], reports: Dict[str, EvalReport]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for label, report in reports.items():
            writer.writerows(report_rows(report, label))
    logger.info(f"Wrote evaluation rows to {path}")
    return path

def write_rows_csv(path: Union[str, Path], rows: Sequence[Dict[str, Any]], fields: Sequence[str]) -> Path:
    """Generic CSV writer for curve and sweep tables."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open('w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=list(fields))
        writer.writeheader()
        writer.writerows(rows)
    logger.info(f"Wrote {len(rows)} rows to {path}")
    return path
