"""
Report store - structured-text run reports and detection lists.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence, Union

from ..core.errors import ReportSchemaError
from ..models.estimates import DetectedTarget
from ..models.report import RunReport
from ..utils.logger import get_logger
from .atomic import atomic_write_json

logger = get_logger(__name__)


def save_report(report: RunReport, path: Union[str, Path]) -> Path:
    """Write a run report as JSON."""
    out = atomic_write_json(Path(path), report.to_dict())
    logger.info(f"Saved report to {out}")
    return out


def load_report(path: Union[str, Path]) -> RunReport:
    """
    Load a run report.

    Raises:
        ReportSchemaError: Not a report or an unsupported schema version
    """
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ReportSchemaError(f"{path}: not a JSON report ({e.msg})") from None
    if not isinstance(data, dict):
        raise ReportSchemaError(f"{path}: report must be a JSON object")
    return RunReport.from_dict(data)


def detections_filename(label: str) -> str:
    """File name of the detection list of a snapshot."""
    return f"detections_{label}.json"


def save_detections(
    path: Union[str, Path],
    label: str,
    mode: str,
    targets: Sequence[DetectedTarget],
    truncated: bool = False,
) -> Path:
    """Write the detected targets of a snapshot."""
    return atomic_write_json(Path(path), {
        "label": label,
        "mode": mode,
        "truncated": truncated,
        "targets": [t.to_dict() for t in targets],
    })
