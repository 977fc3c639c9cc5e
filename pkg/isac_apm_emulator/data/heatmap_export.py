"""
Heatmap export - CSV grids and 8-bit PGM images of dB maps.

CSV layout:
    # title
    # rows: <row axis name>
    # cols: <column axis name>
    # peak: key=value, ...            (zero or more)
    <row name>\\<col name>, c0, c1, ...
    r0, p00, p01, ...

PGM images map [peak - dynamic range, peak] dB linearly onto 0..255, with
the last row of the grid at the top of the image.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
from numpy.typing import NDArray

from ..core.constants import PGM_DYNAMIC_RANGE_DB, PGM_MAX_VALUE
from ..core.errors import InvalidArgumentError
from ..models.estimates import DetectedTarget
from .atomic import atomic_write_bytes, atomic_write_text


def heatmap_csv_text(
    grid_db: NDArray[np.float64],
    row_name: str,
    row_axis: NDArray[np.float64],
    col_name: str,
    col_axis: NDArray[np.float64],
    title: str = "",
    peaks: Optional[Sequence[DetectedTarget]] = None,
) -> str:
    """Render a dB grid as CSV text."""
    if grid_db.shape != (len(row_axis), len(col_axis)):
        raise InvalidArgumentError("grid does not match its axes")
    buffer = io.StringIO()
    buffer.write(f"# {title}\n")
    buffer.write(f"# rows: {row_name}\n")
    buffer.write(f"# cols: {col_name}\n")
    for peak in peaks or ():
        fields = ", ".join(f"{k}={v:.6g}" for k, v in peak.to_dict().items())
        buffer.write(f"# peak: {fields}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([f"{row_name}\\{col_name}"] + [f"{c:.6g}" for c in col_axis])
    for r, row in zip(row_axis, grid_db):
        writer.writerow([f"{r:.6g}"] + [f"{v:.3f}" for v in row])
    return buffer.getvalue()


def write_heatmap_csv(path: Union[str, Path], *args, **kwargs) -> Path:
    """Write heatmap_csv_text(...) to ``path``."""
    return atomic_write_text(Path(path), heatmap_csv_text(*args, **kwargs))


def pgm_bytes(grid_db: NDArray[np.float64], dynamic_range_db: float = PGM_DYNAMIC_RANGE_DB) -> bytes:
    """
    Encode a dB grid as a binary (P5) PGM image.

    Args:
        grid_db: 2D grid in dB
        dynamic_range_db: Span below the peak mapped onto the gray scale

    Returns:
        The image file contents
    """
    if grid_db.ndim != 2 or grid_db.size == 0:
        raise InvalidArgumentError("PGM export needs a non-empty 2D grid")
    if not dynamic_range_db > 0:
        raise InvalidArgumentError(f"dynamic range must be > 0, got {dynamic_range_db}")
    top = float(grid_db.max())
    scaled = (grid_db - (top - dynamic_range_db)) / dynamic_range_db
    gray = np.round(np.clip(scaled, 0.0, 1.0) * PGM_MAX_VALUE).astype(np.uint8)
    image = np.flipud(gray)
    height, width = image.shape
    header = f"P5\n{width} {height}\n{PGM_MAX_VALUE}\n".encode("ascii")
    return header + np.ascontiguousarray(image).tobytes()


def write_pgm(
    path: Union[str, Path],
    grid_db: NDArray[np.float64],
    dynamic_range_db: float = PGM_DYNAMIC_RANGE_DB,
) -> Path:
    """Write a dB grid as a PGM image."""
    return atomic_write_bytes(Path(path), pgm_bytes(grid_db, dynamic_range_db))
