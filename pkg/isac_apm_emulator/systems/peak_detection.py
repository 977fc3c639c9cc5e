"""
Greedy peak picking on 2D power grids.

Candidates are the local maxima of the grid above the dB floor; they are
accepted in descending power unless they fall inside the guard region of a
peak accepted earlier.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.ndimage import maximum_filter

from ..core.constants import DB_FLOOR, DEFAULT_PEAK_GUARD_BINS
from ..core.errors import InvalidArgumentError
from ..models.estimates import DetectedTarget, DetectionList, RangeVelocityMap
from ..utils.logger import get_logger

logger = get_logger(__name__)


def find_peaks_2d(
    power_db: NDArray[np.float64],
    n_peaks: int,
    guard: int = DEFAULT_PEAK_GUARD_BINS,
    wrap_axes: Sequence[int] = (),
    floor_db: float = DB_FLOOR,
) -> list[tuple[int, int]]:
    """
    Indices of up to ``n_peaks`` isolated local maxima.

    Args:
        power_db: 2D power grid
        n_peaks: Maximum number of peaks
        guard: Half-width of the exclusion square in bins (per axis)
        wrap_axes: Axes that are circular (e.g. a Doppler axis)
        floor_db: Values at or below this level never count as peaks

    Returns:
        (row, col) indices in descending power
    """
    if n_peaks < 1:
        raise InvalidArgumentError(f"n_peaks must be >= 1, got {n_peaks}")
    if power_db.ndim != 2:
        raise InvalidArgumentError("peak search needs a 2D grid")

    modes = ["wrap" if ax in wrap_axes else "nearest" for ax in range(2)]
    local_max = maximum_filter(power_db, size=3, mode=modes) == power_db
    candidates = np.argwhere(local_max & (power_db > floor_db))
    order = np.argsort(-power_db[candidates[:, 0], candidates[:, 1]], kind="stable")

    shape = power_db.shape
    accepted: list[tuple[int, int]] = []
    for row, col in candidates[order]:
        too_close = False
        for a_row, a_col in accepted:
            d = [abs(int(row) - a_row), abs(int(col) - a_col)]
            for ax in wrap_axes:
                d[ax] = min(d[ax], shape[ax] - d[ax])
            if d[0] <= guard and d[1] <= guard:
                too_close = True
                break
        if not too_close:
            accepted.append((int(row), int(col)))
            if len(accepted) == n_peaks:
                break
    return accepted


def detect_peaks(
    rv_map: RangeVelocityMap,
    n_peaks: int,
    guard: int = DEFAULT_PEAK_GUARD_BINS,
) -> DetectionList:
    """
    Read the strongest targets off a range-velocity map.

    The velocity axis is treated as circular. When the map holds fewer
    isolated maxima than requested the list is shorter and flagged
    ``truncated``.

    Args:
        rv_map: Range-velocity map
        n_peaks: Number of targets to report
        guard: Guard half-width in padded bins

    Returns:
        Detections in descending power
    """
    peaks = find_peaks_2d(rv_map.power_db, n_peaks, guard, wrap_axes=(0,))
    targets = tuple(
        DetectedTarget(
            power_db=float(rv_map.power_db[i, j]),
            range_m=float(rv_map.range_m[j]),
            velocity_mps=float(rv_map.velocity_mps[i]) if rv_map.velocity_estimable else None,
        )
        for i, j in peaks
    )
    result = DetectionList(targets=targets, requested=n_peaks)
    if result.truncated:
        logger.warning(
            f"Snapshot {rv_map.label}: found {len(targets)} of {n_peaks} requested peaks"
        )
    return result
