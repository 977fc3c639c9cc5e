"""
Numerical helpers shared by the synthesis and estimation engines.

Provides:
- dB conversions with a fixed floor
- window tapers (symmetric Hanning)
- uniform search-grid construction and nearest-bin lookup
"""

from __future__ import annotations

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.signal import windows

from ..core.constants import DB_FLOOR, WindowKind
from ..core.errors import InvalidArgumentError


def power_to_db(power: ArrayLike, floor_db: float = DB_FLOOR) -> NDArray[np.float64]:
    """
    Convert linear power to dB, clamping at ``floor_db``.

    Zero (and negative round-off) power maps to the floor instead of -inf.

    Args:
        power: Linear power values
        floor_db: Lower clamp in dB

    Returns:
        Power in dB
    """
    p = np.asarray(power, dtype=np.float64)
    floor_lin = 10.0 ** (floor_db / 10.0)
    with np.errstate(divide="ignore"):
        db = 10.0 * np.log10(np.maximum(p, floor_lin))
    return np.maximum(db, floor_db)


def db_to_amplitude(gain_db: ArrayLike) -> NDArray[np.float64]:
    """Convert a power gain in dB to a linear amplitude factor."""
    return np.asarray(10.0 ** (np.asarray(gain_db, dtype=np.float64) / 20.0))


def amplitude_to_db(amplitude: ArrayLike, floor_db: float = DB_FLOOR) -> NDArray[np.float64]:
    """Convert a linear amplitude to a power gain in dB."""
    return power_to_db(np.abs(np.asarray(amplitude)) ** 2, floor_db)


def window_weights(length: int, kind: WindowKind) -> NDArray[np.float64]:
    """
    Return the taper weights for a window kind.

    Hanning is the symmetric definition with zero end points
    (length 3 gives 0, 1, 0).

    Args:
        length: Number of samples
        kind: Window kind

    Returns:
        Weights of shape (length,)
    """
    if length < 1:
        raise InvalidArgumentError(f"window length must be >= 1, got {length}")
    if kind is WindowKind.NONE:
        return np.ones(length)
    if kind is WindowKind.HANNING:
        if length == 1:
            return np.ones(1)
        return np.asarray(windows.hann(length, sym=True), dtype=np.float64)
    raise InvalidArgumentError(f"unknown window kind: {kind}")


def apply_window(vector: ArrayLike, kind: WindowKind, axis: int = -1) -> NDArray:
    """
    Taper ``vector`` along ``axis``.

    Args:
        vector: Real or complex samples
        kind: Window kind (NONE is the identity)
        axis: Axis the window runs along

    Returns:
        Windowed copy with the same shape
    """
    x = np.asarray(vector)
    if kind is WindowKind.NONE:
        return x.copy()
    w = window_weights(x.shape[axis], kind)
    shape = [1] * x.ndim
    shape[axis] = x.shape[axis]
    return x * w.reshape(shape)


def uniform_grid(start: float, stop: float, step: float) -> NDArray[np.float64]:
    """
    Build an inclusive uniform grid ``start, start+step, ..., stop``.

    Nodes are computed as ``start + i*step`` so that values such as 30.0 on a
    0.25 grid land exactly on a node.

    Args:
        start: First node
        stop: Last node (included when it lies on the lattice)
        step: Positive spacing

    Returns:
        Grid nodes
    """
    if step <= 0:
        raise InvalidArgumentError(f"grid step must be > 0, got {step}")
    if stop < start:
        raise InvalidArgumentError(f"grid stop {stop} is below start {start}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count, dtype=np.float64)


def nearest_index(axis: ArrayLike, value: float) -> int:
    """Index of the grid node closest to ``value``."""
    return int(np.argmin(np.abs(np.asarray(axis, dtype=np.float64) - value)))
