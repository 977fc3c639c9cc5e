"""
CFR dataset codec (ISACCFR1).

Layout, all little-endian:
    magic            8 bytes  b"ISACCFR1"
    format version   u32
    mode             u8       0 = ADTR, 1 = SATR
    axis count       u8
    axis lengths     u32 per axis
    axis grids       float64 per axis, in declared order
    samples          complex128 (re, im interleaved), last axis fastest
    metadata length  u32
    metadata         UTF-8 JSON
"""

from __future__ import annotations

import json
import math
import struct
from pathlib import Path
from typing import Union

import numpy as np

from ..core.constants import (
    DATASET_AXES,
    DATASET_FORMAT_VERSION,
    DATASET_MAGIC,
    MODE_CODES,
    SensingMode,
)
from ..core.errors import DatasetFormatError
from ..models.dataset import CfrDataset
from ..utils.logger import get_logger
from .atomic import atomic_write_bytes

logger = get_logger(__name__)

_PREFIX = struct.Struct("<8sIBB")
_U32 = struct.Struct("<I")
_FLOAT = np.dtype("<f8")
_COMPLEX = np.dtype("<c16")


def encode_dataset(dataset: CfrDataset) -> bytes:
    """Serialize a dataset to bytes."""
    grids = dataset.axis_grids()
    metadata = dict(dataset.metadata)
    metadata["carrier_hz"] = dataset.carrier_hz
    blob = json.dumps(metadata, ensure_ascii=False, allow_nan=False).encode("utf-8")

    parts = [
        _PREFIX.pack(DATASET_MAGIC, DATASET_FORMAT_VERSION, MODE_CODES[dataset.mode], len(grids)),
        b"".join(_U32.pack(len(g)) for g in grids),
        b"".join(np.ascontiguousarray(g, dtype=_FLOAT).tobytes() for g in grids),
        np.ascontiguousarray(dataset.samples, dtype=_COMPLEX).tobytes(),
        _U32.pack(len(blob)),
        blob,
    ]
    return b"".join(parts)


def dataset_file_size(shape: tuple[int, ...], metadata_bytes: int) -> int:
    """Size of an encoded dataset with the given tensor shape and metadata length."""
    return (
        _PREFIX.size
        + _U32.size * len(shape)
        + _FLOAT.itemsize * sum(shape)
        + _COMPLEX.itemsize * math.prod(shape)
        + _U32.size
        + metadata_bytes
    )


class _Reader:
    """Cursor over the encoded bytes that reports offsets on failure."""

    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, count: int, what: str) -> bytes:
        available = len(self.data) - self.offset
        if available < count:
            raise DatasetFormatError(
                f"truncated {what}", offset=self.offset, expected=f"{count} bytes",
                actual=f"{available} bytes",
            )
        chunk = self.data[self.offset : self.offset + count]
        self.offset += count
        return chunk


def _check_uniform(grid: np.ndarray, offset: int) -> None:
    """Reject a frequency grid whose steps are not all equal."""
    if len(grid) < 3:
        return
    steps = np.diff(grid)
    if not np.allclose(steps, steps[0], rtol=1e-6, atol=0.0):
        worst = int(np.argmax(np.abs(steps - steps[0])))
        raise DatasetFormatError(
            "frequency grid is not uniform", offset=offset + _FLOAT.itemsize * (worst + 1),
            expected=f"step {steps[0]:g} Hz", actual=f"step {steps[worst]:g} Hz",
        )


def decode_dataset(data: bytes) -> CfrDataset:
    """Parse encoded bytes into a dataset."""
    reader = _Reader(data)
    magic, version, mode_code, n_axes = _PREFIX.unpack(reader.take(_PREFIX.size, "header"))
    if magic != DATASET_MAGIC:
        raise DatasetFormatError("bad magic", offset=0, expected=DATASET_MAGIC, actual=magic)
    if version != DATASET_FORMAT_VERSION:
        raise DatasetFormatError(
            "unsupported format version", offset=8, expected=DATASET_FORMAT_VERSION, actual=version
        )
    modes = {code: mode for mode, code in MODE_CODES.items()}
    if mode_code not in modes:
        raise DatasetFormatError("unknown mode", offset=12, expected=sorted(modes), actual=mode_code)
    mode = modes[mode_code]
    expected_axes = len(DATASET_AXES[mode])
    if n_axes != expected_axes:
        raise DatasetFormatError("wrong axis count", offset=13, expected=expected_axes, actual=n_axes)

    lengths = [_U32.unpack(reader.take(_U32.size, "axis length"))[0] for _ in range(n_axes)]
    grids = []
    for name, n in zip(DATASET_AXES[mode], lengths):
        grid_offset = reader.offset
        grid = np.frombuffer(reader.take(_FLOAT.itemsize * n, f"{name} axis"), dtype=_FLOAT)
        if name == "frequency":
            _check_uniform(grid, grid_offset)
        grids.append(grid.astype(np.float64))
    # Python ints: a corrupt header cannot overflow the sample count
    count = math.prod(lengths)
    samples = (
        np.frombuffer(reader.take(_COMPLEX.itemsize * count, "samples"), dtype=_COMPLEX)
        .astype(np.complex128)
        .reshape(lengths)
    )
    (blob_len,) = _U32.unpack(reader.take(_U32.size, "metadata length"))
    blob_offset = reader.offset
    blob = reader.take(blob_len, "metadata")
    if reader.offset != len(data):
        raise DatasetFormatError(
            "trailing bytes after metadata", offset=reader.offset,
            expected=f"{reader.offset} bytes total", actual=f"{len(data)} bytes",
        )
    try:
        metadata = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DatasetFormatError(f"metadata is not valid JSON ({e})", offset=blob_offset) from None
    if not isinstance(metadata, dict):
        raise DatasetFormatError("metadata must be a JSON object", offset=blob_offset)

    if mode is SensingMode.ADTR:
        time_s, frequency_hz, ports = grids
        port_indices = (ports,)
    else:
        time_s, rx_ports, tx_ports, frequency_hz = grids
        port_indices = (rx_ports, tx_ports)
    carrier = metadata.get("carrier_hz")
    if carrier is None:
        carrier = float((frequency_hz[0] + frequency_hz[-1]) / 2.0) if len(frequency_hz) else 0.0
    elif (
        isinstance(carrier, bool)
        or not isinstance(carrier, (int, float))
        or not math.isfinite(carrier)
    ):
        raise DatasetFormatError(
            "metadata carrier_hz is not a finite number", offset=blob_offset,
            expected="a number", actual=repr(carrier),
        )

    return CfrDataset(
        mode=mode,
        time_s=time_s,
        frequency_hz=frequency_hz,
        port_indices=port_indices,
        samples=samples,
        carrier_hz=float(carrier),
        metadata=metadata,
    )


def write_dataset(dataset: CfrDataset, path: Union[str, Path]) -> Path:
    """
    Write a dataset atomically.

    Args:
        dataset: Dataset to write
        path: Output file

    Returns:
        The written path
    """
    out = atomic_write_bytes(Path(path), encode_dataset(dataset))
    logger.info(f"Wrote {dataset!r} to {out}")
    return out


def read_dataset(path: Union[str, Path]) -> CfrDataset:
    """
    Read a dataset.

    Raises:
        DatasetFormatError: Malformed file, with the byte offset
        OSError: The file cannot be read
    """
    dataset = decode_dataset(Path(path).read_bytes())
    logger.debug(f"Read {dataset!r} from {path}")
    return dataset
