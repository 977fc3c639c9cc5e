"""
Emulator constants and configuration.

All magic numbers and configuration defaults are defined here so that grid
sizes, tolerances and file-format details are tuned in one place.
"""

from __future__ import annotations

from enum import Enum
from typing import Final

from scipy.constants import c as _SPEED_OF_LIGHT

# =============================================================================
# VERSION is derived from changelog.py (first key = current version)
# =============================================================================

from .changelog import CHANGELOG

VERSION: Final[str] = next(iter(CHANGELOG))

# =============================================================================
# PHYSICS
# =============================================================================

SPEED_OF_LIGHT: Final[float] = float(_SPEED_OF_LIGHT)

# Numerical tolerance used when checking unit-modulus / geometric invariants
UNIT_MODULUS_TOL: Final[float] = 1e-12

# Allowed mismatch between a SATR target's declared range and its position
SATR_RANGE_CONSISTENCY_M: Final[float] = 1e-6


class SensingMode(Enum):
    """Sensing operation modes of the base station under test."""
    ADTR = "adtr"  # array duplex transmission and reception
    SATR = "satr"  # split-array transmission and reception


class ArrayLayout(Enum):
    """Supported array layouts."""
    UPA = "upa"
    ULA = "ula"


class Wavefront(Enum):
    """Wavefront model used to configure or to estimate."""
    NEAR = "near"
    FAR = "far"


class SatrAmplitude(Enum):
    """Per-port amplitude model loaded into the APM in SATR mode."""
    UNIFORM = "uniform"
    SPHERICAL = "spherical"


class WindowKind(Enum):
    """Taper applied before a Fourier transform."""
    NONE = "none"
    HANNING = "hanning"


class NormalizationKind(Enum):
    """How power maps are referenced to 0 dB."""
    CALIBRATED = "calibrated"  # 0 dB = response of a unit-gain target
    PEAK = "peak"              # 0 dB = global maximum of the map


class CheckStatus(Enum):
    """Outcome of one target-vs-estimate comparison."""
    PASS = "pass"
    FAIL = "fail"
    NOT_ESTIMABLE = "not_estimable"


# =============================================================================
# SWEEP DEFAULTS (measurement equipment settings of the reference rig)
# =============================================================================

DEFAULT_CARRIER_HZ: Final[float] = 3.5e9
DEFAULT_BANDWIDTH_HZ: Final[float] = 40e6

# Full measurement sizes of the reference rig
FULL_SCALE_N_TIME: Final[int] = 1000
FULL_SCALE_N_FREQ: Final[int] = 1001

# Scaled sizes that keep the full ADTR pipeline inside CI time and memory
SCALED_N_TIME: Final[int] = 256
SCALED_N_FREQ: Final[int] = 251

# CIR update interval used when every target in a snapshot is static
STATIC_UPDATE_INTERVAL_S: Final[float] = 1e-3

# =============================================================================
# APM QUANTIZATION
# =============================================================================

DEFAULT_PHASE_BITS: Final[int] = 6
DEFAULT_AMP_STEP_DB: Final[float] = 0.5

# =============================================================================
# ESTIMATION DEFAULTS
# =============================================================================

# Zero-padding factors on the time (Doppler) and frequency (delay) axes
DEFAULT_PAD_TIME: Final[int] = 4
DEFAULT_PAD_FREQ: Final[int] = 4

# Guard region (in padded bins, per axis) around an accepted peak
DEFAULT_PEAK_GUARD_BINS: Final[int] = 10

# Angle grids
ADTR_ANGLE_STEP_DEG: Final[float] = 1.0
ADTR_ELEVATION_SPAN_DEG: Final[tuple[float, float]] = (-90.0, 90.0)
ADTR_AZIMUTH_SPAN_DEG: Final[tuple[float, float]] = (-90.0, 90.0)

# PAS cells within this of the maximum count as the same peak (grating aliases
# of the two-way signature reach exactly the same power)
PAS_PEAK_TIE_DB: Final[float] = 1e-6

SATR_ANGLE_STEP_DEG: Final[float] = 0.25
SATR_ANGLE_SPAN_DEG: Final[tuple[float, float]] = (-90.0, 90.0)
SATR_RANGE_STEP_M: Final[float] = 0.02
SATR_RANGE_SPAN_M: Final[tuple[float, float]] = (0.5, 6.0)

# Lower clamp for every dB conversion (avoids log of zero)
DB_FLOOR: Final[float] = -120.0

# Heatmap export
PGM_DYNAMIC_RANGE_DB: Final[float] = 50.0
PGM_MAX_VALUE: Final[int] = 255

# Dynamic range over which estimated and simulated PAS are compared
PAS_COMPARISON_RANGE_DB: Final[float] = 50.0

# =============================================================================
# ACCEPTANCE TOLERANCES (absolute, per parameter)
# =============================================================================

DEFAULT_TOLERANCES: Final[dict[str, float]] = {
    "range_m": 1.9,
    "velocity_mps": 0.25,
    "elevation_deg": 1.0,
    "azimuth_deg": 1.0,
    "power_db": 1.0,
    "angle_deg": 0.25,
}

# SATR joint map resolves range on its own (much finer) grid
SATR_RANGE_TOLERANCE_M: Final[float] = 0.02

# =============================================================================
# FILE FORMATS
# =============================================================================

SCENARIO_SCHEMA_VERSION: Final[int] = 1
REPORT_SCHEMA_VERSION: Final[int] = 1
CONFIG_SCHEMA_VERSION: Final[int] = 1

DATASET_MAGIC: Final[bytes] = b"ISACCFR1"
DATASET_FORMAT_VERSION: Final[int] = 1
DATASET_SUFFIX: Final[str] = ".cfr"

MODE_CODES: Final[dict[SensingMode, int]] = {
    SensingMode.ADTR: 0,
    SensingMode.SATR: 1,
}

# Axis order of the sample tensor per mode
DATASET_AXES: Final[dict[SensingMode, tuple[str, ...]]] = {
    SensingMode.ADTR: ("time", "frequency", "port"),
    SensingMode.SATR: ("time", "rx_port", "tx_port", "frequency"),
}

REPORT_FILENAME: Final[str] = "report.json"

# =============================================================================
# CLI EXIT CODES
# =============================================================================

EXIT_OK: Final[int] = 0
EXIT_TOLERANCE_FAILURE: Final[int] = 1
EXIT_USAGE: Final[int] = 2
EXIT_SCENARIO_ERROR: Final[int] = 3
EXIT_IO_ERROR: Final[int] = 4
EXIT_FORMAT_ERROR: Final[int] = 5
EXIT_MODE_MISMATCH: Final[int] = 6

# =============================================================================
# EVENTS
# =============================================================================


class Events:
    """Event names published on the event bus."""

    STAGE_STARTED = "stage_started"            # stage: str, label: str
    SYNTHESIS_PROGRESS = "synthesis_progress"  # label: str, done: int, total: int
    DATASET_WRITTEN = "dataset_written"        # path: Path, label: str
    SNAPSHOT_ESTIMATED = "snapshot_estimated"  # label: str, detections: int
