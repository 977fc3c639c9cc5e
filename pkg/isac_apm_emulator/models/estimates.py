"""
Estimation outputs - range-velocity maps, PADP cubes, PAS slices,
joint range-angle maps and the detected targets read off them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from ..core.constants import (
    ADTR_ANGLE_STEP_DEG,
    ADTR_AZIMUTH_SPAN_DEG,
    ADTR_ELEVATION_SPAN_DEG,
    DEFAULT_PAD_FREQ,
    DEFAULT_PAD_TIME,
    DEFAULT_PEAK_GUARD_BINS,
    SATR_ANGLE_SPAN_DEG,
    SATR_ANGLE_STEP_DEG,
    SATR_RANGE_SPAN_M,
    SATR_RANGE_STEP_M,
    NormalizationKind,
    Wavefront,
    WindowKind,
)
from ..core.errors import InvalidArgumentError
from ..utils.math_utils import uniform_grid


@dataclass(frozen=True)
class EstimationSettings:
    """
    Knobs of the estimation chain.

    Attributes:
        pad_time: Zero-padding factor on the time (Doppler) axis
        pad_freq: Zero-padding factor on the frequency (delay) axis
        window: Taper applied before each transform
        guard_bins: Peak exclusion half-width in padded bins
        normalization: Power reference of RV maps and PADPs
        angle_step_deg: ADTR beamforming grid step
        satr_range_step_m: SATR matched-filter range step
        satr_angle_step_deg: SATR matched-filter angle step
        refine_power: Re-evaluate PAS peak power at the continuous delay
    """
    pad_time: int = DEFAULT_PAD_TIME
    pad_freq: int = DEFAULT_PAD_FREQ
    window: WindowKind = WindowKind.HANNING
    guard_bins: int = DEFAULT_PEAK_GUARD_BINS
    normalization: NormalizationKind = NormalizationKind.CALIBRATED
    angle_step_deg: float = ADTR_ANGLE_STEP_DEG
    satr_range_step_m: float = SATR_RANGE_STEP_M
    satr_angle_step_deg: float = SATR_ANGLE_STEP_DEG
    refine_power: bool = True

    def __post_init__(self) -> None:
        if self.pad_time < 1 or self.pad_freq < 1:
            raise InvalidArgumentError("zero-padding factors must be >= 1")
        if self.guard_bins < 0:
            raise InvalidArgumentError("guard must be >= 0 bins")

    def elevation_grid(self) -> NDArray[np.float64]:
        """ADTR elevation search grid."""
        return uniform_grid(*ADTR_ELEVATION_SPAN_DEG, self.angle_step_deg)

    def azimuth_grid(self) -> NDArray[np.float64]:
        """ADTR azimuth search grid."""
        return uniform_grid(*ADTR_AZIMUTH_SPAN_DEG, self.angle_step_deg)

    def satr_range_grid(self) -> NDArray[np.float64]:
        """SATR range search grid."""
        return uniform_grid(*SATR_RANGE_SPAN_M, self.satr_range_step_m)

    def satr_angle_grid(self) -> NDArray[np.float64]:
        """SATR angle search grid."""
        return uniform_grid(*SATR_ANGLE_SPAN_DEG, self.satr_angle_step_deg)

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        return {
            "pad_time": self.pad_time,
            "pad_freq": self.pad_freq,
            "window": self.window.value,
            "guard_bins": self.guard_bins,
            "normalization": self.normalization.value,
            "angle_step_deg": self.angle_step_deg,
            "satr_range_step_m": self.satr_range_step_m,
            "satr_angle_step_deg": self.satr_angle_step_deg,
            "refine_power": self.refine_power,
        }


def _check_monotone(name: str, axis: NDArray[np.float64]) -> None:
    if axis.ndim != 1 or axis.size == 0:
        raise InvalidArgumentError(f"{name} axis must be a non-empty vector")
    if axis.size > 1 and not np.all(np.diff(axis) > 0):
        raise InvalidArgumentError(f"{name} axis must be strictly increasing")


@dataclass(frozen=True)
class DetectedTarget:
    """
    A peak read off an estimation map.

    Fields that the producing map does not resolve stay None.
    """
    power_db: float
    range_m: Optional[float] = None
    velocity_mps: Optional[float] = None
    elevation_deg: Optional[float] = None
    azimuth_deg: Optional[float] = None
    angle_deg: Optional[float] = None

    def to_dict(self) -> dict:
        """Serialize to dictionary (unresolved fields omitted)."""
        data = {
            "range_m": self.range_m,
            "velocity_mps": self.velocity_mps,
            "elevation_deg": self.elevation_deg,
            "azimuth_deg": self.azimuth_deg,
            "angle_deg": self.angle_deg,
            "power_db": self.power_db,
        }
        return {k: v for k, v in data.items() if v is not None}

    @classmethod
    def from_dict(cls, data: dict) -> DetectedTarget:
        """Deserialize from dictionary."""
        return cls(
            power_db=float(data["power_db"]),
            range_m=data.get("range_m"),
            velocity_mps=data.get("velocity_mps"),
            elevation_deg=data.get("elevation_deg"),
            azimuth_deg=data.get("azimuth_deg"),
            angle_deg=data.get("angle_deg"),
        )


@dataclass(frozen=True)
class DetectionList:
    """Peaks in descending power; ``truncated`` when fewer than requested were found."""
    targets: tuple[DetectedTarget, ...]
    requested: int

    @property
    def truncated(self) -> bool:
        """True when the map held fewer peaks than requested."""
        return len(self.targets) < self.requested

    def __len__(self) -> int:
        return len(self.targets)

    def __iter__(self):
        return iter(self.targets)

    def __getitem__(self, i: int) -> DetectedTarget:
        return self.targets[i]


@dataclass(frozen=True, eq=False)
class RangeVelocityMap:
    """
    Power over (velocity, range) for one port and snapshot.

    When the dataset held a single CIR sample the velocity axis has one
    bin at 0 m/s and ``velocity_estimable`` is False.
    """
    power_db: NDArray[np.float64] = field(repr=False)
    range_m: NDArray[np.float64] = field(repr=False)
    velocity_mps: NDArray[np.float64] = field(repr=False)
    port: int = 0
    label: str = ""
    velocity_estimable: bool = True
    normalization: NormalizationKind = NormalizationKind.CALIBRATED

    def __post_init__(self) -> None:
        _check_monotone("range", self.range_m)
        _check_monotone("velocity", self.velocity_mps)
        if self.power_db.shape != (len(self.velocity_mps), len(self.range_m)):
            raise InvalidArgumentError("power grid does not match the axes")

    @property
    def range_step_m(self) -> float:
        """Range bin width."""
        return float(self.range_m[1] - self.range_m[0]) if len(self.range_m) > 1 else 0.0

    @property
    def velocity_step_mps(self) -> float:
        """Velocity bin width (0 for a range-only profile)."""
        if len(self.velocity_mps) < 2:
            return 0.0
        return float(self.velocity_mps[1] - self.velocity_mps[0])


@dataclass(frozen=True, eq=False)
class DelayProfiles:
    """
    Per-port delay-domain responses of one CIR sample.

    ``values`` is amplitude-calibrated: a unit-gain target peaks at
    modulus 1 on every port.
    """
    values: NDArray[np.complex128] = field(repr=False)  # (K, M_f)
    delay_s: NDArray[np.float64] = field(repr=False)    # (M_f,)
    time_index: int = 0

    @property
    def delay_step_s(self) -> float:
        """Padded delay bin width."""
        return float(self.delay_s[1] - self.delay_s[0]) if len(self.delay_s) > 1 else 0.0


@dataclass(frozen=True, eq=False)
class Padp:
    """Power-angular-delay profile over (elevation, azimuth, delay)."""
    power_db: NDArray[np.float64] = field(repr=False)
    elevation_deg: NDArray[np.float64] = field(repr=False)
    azimuth_deg: NDArray[np.float64] = field(repr=False)
    delay_s: NDArray[np.float64] = field(repr=False)
    delay_bins: NDArray[np.intp] = field(repr=False)
    label: str = ""
    normalization: NormalizationKind = NormalizationKind.CALIBRATED

    def __post_init__(self) -> None:
        _check_monotone("elevation", self.elevation_deg)
        _check_monotone("azimuth", self.azimuth_deg)
        expected = (len(self.elevation_deg), len(self.azimuth_deg), len(self.delay_s))
        if self.power_db.shape != expected:
            raise InvalidArgumentError(f"PADP shape {self.power_db.shape} != {expected}")
        if len(self.delay_bins) != len(self.delay_s):
            raise InvalidArgumentError("one padded delay-bin index is needed per delay")

    @property
    def elevation_step_deg(self) -> float:
        """Elevation grid step."""
        return float(np.diff(self.elevation_deg[:2])[0]) if len(self.elevation_deg) > 1 else 0.0

    @property
    def azimuth_step_deg(self) -> float:
        """Azimuth grid step."""
        return float(np.diff(self.azimuth_deg[:2])[0]) if len(self.azimuth_deg) > 1 else 0.0


@dataclass(frozen=True, eq=False)
class PasSlice:
    """The (elevation, azimuth) power plane of a PADP at one delay."""
    power_db: NDArray[np.float64] = field(repr=False)
    elevation_deg: NDArray[np.float64] = field(repr=False)
    azimuth_deg: NDArray[np.float64] = field(repr=False)
    delay_s: float
    peak: DetectedTarget


@dataclass(frozen=True, eq=False)
class JointRangeAngleMap:
    """SATR matched-filter output over (range, angle), peak at 0 dB."""
    power_db: NDArray[np.float64] = field(repr=False)
    range_m: NDArray[np.float64] = field(repr=False)
    angle_deg: NDArray[np.float64] = field(repr=False)
    peak: DetectedTarget
    wavefront: Wavefront = Wavefront.NEAR
    peak_score: float = 0.0  # linear matched-filter output at the peak

    def __post_init__(self) -> None:
        _check_monotone("range", self.range_m)
        _check_monotone("angle", self.angle_deg)
        if self.power_db.shape != (len(self.range_m), len(self.angle_deg)):
            raise InvalidArgumentError("power grid does not match the axes")
