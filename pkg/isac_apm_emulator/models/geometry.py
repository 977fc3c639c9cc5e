"""
Geometry models - array layouts, far-field directions and near-field points.

Coordinate frame:
    The array phase center is the origin. The UPA lies in the x-z plane with
    its normal along +y; z points up. A ULA lies on the x-axis with +x pointing
    from the Tx sub-array to the Rx sub-array.

    Azimuth phi is measured from +y toward +x; elevation theta from the x-y
    plane toward +z. The unit propagation vector toward a direction is
        u(theta, phi) = (cos(theta) sin(phi), cos(theta) cos(phi), sin(theta)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from ..core.constants import ArrayLayout
from ..core.errors import InvalidArgumentError


@dataclass(frozen=True)
class FarFieldDirection:
    """
    A plane-wave direction.

    Attributes:
        elevation_deg: theta in [-90, 90]
        azimuth_deg: phi in [-180, 180]
    """
    elevation_deg: float = 0.0
    azimuth_deg: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.elevation_deg) and -90.0 <= self.elevation_deg <= 90.0):
            raise InvalidArgumentError(
                f"elevation must lie in [-90, 90] degrees, got {self.elevation_deg}"
            )
        if not (math.isfinite(self.azimuth_deg) and -180.0 <= self.azimuth_deg <= 180.0):
            raise InvalidArgumentError(
                f"azimuth must lie in [-180, 180] degrees, got {self.azimuth_deg}"
            )

    @property
    def unit_vector(self) -> NDArray[np.float64]:
        """Unit propagation vector u(theta, phi)."""
        theta = math.radians(self.elevation_deg)
        phi = math.radians(self.azimuth_deg)
        return np.array([
            math.cos(theta) * math.sin(phi),
            math.cos(theta) * math.cos(phi),
            math.sin(theta),
        ])

    def mirrored(self) -> FarFieldDirection:
        """The direction (-theta, -phi)."""
        return FarFieldDirection(-self.elevation_deg, -self.azimuth_deg)

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        return {"elevation_deg": self.elevation_deg, "azimuth_deg": self.azimuth_deg}

    @classmethod
    def from_dict(cls, data: dict) -> FarFieldDirection:
        """Deserialize from dictionary."""
        return cls(
            elevation_deg=float(data["elevation_deg"]),
            azimuth_deg=float(data["azimuth_deg"]),
        )

    def __str__(self) -> str:
        return f"(el {self.elevation_deg:g} deg, az {self.azimuth_deg:g} deg)"


@dataclass(frozen=True)
class NearFieldPoint:
    """
    A point target position in meters (SATR uses the x-y plane, z = 0).

    The in-plane angle is measured from +y toward +x, so a target at range R
    and angle a sits at (R sin a, R cos a, 0).
    """
    x_m: float
    y_m: float
    z_m: float = 0.0

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.x_m, self.y_m, self.z_m)):
            raise InvalidArgumentError("near-field point coordinates must be finite")
        if self.distance == 0.0:
            raise InvalidArgumentError("near-field point must not coincide with the phase center")

    @classmethod
    def from_polar(cls, range_m: float, angle_deg: float) -> NearFieldPoint:
        """Build an in-plane point from range and angle (from +y toward +x)."""
        a = math.radians(angle_deg)
        return cls(x_m=range_m * math.sin(a), y_m=range_m * math.cos(a), z_m=0.0)

    @property
    def position(self) -> NDArray[np.float64]:
        """Position vector (3,)."""
        return np.array([self.x_m, self.y_m, self.z_m])

    @property
    def distance(self) -> float:
        """Distance from the phase center."""
        return math.sqrt(self.x_m**2 + self.y_m**2 + self.z_m**2)

    @property
    def angle_deg(self) -> float:
        """In-plane angle from +y toward +x."""
        return math.degrees(math.atan2(self.x_m, self.y_m))

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        return {"position_m": [self.x_m, self.y_m, self.z_m]}

    @classmethod
    def from_dict(cls, data: dict) -> NearFieldPoint:
        """Deserialize from dictionary."""
        x, y, z = (float(v) for v in data["position_m"])
        return cls(x_m=x, y_m=y, z_m=z)

    def __str__(self) -> str:
        return f"({self.distance:.3f} m, {self.angle_deg:.2f} deg)"


@dataclass(frozen=True, eq=False)
class ArrayGeometry:
    """
    Element positions of the base-station array.

    Attributes:
        elements: Positions, shape (K, 3), meters; their mean is the origin
        wavelength: Carrier wavelength in meters
        layout: UPA or ULA
        rows: UPA rows (1 for a ULA)
        cols: UPA columns (element count for a ULA)
        spacing_wl: Element spacing in wavelengths
        tx_mask: Elements that transmit (all in ADTR)
        rx_mask: Elements that receive (all in ADTR)
    """
    elements: NDArray[np.float64] = field(repr=False)
    wavelength: float
    layout: ArrayLayout
    rows: int
    cols: int
    spacing_wl: float
    tx_mask: NDArray[np.bool_] = field(repr=False)
    rx_mask: NDArray[np.bool_] = field(repr=False)

    def __post_init__(self) -> None:
        """Validate and freeze the arrays."""
        if self.spacing_wl <= 0 or self.wavelength <= 0:
            raise InvalidArgumentError("spacing and wavelength must be positive")
        if self.elements.shape != (self.rows * self.cols, 3):
            raise InvalidArgumentError(
                f"expected {self.rows * self.cols} element positions, "
                f"got array of shape {self.elements.shape}"
            )
        if not np.all(np.isfinite(self.elements)):
            raise InvalidArgumentError("element positions must be finite")
        for mask in (self.tx_mask, self.rx_mask):
            if mask.shape != (self.element_count,):
                raise InvalidArgumentError("Tx/Rx masks must have one entry per element")
        duplex = bool(np.all(self.tx_mask) and np.all(self.rx_mask))
        disjoint = not np.any(self.tx_mask & self.rx_mask)
        partition = disjoint and bool(np.all(self.tx_mask | self.rx_mask))
        if not (duplex or partition):
            raise InvalidArgumentError(
                "Tx/Rx masks must both cover every element "
                "or split the array into two disjoint parts"
            )
        scale = max(float(np.abs(self.elements).max()), self.wavelength)
        center = self.elements.mean(axis=0)
        if not np.allclose(center, 0.0, rtol=0.0, atol=1e-9 * scale):
            raise InvalidArgumentError(f"phase center must be the origin, got {center.tolist()}")
        for arr in (self.elements, self.tx_mask, self.rx_mask):
            arr.setflags(write=False)

    @property
    def element_count(self) -> int:
        """Number of elements K."""
        return self.rows * self.cols

    @property
    def is_split(self) -> bool:
        """True when Tx and Rx are disjoint sub-arrays (SATR)."""
        return not bool(np.any(self.tx_mask & self.rx_mask))

    @property
    def spacing_m(self) -> float:
        """Element spacing in meters."""
        return self.spacing_wl * self.wavelength

    @property
    def aperture_m(self) -> float:
        """Largest distance between two elements."""
        diffs = self.elements[:, None, :] - self.elements[None, :, :]
        return float(np.sqrt((diffs**2).sum(axis=-1)).max())

    @property
    def tx_indices(self) -> NDArray[np.intp]:
        """Indices of the transmitting elements."""
        return np.flatnonzero(self.tx_mask)

    @property
    def rx_indices(self) -> NDArray[np.intp]:
        """Indices of the receiving elements."""
        return np.flatnonzero(self.rx_mask)

    @property
    def fraunhofer_distance_m(self) -> float:
        """2 D^2 / lambda, the conventional near/far-field boundary."""
        return 2.0 * self.aperture_m**2 / self.wavelength

    def summary(self) -> dict:
        """Compact description for dataset metadata and reports."""
        return {
            "layout": self.layout.value,
            "rows": self.rows,
            "cols": self.cols,
            "spacing_wl": self.spacing_wl,
            "wavelength_m": self.wavelength,
            "tx_count": int(self.tx_mask.sum()),
            "rx_count": int(self.rx_mask.sum()),
        }

    def __repr__(self) -> str:
        return (
            f"ArrayGeometry({self.layout.value} {self.rows}x{self.cols}, "
            f"spacing={self.spacing_wl} wl, lambda={self.wavelength:.4f} m)"
        )
