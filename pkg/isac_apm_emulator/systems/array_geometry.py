"""
Array layouts and the spatial phase models built on them.

Both the compiler (which loads steering phases into the APM) and the
estimators (which beamform against them) use these functions, so the angle
convention lives in exactly one place.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
from numpy.typing import NDArray

from ..core.constants import SPEED_OF_LIGHT, ArrayLayout
from ..core.errors import InvalidArgumentError
from ..models.geometry import ArrayGeometry, FarFieldDirection, NearFieldPoint
from ..utils.logger import get_logger

logger = get_logger(__name__)


def _wavelength(carrier_hz: float) -> float:
    if not (math.isfinite(carrier_hz) and carrier_hz > 0):
        raise InvalidArgumentError(f"carrier frequency must be > 0, got {carrier_hz}")
    return SPEED_OF_LIGHT / carrier_hz


def build_upa(rows: int, cols: int, spacing_wl: float, carrier_hz: float) -> ArrayGeometry:
    """
    Build a uniform planar array in the x-z plane, centered on the origin.

    Element k = r * cols + c sits at
    x = (c - (cols-1)/2) d, z = (r - (rows-1)/2) d, y = 0.

    Args:
        rows: Number of rows along z
        cols: Number of columns along x
        spacing_wl: Element spacing in wavelengths
        carrier_hz: Carrier frequency

    Returns:
        The array geometry (every element both transmits and receives)
    """
    if rows < 1 or cols < 1:
        raise InvalidArgumentError(f"UPA needs rows, cols >= 1, got {rows}x{cols}")
    if not spacing_wl > 0:
        raise InvalidArgumentError(f"element spacing must be > 0, got {spacing_wl}")
    wavelength = _wavelength(carrier_hz)
    d = spacing_wl * wavelength

    r_idx, c_idx = np.divmod(np.arange(rows * cols), cols)
    elements = np.zeros((rows * cols, 3))
    elements[:, 0] = (c_idx - (cols - 1) / 2.0) * d
    elements[:, 2] = (r_idx - (rows - 1) / 2.0) * d

    all_ports = np.ones(rows * cols, dtype=bool)
    geometry = ArrayGeometry(
        elements=elements,
        wavelength=wavelength,
        layout=ArrayLayout.UPA,
        rows=rows,
        cols=cols,
        spacing_wl=spacing_wl,
        tx_mask=all_ports,
        rx_mask=all_ports.copy(),
    )
    logger.debug(f"Built {geometry!r}")
    return geometry


def build_split_ula(
    count: int,
    spacing_wl: float,
    carrier_hz: float,
    tx_count: int,
) -> ArrayGeometry:
    """
    Build a linear array on the x-axis split into Tx and Rx sub-arrays.

    The first ``tx_count`` elements (most negative x) transmit, the rest
    receive. The phase center is the mean of all elements.

    Args:
        count: Total number of elements
        spacing_wl: Element spacing in wavelengths
        carrier_hz: Carrier frequency
        tx_count: Number of transmitting elements, 1 <= tx_count < count

    Returns:
        The array geometry
    """
    if count < 2:
        raise InvalidArgumentError(f"a split ULA needs at least 2 elements, got {count}")
    if not 1 <= tx_count < count:
        raise InvalidArgumentError(f"tx_count must lie in [1, {count - 1}], got {tx_count}")
    if not spacing_wl > 0:
        raise InvalidArgumentError(f"element spacing must be > 0, got {spacing_wl}")
    wavelength = _wavelength(carrier_hz)
    d = spacing_wl * wavelength

    elements = np.zeros((count, 3))
    elements[:, 0] = (np.arange(count) - (count - 1) / 2.0) * d

    tx_mask = np.zeros(count, dtype=bool)
    tx_mask[:tx_count] = True
    geometry = ArrayGeometry(
        elements=elements,
        wavelength=wavelength,
        layout=ArrayLayout.ULA,
        rows=1,
        cols=count,
        spacing_wl=spacing_wl,
        tx_mask=tx_mask,
        rx_mask=~tx_mask,
    )
    logger.debug(f"Built {geometry!r} with {tx_count} Tx elements")
    return geometry


def far_field_steering(geometry: ArrayGeometry, direction: FarFieldDirection) -> NDArray[np.complex128]:
    """
    Plane-wave steering vector exp(j 2pi/lambda r_k . u(theta, phi)).

    Args:
        geometry: Array geometry
        direction: Plane-wave direction

    Returns:
        Complex vector with one unit-modulus entry per element
    """
    k0 = 2.0 * np.pi / geometry.wavelength
    return np.exp(1j * k0 * (geometry.elements @ direction.unit_vector))


def steering_matrix(
    geometry: ArrayGeometry,
    elevations_deg: NDArray[np.float64],
    azimuths_deg: NDArray[np.float64],
) -> NDArray[np.complex128]:
    """
    Steering vectors for every (elevation, azimuth) grid pair.

    Returns:
        Array of shape (n_elev, n_azim, K)
    """
    theta = np.radians(np.asarray(elevations_deg, dtype=np.float64))[:, None]
    phi = np.radians(np.asarray(azimuths_deg, dtype=np.float64))[None, :]
    u = np.stack(
        np.broadcast_arrays(np.cos(theta) * np.sin(phi), np.cos(theta) * np.cos(phi), np.sin(theta)),
        axis=-1,
    )
    k0 = 2.0 * np.pi / geometry.wavelength
    return np.exp(1j * k0 * (u @ geometry.elements.T))


def _masked_elements(geometry: ArrayGeometry, mask: Optional[NDArray[np.bool_]]) -> NDArray[np.float64]:
    if mask is None:
        return geometry.elements
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (geometry.element_count,):
        raise InvalidArgumentError(
            f"mask must have {geometry.element_count} entries, got shape {mask.shape}"
        )
    return geometry.elements[mask]


def path_differences(
    elements: NDArray[np.float64],
    points: NDArray[np.float64],
) -> NDArray[np.float64]:
    """
    d0 - d_k for every (point, element) pair.

    Uses (2 r.p - |r|^2) / (d0 + d_k), which stays accurate when the point is
    many apertures away and both distances are nearly equal.

    Args:
        elements: Element positions (K, 3)
        points: Target positions (..., 3)

    Returns:
        Array of shape (..., K)
    """
    p = np.asarray(points, dtype=np.float64)
    d0 = np.linalg.norm(p, axis=-1)[..., None]
    diff = p[..., None, :] - elements
    dk = np.linalg.norm(diff, axis=-1)
    numer = 2.0 * (p @ elements.T) - np.sum(elements**2, axis=-1)
    return numer / (d0 + dk)


def near_field_phases(
    geometry: ArrayGeometry,
    point: NearFieldPoint,
    mask: Optional[NDArray[np.bool_]] = None,
) -> NDArray[np.complex128]:
    """
    Spherical-wavefront phases exp(j 2pi/lambda (d0 - d_k)).

    d0 is the distance from the phase center to the point and d_k the
    distance from element k. Far away this tends to the plane-wave steering
    vector toward the point.

    Args:
        geometry: Array geometry
        point: Target position
        mask: Elements to evaluate (None = all)

    Returns:
        Complex vector over the selected elements, in element order

    Raises:
        InvalidArgumentError: The point coincides with an element
    """
    elements = _masked_elements(geometry, mask)
    p = point.position
    dk = np.linalg.norm(p - elements, axis=-1)
    if np.any(dk == 0.0):
        raise InvalidArgumentError(f"point {point} coincides with an array element")
    k0 = 2.0 * np.pi / geometry.wavelength
    return np.exp(1j * k0 * path_differences(elements, p))


def element_distances(
    geometry: ArrayGeometry,
    point: NearFieldPoint,
    mask: Optional[NDArray[np.bool_]] = None,
) -> NDArray[np.float64]:
    """Distance from each selected element to the point."""
    elements = _masked_elements(geometry, mask)
    return np.linalg.norm(point.position - elements, axis=-1)
