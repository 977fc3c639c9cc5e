"""
Delay-domain beamforming for ADTR datasets.

Each port is first transformed over frequency into a delay profile. A
Bartlett beamformer then scans the (elevation, azimuth) grid with the
two-way signature b_k = a_k^2 (the same port transmits and receives), giving
the power-angular-delay profile. Slicing it at a target's delay yields the
power-angular spectrum whose peak reads angle and power.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import minimize_scalar

from ..core.constants import (
    PAS_COMPARISON_RANGE_DB,
    PAS_PEAK_TIE_DB,
    SPEED_OF_LIGHT,
    NormalizationKind,
    SensingMode,
    WindowKind,
)
from ..core.errors import InvalidArgumentError, ModeMismatchError
from ..models.dataset import CfrDataset
from ..models.estimates import DelayProfiles, DetectedTarget, Padp, PasSlice
from ..models.geometry import ArrayGeometry, FarFieldDirection
from ..utils.logger import get_logger
from ..utils.math_utils import apply_window, power_to_db, window_weights
from .array_geometry import far_field_steering, steering_matrix
from .range_velocity import delay_axis_s

logger = get_logger(__name__)


# =============================================================================
# Delay profiles
# =============================================================================

def delay_profiles(
    dataset: CfrDataset,
    time_index: int = 0,
    pad_f: int = 4,
    window: WindowKind = WindowKind.HANNING,
) -> DelayProfiles:
    """
    Per-port delay-domain transform of one CIR sample.

    Args:
        dataset: ADTR dataset
        time_index: CIR sample to transform
        pad_f: Zero-padding factor over frequency
        window: Taper over frequency

    Returns:
        Profiles of shape (K, N_f pad_f), scaled so a unit-gain target
        peaks at modulus 1
    """
    if dataset.mode is not SensingMode.ADTR:
        raise ModeMismatchError("delay profiles need an ADTR dataset")
    if not 0 <= time_index < dataset.n_time:
        raise InvalidArgumentError(f"time index {time_index} outside 0..{dataset.n_time - 1}")
    if pad_f < 1:
        raise InvalidArgumentError("zero-padding factor must be >= 1")

    w_f = window_weights(dataset.n_freq, window)
    x = apply_window(dataset.samples[time_index].T, window, axis=1)  # (K, N_f)
    m_f = dataset.n_freq * pad_f
    values = np.fft.fft(x, n=m_f, axis=1) / w_f.sum()
    return DelayProfiles(
        values=values,
        delay_s=delay_axis_s(m_f, dataset.freq_step_hz),
        time_index=time_index,
    )


def continuous_delay_response(
    dataset: CfrDataset,
    delay_s: float,
    time_index: int = 0,
    window: WindowKind = WindowKind.HANNING,
) -> NDArray[np.complex128]:
    """
    Per-port delay response at an arbitrary delay (direct DFT).

    Matches delay_profiles exactly on its bins.
    """
    w_f = window_weights(dataset.n_freq, window)
    j = np.arange(dataset.n_freq)
    kernel = apply_window(np.exp(-2j * np.pi * j * dataset.freq_step_hz * delay_s), window)
    return (dataset.samples[time_index].T @ kernel) / w_f.sum()


# =============================================================================
# PADP and PAS
# =============================================================================

def _check_grid(name: str, grid: ArrayLike) -> NDArray[np.float64]:
    arr = np.asarray(grid, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidArgumentError(f"{name} grid must be a non-empty vector")
    return arr


def two_way_signatures(
    geometry: ArrayGeometry,
    elevations_deg: NDArray[np.float64],
    azimuths_deg: NDArray[np.float64],
) -> NDArray[np.complex128]:
    """b_k(theta, phi) = a_k(theta, phi)^2 over the grid, shape (n_el, n_az, K)."""
    return steering_matrix(geometry, elevations_deg, azimuths_deg) ** 2


def padp_beamform(
    profiles: DelayProfiles,
    geometry: ArrayGeometry,
    elevations_deg: ArrayLike,
    azimuths_deg: ArrayLike,
    delay_bins: Optional[ArrayLike] = None,
    normalization: NormalizationKind = NormalizationKind.CALIBRATED,
    label: str = "",
) -> Padp:
    """
    Bartlett PADP P = |sum_k conj(b_k) x_k(tau)|^2.

    Only the requested padded delay bins are beamformed (all when None).
    CALIBRATED divides by K^2 so a unit-gain target reads 0 dB; PEAK puts
    the global maximum at 0 dB.

    Args:
        profiles: Delay profiles (one per element)
        geometry: Array geometry
        elevations_deg: Elevation grid
        azimuths_deg: Azimuth grid
        delay_bins: Padded delay bins to evaluate
        normalization: Power reference
        label: Snapshot label

    Returns:
        The PADP over (elevation, azimuth, selected delays)
    """
    el = _check_grid("elevation", elevations_deg)
    az = _check_grid("azimuth", azimuths_deg)
    k = geometry.element_count
    if profiles.values.shape[0] != k:
        raise InvalidArgumentError(
            f"{profiles.values.shape[0]} profiles given for a {k}-element array"
        )
    if delay_bins is None:
        bins = np.arange(profiles.values.shape[1])
    else:
        bins = np.atleast_1d(np.asarray(delay_bins, dtype=np.intp))
        if bins.size == 0 or bins.min() < 0 or bins.max() >= profiles.values.shape[1]:
            raise InvalidArgumentError("delay bins outside the profile")

    signatures = two_way_signatures(geometry, el, az)  # (n_el, n_az, K)
    beams = np.conj(signatures) @ profiles.values[:, bins]  # (n_el, n_az, n_bins)
    power = np.abs(beams) ** 2

    if normalization is NormalizationKind.CALIBRATED:
        reference = float(k) ** 2
    else:
        reference = float(power.max()) or 1.0
    logger.debug(f"PADP {label}: {len(el)}x{len(az)} angles x {len(bins)} delay bin(s)")
    return Padp(
        power_db=power_to_db(power / reference),
        elevation_deg=el,
        azimuth_deg=az,
        delay_s=profiles.delay_s[bins],
        delay_bins=bins,
        label=label,
        normalization=normalization,
    )


def _peak_cell(
    plane: NDArray[np.float64],
    elevations_deg: NDArray[np.float64],
    azimuths_deg: NDArray[np.float64],
) -> tuple[int, int]:
    """
    Grid cell of the PAS maximum.

    Among cells tied with the maximum the one closest to broadside (smallest
    direction-cosine norm) wins; a boresight target otherwise ties with its
    endfire aliases at +/-90 degrees.
    """
    tied = np.argwhere(plane >= plane.max() - PAS_PEAK_TIE_DB)
    if len(tied) == 1:
        return int(tied[0, 0]), int(tied[0, 1])
    el = np.radians(elevations_deg[tied[:, 0]])
    az = np.radians(azimuths_deg[tied[:, 1]])
    norm = np.hypot(np.cos(el) * np.sin(az), np.sin(el))
    best = tied[int(np.argmin(norm))]
    return int(best[0]), int(best[1])


def pas_slice(padp: Padp, delay_bin: int) -> PasSlice:
    """
    The power-angular spectrum at one padded delay bin.

    Args:
        padp: Profile containing the bin
        delay_bin: Padded delay-bin number

    Returns:
        The angular plane and its peak
    """
    positions = np.flatnonzero(padp.delay_bins == delay_bin)
    if positions.size == 0:
        raise InvalidArgumentError(f"delay bin {delay_bin} is not part of the PADP")
    plane = padp.power_db[:, :, positions[0]]
    i, j = _peak_cell(plane, padp.elevation_deg, padp.azimuth_deg)
    delay = float(padp.delay_s[positions[0]])
    peak = DetectedTarget(
        power_db=float(plane[i, j]),
        range_m=SPEED_OF_LIGHT * delay / 2.0,
        elevation_deg=float(padp.elevation_deg[i]),
        azimuth_deg=float(padp.azimuth_deg[j]),
    )
    return PasSlice(
        power_db=plane,
        elevation_deg=padp.elevation_deg,
        azimuth_deg=padp.azimuth_deg,
        delay_s=delay,
        peak=peak,
    )


def refine_peak_power(
    dataset: CfrDataset,
    geometry: ArrayGeometry,
    direction: FarFieldDirection,
    delay_s: float,
    delay_step_s: float,
    time_index: int = 0,
    window: WindowKind = WindowKind.HANNING,
) -> float:
    """
    Beamformed peak power at the best continuous delay near ``delay_s``.

    Searches within one padded delay bin either side; returns calibrated
    power in dB (unit-gain target = 0 dB).
    """
    b = far_field_steering(geometry, direction) ** 2
    k = geometry.element_count

    def power(offset_bins: float) -> float:
        x = continuous_delay_response(dataset, delay_s + offset_bins * delay_step_s, time_index, window)
        return float(np.abs(np.vdot(b, x)) ** 2) / k**2

    result = minimize_scalar(
        lambda u: -power(u), bounds=(-1.0, 1.0), method="bounded", options={"xatol": 1e-7}
    )
    best = max(-float(result.fun), power(0.0))
    return float(power_to_db(best))


# =============================================================================
# Closed-form reference pattern
# =============================================================================

def _dirichlet_power(n: int, psi: NDArray[np.float64]) -> NDArray[np.float64]:
    """|sin(n psi/2) / sin(psi/2)|^2, with the n^2 limit where the denominator vanishes."""
    half = np.sin(psi / 2.0)
    out = np.full(psi.shape, float(n * n))
    regular = np.abs(half) > 1e-12
    out[regular] = (np.sin(n * psi[regular] / 2.0) / half[regular]) ** 2
    return out


def theoretical_pas(
    geometry: ArrayGeometry,
    direction: FarFieldDirection,
    elevations_deg: ArrayLike,
    azimuths_deg: ArrayLike,
    gain_db: float = 0.0,
) -> NDArray[np.float64]:
    """
    Two-way array-factor pattern of a uniform planar array steered to a target.

    For element spacing d and u the unit vector, the beamformer output
    factorizes into Dirichlet kernels along x (cols) and z (rows) with
    psi = 2 k0 d (u_target - u_scan).

    Args:
        geometry: Uniform array geometry (UPA or unsplit ULA)
        direction: Target direction
        elevations_deg: Elevation grid
        azimuths_deg: Azimuth grid
        gain_db: Target gain (calibrated reference)

    Returns:
        Power in dB over (elevation, azimuth)
    """
    el = np.radians(_check_grid("elevation", elevations_deg))[:, None]
    az = np.radians(_check_grid("azimuth", azimuths_deg))[None, :]
    u0 = direction.unit_vector
    ux = np.cos(el) * np.sin(az)
    uz = np.broadcast_to(np.sin(el), ux.shape)

    k2d = 2.0 * (2.0 * np.pi / geometry.wavelength) * geometry.spacing_m
    psi_x = k2d * (u0[0] - ux)
    psi_z = k2d * (u0[2] - uz)
    af = _dirichlet_power(geometry.cols, psi_x) * _dirichlet_power(geometry.rows, psi_z)
    return power_to_db(af / geometry.element_count**2 * 10.0 ** (gain_db / 10.0))


def pas_correlation(
    estimated_db: NDArray[np.float64],
    reference_db: NDArray[np.float64],
    dynamic_range_db: float = PAS_COMPARISON_RANGE_DB,
) -> float:
    """
    Pearson correlation of two PAS patterns.

    Compared on linear power over the grid points where the reference lies
    within ``dynamic_range_db`` of its peak.
    """
    if estimated_db.shape != reference_db.shape:
        raise InvalidArgumentError("PAS patterns must share a grid")
    mask = reference_db >= reference_db.max() - dynamic_range_db
    if np.count_nonzero(mask) < 2:
        raise InvalidArgumentError("too few points inside the comparison range")
    est = 10.0 ** (estimated_db[mask] / 10.0)
    ref = 10.0 ** (reference_db[mask] / 10.0)
    return float(np.corrcoef(est, ref)[0, 1])
