"""
Range-velocity processing of one ADTR port.

A target contributes exp(j 2pi nu t_i) exp(j 2pi f'_j tau) to the recorded
slice. Forward DFTs along both axes are matched to that sign, so a target at
positive delay and positive (approaching) Doppler peaks at positive range
and positive velocity.
"""

from __future__ import annotations

import numpy as np
from numpy.typing import NDArray

from ..core.constants import SPEED_OF_LIGHT, NormalizationKind, SensingMode, WindowKind
from ..core.errors import InvalidArgumentError, ModeMismatchError
from ..models.dataset import CfrDataset
from ..models.estimates import RangeVelocityMap
from ..utils.logger import get_logger
from ..utils.math_utils import apply_window, power_to_db, window_weights

logger = get_logger(__name__)


def doppler_bin_order(size: int) -> NDArray[np.intp]:
    """
    Bins -ceil(size/2)+1 ... floor(size/2) as FFT indices.

    The Doppler axis is the half-open band (-fs/2, +fs/2], so a target
    exactly at the band edge reads as approaching.
    """
    lo = -((size - 1) // 2)
    return np.arange(lo, size // 2 + 1)


def delay_axis_s(n_freq_padded: int, freq_step_hz: float) -> NDArray[np.float64]:
    """Delay of each padded bin, m / (M_f df)."""
    return np.arange(n_freq_padded) / (n_freq_padded * freq_step_hz)


def rv_spectrum(
    x: NDArray[np.complex128],
    pad_t: int,
    pad_f: int,
    window: WindowKind,
) -> NDArray[np.complex128]:
    """
    Zero-padded 2D DFT of a (N_t, N_f) slice, Doppler axis reordered.

    Returns:
        Complex spectrum of shape (N_t pad_t, N_f pad_f); rows follow
        doppler_bin_order, columns follow delay bins 0..M_f-1
    """
    n_time, n_freq = x.shape
    tapered = apply_window(apply_window(x, window, axis=0), window, axis=1)
    m_t, m_f = n_time * pad_t, n_freq * pad_f
    spec = np.fft.fft2(tapered, s=(m_t, m_f))
    return spec[doppler_bin_order(m_t) % m_t]


def range_velocity_map(
    dataset: CfrDataset,
    port: int = 0,
    pad_t: int = 4,
    pad_f: int = 4,
    window: WindowKind = WindowKind.HANNING,
    normalization: NormalizationKind = NormalizationKind.CALIBRATED,
    time_index: int = 0,
) -> RangeVelocityMap:
    """
    Joint range-velocity power map of one port.

    With CALIBRATED normalization a unit-gain (0 dB) target reads 0 dB at
    its bin; PEAK puts the global maximum at 0 dB. A single-sample dataset
    yields a range-only profile (``velocity_estimable`` False) taken at
    ``time_index``.

    Args:
        dataset: ADTR dataset
        port: Port index
        pad_t: Zero-padding factor on the time axis
        pad_f: Zero-padding factor on the frequency axis
        window: Taper on both axes
        normalization: Power reference
        time_index: CIR sample used for a range-only profile

    Returns:
        The map with velocity rows and range columns
    """
    if dataset.mode is not SensingMode.ADTR:
        raise ModeMismatchError("range-velocity maps need an ADTR dataset")
    if not 0 <= port < dataset.samples.shape[2]:
        raise InvalidArgumentError(f"port {port} outside 0..{dataset.samples.shape[2] - 1}")
    if pad_t < 1 or pad_f < 1:
        raise InvalidArgumentError("zero-padding factors must be >= 1")
    if dataset.n_freq < 2:
        raise InvalidArgumentError("range processing needs at least 2 frequency points")

    velocity_estimable = dataset.n_time >= 2
    if velocity_estimable:
        x = dataset.samples[:, :, port]
    else:
        logger.warning(
            f"Snapshot {dataset.label}: single CIR sample, returning a range-only profile"
        )
        x = dataset.samples[time_index : time_index + 1, :, port]
        pad_t = 1

    spec = rv_spectrum(x, pad_t, pad_f, window)
    m_t, m_f = spec.shape
    power = np.abs(spec) ** 2

    if normalization is NormalizationKind.CALIBRATED:
        w_t = window_weights(x.shape[0], window)
        w_f = window_weights(x.shape[1], window)
        reference = float(w_t.sum() * w_f.sum()) ** 2
    else:
        reference = float(power.max()) or 1.0
    power_db = power_to_db(power / reference)

    range_m = SPEED_OF_LIGHT * delay_axis_s(m_f, dataset.freq_step_hz) / 2.0
    if velocity_estimable:
        doppler_hz = doppler_bin_order(m_t) / (m_t * dataset.update_interval_s)
        wavelength = SPEED_OF_LIGHT / dataset.carrier_hz
        velocity = wavelength * doppler_hz / 2.0
    else:
        velocity = np.zeros(1)

    logger.debug(
        f"RV map {dataset.label} port {port}: {m_t}x{m_f} bins, "
        f"peak {power_db.max():.2f} dB"
    )
    return RangeVelocityMap(
        power_db=power_db,
        range_m=range_m,
        velocity_mps=velocity,
        port=port,
        label=dataset.label,
        velocity_estimable=velocity_estimable,
        normalization=normalization,
    )
