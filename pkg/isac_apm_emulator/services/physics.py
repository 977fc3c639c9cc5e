"""
Physics service - single source of truth for the physical conversions.

Range to delay, velocity to Doppler, RCS to gain and the CIR update
interval are computed here only. The compiler, the validator and the
report builder all import from this module.
"""

from __future__ import annotations

import math

from ..core.constants import SPEED_OF_LIGHT, STATIC_UPDATE_INTERVAL_S
from ..core.errors import InvalidArgumentError
from ..models.scenario import SensingScenario, Snapshot, SweepSettings, TargetState


def delay_of(range_m: float) -> float:
    """
    Monostatic round-trip delay.

    Args:
        range_m: Target range in meters (> 0)

    Returns:
        tau = 2 R / c in seconds
    """
    if not (math.isfinite(range_m) and range_m > 0):
        raise InvalidArgumentError(f"range must be > 0, got {range_m}")
    return 2.0 * range_m / SPEED_OF_LIGHT


def range_of(delay_s: float) -> float:
    """Inverse of delay_of: R = c tau / 2."""
    return SPEED_OF_LIGHT * delay_s / 2.0


def doppler_of(radial_velocity_mps: float, wavelength_m: float) -> float:
    """
    Monostatic Doppler shift.

    Args:
        radial_velocity_mps: Radial velocity, positive = approaching
        wavelength_m: Carrier wavelength (> 0)

    Returns:
        nu = 2 v / lambda in hertz (sign of v preserved)
    """
    if not wavelength_m > 0:
        raise InvalidArgumentError(f"wavelength must be > 0, got {wavelength_m}")
    return 2.0 * radial_velocity_mps / wavelength_m


def velocity_of(doppler_hz: float, wavelength_m: float) -> float:
    """Inverse of doppler_of: v = lambda nu / 2."""
    return wavelength_m * doppler_hz / 2.0


def rcs_to_gain(rcs_m2: float, range_m: float, wavelength_m: float) -> float:
    """
    Radar-equation power gain sigma lambda^2 / ((4 pi)^3 R^4).

    Args:
        rcs_m2: Radar cross-section
        range_m: Target range
        wavelength_m: Carrier wavelength

    Returns:
        Linear power gain (take the square root for the amplitude gain)
    """
    for name, value in (("rcs", rcs_m2), ("range", range_m), ("wavelength", wavelength_m)):
        if not (math.isfinite(value) and value > 0):
            raise InvalidArgumentError(f"{name} must be > 0, got {value}")
    return rcs_m2 * wavelength_m**2 / ((4.0 * math.pi) ** 3 * range_m**4)


def _rcs_reference_gain(scenario: SensingScenario) -> float:
    """Strongest radar-equation gain among RCS-specified targets."""
    gains = [
        rcs_to_gain(t.rcs_m2, t.range_m, scenario.wavelength_m)
        for snap in scenario.snapshots
        for t in snap.targets
        if t.rcs_m2 is not None and t.gain_db is None
    ]
    return max(gains) if gains else 1.0


def target_gain_db(scenario: SensingScenario, target: TargetState) -> float:
    """
    Normalized two-way gain of a target in dB.

    Explicit gain_db is used as-is. RCS targets are converted with the
    radar equation and referenced to the strongest RCS target (0 dB).
    """
    if target.gain_db is not None:
        return target.gain_db
    if target.rcs_m2 is None:
        raise InvalidArgumentError("target has neither gain_db nor rcs_m2")
    gain = rcs_to_gain(target.rcs_m2, target.range_m, scenario.wavelength_m)
    return 10.0 * math.log10(gain / _rcs_reference_gain(scenario))


def target_amplitude(scenario: SensingScenario, target: TargetState) -> float:
    """Linear amplitude gain G_n = 10^(gain_db / 20)."""
    return 10.0 ** (target_gain_db(scenario, target) / 20.0)


def max_doppler_hz(snapshot: Snapshot, wavelength_m: float) -> float:
    """Largest |nu| over the targets of a snapshot."""
    return max(
        (abs(doppler_of(t.radial_velocity_mps, wavelength_m)) for t in snapshot.targets),
        default=0.0,
    )


def update_interval_s(snapshot: Snapshot, sweep: SweepSettings) -> float:
    """
    CIR update interval for a snapshot.

    An explicit sweep interval wins; otherwise dt = 1 / (2 nu_max), and
    all-static snapshots fall back to a fixed default.
    """
    if sweep.update_interval_s is not None:
        return sweep.update_interval_s
    nu_max = max_doppler_hz(snapshot, sweep.wavelength_m)
    if nu_max == 0.0:
        return STATIC_UPDATE_INTERVAL_S
    return 1.0 / (2.0 * nu_max)


def range_resolution_m(bandwidth_hz: float) -> float:
    """Range bin of an unpadded transform, c / (2 B)."""
    return SPEED_OF_LIGHT / (2.0 * bandwidth_hz)


def max_unambiguous_range_m(freq_step_hz: float) -> float:
    """Largest range whose delay stays below 1 / df."""
    return SPEED_OF_LIGHT / (2.0 * freq_step_hz)
