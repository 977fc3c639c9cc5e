"""
Tests for the physics service.
"""

import math
from dataclasses import replace

import pytest
from isac_apm_emulator.core.constants import SPEED_OF_LIGHT, STATIC_UPDATE_INTERVAL_S
from isac_apm_emulator.core.errors import InvalidArgumentError
from isac_apm_emulator.models.scenario import Snapshot, SweepSettings
from isac_apm_emulator.services.physics import (
    delay_of,
    doppler_of,
    max_unambiguous_range_m,
    range_of,
    range_resolution_m,
    rcs_to_gain,
    target_gain_db,
    update_interval_s,
    velocity_of,
)


def with_rcs(scenario, rcs_values):
    """Replace the gains of the first snapshot by radar cross-sections."""
    snap = scenario.snapshots[0]
    targets = tuple(
        replace(t, gain_db=None, rcs_m2=rcs) for t, rcs in zip(snap.targets, rcs_values)
    )
    return replace(scenario, snapshots=(Snapshot(snap.label, targets),))


class TestConversions:
    """Tests for range/delay and velocity/Doppler conversions."""

    def test_delay(self):
        """Test tau = 2R/c."""
        assert delay_of(150.0) == pytest.approx(300.0 / SPEED_OF_LIGHT)
        assert range_of(delay_of(37.5)) == pytest.approx(37.5)

    @pytest.mark.parametrize("value", [0.0, -1.0, math.nan, math.inf])
    def test_delay_needs_positive_range(self, value):
        """Test that non-positive or non-finite ranges are rejected."""
        with pytest.raises(InvalidArgumentError):
            delay_of(value)

    def test_doppler_sign(self):
        """Test nu = 2v/lambda with approaching targets positive."""
        assert doppler_of(10.0, 0.1) == pytest.approx(200.0)
        assert doppler_of(-10.0, 0.1) == pytest.approx(-200.0)
        assert velocity_of(doppler_of(7.0, 0.0857), 0.0857) == pytest.approx(7.0)

    def test_doppler_needs_wavelength(self):
        """Test that a zero wavelength is rejected."""
        with pytest.raises(InvalidArgumentError):
            doppler_of(1.0, 0.0)

    def test_resolution(self):
        """Test the unpadded range bin and the unambiguous range."""
        assert range_resolution_m(40e6) == pytest.approx(SPEED_OF_LIGHT / 80e6)
        assert max_unambiguous_range_m(160e3) == pytest.approx(SPEED_OF_LIGHT / 320e3)


class TestGain:
    """Tests for gain normalization."""

    def test_radar_equation(self):
        """Test sigma lambda^2 / ((4 pi)^3 R^4)."""
        assert rcs_to_gain(1.0, 10.0, 0.1) == pytest.approx(0.01 / ((4 * math.pi) ** 3 * 1e4))

    def test_radar_equation_rejects_zero(self):
        """Test that a zero cross-section is rejected."""
        with pytest.raises(InvalidArgumentError):
            rcs_to_gain(0.0, 10.0, 0.1)

    def test_explicit_gain(self, drone_scenario):
        """Test that gain_db is used as given."""
        target = drone_scenario.snapshot("t1").targets[1]

        assert target_gain_db(drone_scenario, target) == -25.0

    def test_rcs_referenced_to_strongest(self, make_adtr_scenario):
        """Test that RCS targets are normalized to the strongest one."""
        scenario = with_rcs(
            make_adtr_scenario([(10.0, 0.0, 0.0, 0.0, 0.0), (20.0, 0.0, 0.0, 10.0, 0.0)]),
            [1.0, 1.0],
        )
        near, far = scenario.snapshots[0].targets

        assert target_gain_db(scenario, near) == pytest.approx(0.0)
        assert target_gain_db(scenario, far) == pytest.approx(-40.0 * math.log10(2.0))


class TestUpdateInterval:
    """Tests for the CIR update interval."""

    def test_explicit(self, make_adtr_scenario):
        """Test that an explicit interval wins."""
        scenario = make_adtr_scenario([(10.0, 50.0, 0.0, 0.0, 0.0)], interval_s=2e-4)

        assert update_interval_s(scenario.snapshots[0], scenario.sweep) == 2e-4

    def test_from_fastest_target(self, drone_scenario):
        """Test dt = 1 / (2 nu_max) when no interval is set."""
        snapshot = drone_scenario.snapshot("t3")
        nu_max = 2 * 15.0 / drone_scenario.wavelength_m

        assert update_interval_s(snapshot, drone_scenario.sweep) == pytest.approx(1 / (2 * nu_max))

    def test_static_fallback(self, satr_scenario):
        """Test that an all-static snapshot uses the fixed default."""
        sweep = SweepSettings(carrier_hz=3.5e9, bandwidth_hz=40e6, n_freq=11)

        assert update_interval_s(satr_scenario.snapshots[0], sweep) == STATIC_UPDATE_INTERVAL_S
