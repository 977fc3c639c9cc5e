"""
Tests for delay-domain beamforming (PADP / PAS).
"""

import numpy as np
import pytest
from isac_apm_emulator.core.constants import WindowKind
from isac_apm_emulator.core.errors import InvalidArgumentError, ModeMismatchError
from isac_apm_emulator.models.geometry import FarFieldDirection
from isac_apm_emulator.services.pipeline import synthesize_snapshot
from isac_apm_emulator.systems.beamforming import (
    continuous_delay_response,
    delay_profiles,
    padp_beamform,
    pas_correlation,
    pas_slice,
    refine_peak_power,
    theoretical_pas,
)
from isac_apm_emulator.utils.math_utils import uniform_grid

DELAY_BIN = 12
GRID = uniform_grid(-90.0, 90.0, 1.0)


@pytest.fixture
def on_bin_pas(make_adtr_scenario, range_on_bin, upa):
    """Build the PAS of one on-bin target with no taper or padding."""
    def build(elevation, azimuth, gain_db=0.0):
        scenario = make_adtr_scenario([(range_on_bin(DELAY_BIN), 0.0, elevation, azimuth, gain_db)])
        dataset = synthesize_snapshot(scenario, scenario.snapshots[0], upa, workers=1)[2]
        profiles = delay_profiles(dataset, 0, pad_f=1, window=WindowKind.NONE)
        padp = padp_beamform(profiles, upa, GRID, GRID, delay_bins=[DELAY_BIN])
        return dataset, pas_slice(padp, DELAY_BIN)
    return build


class TestDelayProfiles:
    """Tests for delay_profiles."""

    def test_calibrated_peak(self, make_adtr_scenario, range_on_bin, upa):
        """Test that a unit-gain target has modulus one at its delay bin on every port."""
        scenario = make_adtr_scenario([(range_on_bin(DELAY_BIN), 0.0, 10.0, 10.0, 0.0)])
        dataset = synthesize_snapshot(scenario, scenario.snapshots[0], upa, workers=1)[2]

        profiles = delay_profiles(dataset, 0, pad_f=1, window=WindowKind.NONE)

        assert profiles.values.shape == (32, 64)
        np.testing.assert_allclose(np.abs(profiles.values[:, DELAY_BIN]), 1.0)

    def test_continuous_response_matches_bins(self, make_adtr_scenario, range_on_bin, upa):
        """Test that the direct DFT agrees with the FFT on padded bins."""
        scenario = make_adtr_scenario([(range_on_bin(DELAY_BIN), 0.0, 0.0, 20.0, 0.0)])
        dataset = synthesize_snapshot(scenario, scenario.snapshots[0], upa, workers=1)[2]
        profiles = delay_profiles(dataset, 0, pad_f=2, window=WindowKind.HANNING)

        for m in (0, 5, 24, 77):
            direct = continuous_delay_response(dataset, profiles.delay_s[m], 0, WindowKind.HANNING)
            np.testing.assert_allclose(direct, profiles.values[:, m], atol=1e-9)

    def test_rejects_satr(self, make_satr_scenario):
        """Test that SATR datasets have no per-port delay profiles."""
        scenario = make_satr_scenario([(3.0, 30.0)])
        dataset = synthesize_snapshot(scenario, scenario.snapshots[0], workers=1)[2]

        with pytest.raises(ModeMismatchError):
            delay_profiles(dataset)


class TestPas:
    """Tests for the PAS read at a target's delay."""

    def test_peak_reads_angle_and_gain(self, on_bin_pas):
        """Test that the PAS peak gives the target direction and its gain."""
        _, pas = on_bin_pas(20.0, -30.0, gain_db=-6.0)

        assert pas.peak.elevation_deg == 20.0
        assert pas.peak.azimuth_deg == -30.0
        assert pas.peak.power_db == pytest.approx(-6.0, abs=1e-6)

    def test_boresight_beats_endfire_aliases(self, on_bin_pas):
        """Test that a boresight target is not reported at +/-90 degrees."""
        _, pas = on_bin_pas(0.0, 0.0)

        assert pas.peak.elevation_deg == 0.0
        assert pas.peak.azimuth_deg == 0.0

    def test_matches_theoretical_pattern(self, on_bin_pas, upa):
        """Test the estimated PAS against the closed-form array factor."""
        _, pas = on_bin_pas(15.0, 40.0, gain_db=-3.0)
        theory = theoretical_pas(upa, FarFieldDirection(15.0, 40.0), GRID, GRID, gain_db=-3.0)

        visible = theory >= theory.max() - 60.0
        np.testing.assert_allclose(pas.power_db[visible], theory[visible], atol=1e-6)
        assert pas_correlation(pas.power_db, theory) == pytest.approx(1.0, abs=1e-9)

    def test_refined_power(self, on_bin_pas, upa):
        """Test that the continuous-delay refinement keeps an on-bin target's power."""
        dataset, pas = on_bin_pas(20.0, -30.0, gain_db=-6.0)

        power = refine_peak_power(
            dataset, upa, FarFieldDirection(20.0, -30.0), pas.delay_s,
            1.0 / (64 * dataset.freq_step_hz), window=WindowKind.NONE,
        )

        assert power == pytest.approx(-6.0, abs=1e-6)

    def test_missing_delay_bin(self, on_bin_pas, upa):
        """Test that slicing a bin outside the PADP is an error."""
        dataset, _ = on_bin_pas(0.0, 10.0)
        profiles = delay_profiles(dataset, 0, pad_f=1, window=WindowKind.NONE)
        padp = padp_beamform(profiles, upa, GRID, GRID, delay_bins=[3])

        with pytest.raises(InvalidArgumentError):
            pas_slice(padp, DELAY_BIN)


class TestPasCorrelation:
    """Tests for pas_correlation."""

    def test_shape_mismatch(self):
        """Test that patterns on different grids cannot be compared."""
        with pytest.raises(InvalidArgumentError):
            pas_correlation(np.zeros((3, 3)), np.zeros((3, 4)))

    def test_unrelated_patterns(self):
        """Test that a peak in the wrong place correlates poorly."""
        reference = np.full((21, 21), -40.0)
        reference[10, 10] = 0.0
        estimate = np.full((21, 21), -40.0)
        estimate[2, 2] = 0.0

        assert pas_correlation(estimate, reference) < 0.1
