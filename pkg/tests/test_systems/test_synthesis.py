"""
Tests for the forward synthesis engine.
"""

import numpy as np
import pytest
from isac_apm_emulator.core.constants import Events
from isac_apm_emulator.core.errors import InvalidArgumentError, ModeMismatchError
from isac_apm_emulator.core.event_bus import event_bus
from isac_apm_emulator.models.geometry import FarFieldDirection
from isac_apm_emulator.models.scenario import NoiseSettings
from isac_apm_emulator.services.pipeline import synthesize_snapshot
from isac_apm_emulator.systems.array_geometry import far_field_steering
from isac_apm_emulator.systems.compiler import compile_snapshot
from isac_apm_emulator.systems.synthesis import (
    PORT_CHUNK,
    add_noise,
    baseband_grid,
    synthesize_cfr_adtr,
    synthesize_cfr_satr,
)


class TestBasebandGrid:
    """Tests for the frequency offsets."""

    def test_symmetric_span(self, drone_scenario):
        """Test that f' runs from -B/2 to +B/2."""
        grid = baseband_grid(drone_scenario.sweep)

        assert len(grid) == 251
        assert grid[0] == pytest.approx(-20e6)
        assert grid[-1] == pytest.approx(20e6)
        assert grid[125] == pytest.approx(0.0, abs=1e-6)


class TestSynthesizeAdtr:
    """Tests for synthesize_cfr_adtr."""

    def test_shape_and_metadata(self, make_adtr_scenario, range_on_bin):
        """Test tensor shape and the snapshot echo."""
        scenario = make_adtr_scenario([(range_on_bin(10), 0.0, 0.0, 0.0, 0.0)])

        _, _, dataset = synthesize_snapshot(scenario, scenario.snapshots[0], workers=1)

        assert dataset.samples.shape == (32, 64, 32)
        assert dataset.label == "s1"
        assert dataset.metadata["scenario"] == "small_adtr"
        assert dataset.update_interval_s == pytest.approx(1e-3)

    def test_superposition(self, make_adtr_scenario, range_on_bin, velocity_on_bin):
        """Test that two targets synthesize to the sum of each alone."""
        a = (range_on_bin(8), velocity_on_bin(3), 10.0, -20.0, 0.0)
        b = (range_on_bin(20), velocity_on_bin(-6), -5.0, 35.0, -10.0)

        both = make_adtr_scenario([a, b])
        only_a = make_adtr_scenario([a])
        only_b = make_adtr_scenario([b])

        x = synthesize_snapshot(both, both.snapshots[0], workers=1)[2].samples
        xa = synthesize_snapshot(only_a, only_a.snapshots[0], workers=1)[2].samples
        xb = synthesize_snapshot(only_b, only_b.snapshots[0], workers=1)[2].samples

        np.testing.assert_allclose(x, xa + xb, atol=1e-12)

    def test_worker_count_does_not_change_result(self, make_adtr_scenario, range_on_bin):
        """Test that threaded synthesis is bit-identical to serial synthesis."""
        scenario = make_adtr_scenario([
            (range_on_bin(8), 1.0, 10.0, -20.0, 0.0),
            (range_on_bin(30), -2.0, 0.0, 5.0, -3.0),
        ])

        serial = synthesize_snapshot(scenario, scenario.snapshots[0], workers=1)[2]
        threaded = synthesize_snapshot(scenario, scenario.snapshots[0], workers=3)[2]

        np.testing.assert_array_equal(serial.samples, threaded.samples)

    def test_progress_events(self, make_adtr_scenario, range_on_bin):
        """Test that one progress event is published per port chunk."""
        scenario = make_adtr_scenario([(range_on_bin(8), 0.0, 0.0, 0.0, 0.0)])
        seen = []

        def on_progress(label, done, total):
            seen.append((label, done, total))

        event_bus.subscribe(Events.SYNTHESIS_PROGRESS, on_progress)
        try:
            synthesize_snapshot(scenario, scenario.snapshots[0], workers=1)
        finally:
            event_bus.unsubscribe(Events.SYNTHESIS_PROGRESS, on_progress)

        total = 32 // PORT_CHUNK
        assert seen == [("s1", i + 1, total) for i in range(total)]

    def test_rejects_satr_configuration(self, satr_scenario):
        """Test that a SATR configuration cannot be synthesized as ADTR."""
        apm, units = compile_snapshot(satr_scenario, satr_scenario.snapshots[0])

        with pytest.raises(ModeMismatchError):
            synthesize_cfr_adtr(apm, units, satr_scenario.sweep)

    def test_unit_count_mismatch(self, make_adtr_scenario, range_on_bin):
        """Test that every target column needs its RTS unit."""
        scenario = make_adtr_scenario([(range_on_bin(8), 0.0, 0.0, 0.0, 0.0)] * 2)
        apm, units = compile_snapshot(scenario, scenario.snapshots[0])

        with pytest.raises(InvalidArgumentError):
            synthesize_cfr_adtr(apm, units[:1], scenario.sweep)


class TestSynthesizeSatr:
    """Tests for synthesize_cfr_satr."""

    def test_shape_and_ports(self, make_satr_scenario):
        """Test the (time, rx, tx, frequency) layout and port numbering."""
        scenario = make_satr_scenario([(3.0, 30.0)])
        apm, units = compile_snapshot(scenario, scenario.snapshots[0])

        dataset = synthesize_cfr_satr(apm, units, scenario.sweep, workers=1)

        assert dataset.samples.shape == (1, 8, 8, 201)
        np.testing.assert_array_equal(dataset.port_indices[0], np.arange(8, 16))
        np.testing.assert_array_equal(dataset.port_indices[1], np.arange(8))
        np.testing.assert_allclose(np.abs(dataset.samples), 1.0)

    def test_pair_phase(self, make_satr_scenario):
        """Test that each Rx x Tx pair carries the product of its two weights."""
        scenario = make_satr_scenario([(2.0, -20.0)])
        apm, units = compile_snapshot(scenario, scenario.snapshots[0])
        dataset = synthesize_cfr_satr(apm, units, scenario.sweep, workers=1)

        center = dataset.samples[0, :, :, 100]
        expected = np.outer(apm.weights_rx[8:, 0], apm.weights_tx[:8, 0])

        np.testing.assert_allclose(center, expected, atol=1e-12)

    def test_rank_one_per_frequency(self, make_satr_scenario):
        """Test that one target gives a rank-1 (rx, tx) matrix at every frequency."""
        scenario = make_satr_scenario([(3.0, 30.0)])
        apm, units = compile_snapshot(scenario, scenario.snapshots[0])
        dataset = synthesize_cfr_satr(apm, units, scenario.sweep, workers=1)

        singular = np.linalg.svd(np.moveaxis(dataset.samples[0], -1, 0), compute_uv=False)

        assert singular.shape == (201, 8)
        assert np.max(singular[:, 1] / singular[:, 0]) < 1e-12


class TestPurity:
    """Tests for the time and frequency structure of a single target."""

    @pytest.fixture
    def single_target(self, make_adtr_scenario, range_on_bin):
        """One moving off-bin target and its synthesized dataset."""
        scenario = make_adtr_scenario([(range_on_bin(9) + 0.37, 3.3, 15.0, -40.0, -4.0)])
        apm, units = compile_snapshot(scenario, scenario.snapshots[0])
        dataset = synthesize_cfr_adtr(apm, units, scenario.sweep, workers=1)
        return apm, units[0], dataset

    def test_doppler_phase_increment(self, single_target):
        """Test a constant modulus and a 2 pi nu dt phase step between CIR samples."""
        _, unit, dataset = single_target
        record = unit.records[0]
        expected = 2 * np.pi * record.doppler_hz * unit.update_interval_s

        x = dataset.samples[:, 17, 5]
        step = np.angle(x[1:] * np.conj(x[:-1]))

        np.testing.assert_allclose(np.abs(x), np.abs(x[0]), rtol=1e-12)
        assert np.max(np.abs(np.angle(np.exp(1j * (step - expected))))) < 1e-10

    def test_delay_phase_increment(self, single_target):
        """Test a 2 pi df tau phase step along frequency."""
        _, unit, dataset = single_target
        expected = 2 * np.pi * dataset.freq_step_hz * unit.records[0].delay_s

        x = dataset.samples[4, :, 11]
        step = np.angle(x[1:] * np.conj(x[:-1]))

        assert np.max(np.abs(np.angle(np.exp(1j * (step - expected))))) < 1e-9

    def test_port_signature_is_squared_steering(self, single_target, upa):
        """Test that the per-port signature equals the one-way steering vector squared."""
        apm, _, dataset = single_target
        squared = far_field_steering(upa, FarFieldDirection(15.0, -40.0)) ** 2

        np.testing.assert_allclose(
            np.asarray(apm.weights_tx)[:, 0] * np.asarray(apm.weights_rx)[:, 0], squared, atol=1e-12
        )
        across_ports = dataset.samples[0, 0, :] / dataset.samples[0, 0, 0]
        np.testing.assert_allclose(across_ports, squared / squared[0], atol=1e-12)


class TestNoise:
    """Tests for additive noise."""

    def test_seeded(self):
        """Test that the same seed gives the same noise."""
        first = add_noise(np.zeros(1000, dtype=complex), NoiseSettings(snr_db=10.0, seed=3))
        second = add_noise(np.zeros(1000, dtype=complex), NoiseSettings(snr_db=10.0, seed=3))
        other = add_noise(np.zeros(1000, dtype=complex), NoiseSettings(snr_db=10.0, seed=4))

        np.testing.assert_array_equal(first, second)
        assert not np.array_equal(first, other)

    def test_variance(self):
        """Test that 20 dB SNR gives noise power 0.01 relative to a unit target."""
        noise = add_noise(np.zeros(50000, dtype=complex), NoiseSettings(snr_db=20.0, seed=1))

        assert np.mean(np.abs(noise) ** 2) == pytest.approx(0.01, rel=0.05)

    def test_disabled(self):
        """Test that no SNR leaves the samples untouched."""
        samples = np.ones(10, dtype=complex)

        np.testing.assert_array_equal(add_noise(samples, NoiseSettings()), np.ones(10))
