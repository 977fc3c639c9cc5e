"""
Tests for the configuration compiler.
"""

from dataclasses import replace

import numpy as np
import pytest
from isac_apm_emulator.core.constants import SPEED_OF_LIGHT, SatrAmplitude, Wavefront
from isac_apm_emulator.core.errors import InvalidArgumentError, ModeMismatchError
from isac_apm_emulator.systems.array_geometry import element_distances, far_field_steering
from isac_apm_emulator.systems.compiler import (
    compile_adtr,
    compile_satr,
    compile_snapshot,
    quantize_apm,
    scenario_geometry,
)


class TestCompileAdtr:
    """Tests for compile_adtr."""

    def test_columns_are_steering_vectors(self, drone_scenario):
        """Test that column n carries target n's steering vector on both sides."""
        scenario = drone_scenario.with_overrides(ideal=True)
        snapshot = scenario.snapshot("t1")
        geometry = scenario_geometry(scenario)

        apm, _ = compile_adtr(scenario, snapshot, geometry)

        for n, target in enumerate(snapshot.targets):
            expected = far_field_steering(geometry, target.direction)
            np.testing.assert_allclose(apm.weights_tx[:, n], expected)
            np.testing.assert_allclose(apm.weights_rx[:, n], expected)
        assert not apm.is_quantized

    def test_rts_units(self, drone_scenario):
        """Test delay, Doppler and gain loaded into each RTS unit."""
        scenario = drone_scenario.with_overrides(ideal=True)

        _, units = compile_adtr(scenario, scenario.snapshot("t1"))

        first = units[0]
        assert first.n_time == 256
        assert first.delays_s[0] == pytest.approx(2 * 50.0 / SPEED_OF_LIGHT)
        assert first.dopplers_hz[0] == pytest.approx(2 * 7.0 / scenario.wavelength_m)
        assert abs(first.gains[0]) == pytest.approx(10 ** (-5 / 20))
        # dt = 1 / (2 nu_max); the fastest target of t1 moves at 7 m/s
        assert first.update_interval_s == pytest.approx(scenario.wavelength_m / (4 * 7.0))

    def test_resource_summary(self, drone_scenario):
        """Test that RTS units scale with targets, not ports."""
        apm, units = compile_adtr(drone_scenario, drone_scenario.snapshot("t2"))

        assert apm.resource_summary() == {
            "mode": "adtr",
            "type_a_ports": 32,
            "type_b_ports": 4,
            "active_links": 128,
            "rts_units": 2,
        }
        assert len(units) == 2

    def test_six_bit_phase_error(self, drone_scenario):
        """Test that 6-bit quantization stays within half a phase step."""
        exact, _ = compile_adtr(drone_scenario.with_overrides(ideal=True), drone_scenario.snapshot("t3"))
        quantized, _ = compile_adtr(drone_scenario, drone_scenario.snapshot("t3"))

        error = np.abs(np.angle(quantized.weights_tx * np.conj(exact.weights_tx)))

        assert quantized.is_quantized
        assert error.max() <= np.pi / 64 + 1e-12
        np.testing.assert_allclose(np.abs(quantized.weights_tx), 1.0)

    def test_rejects_satr(self, satr_scenario):
        """Test that a SATR scenario cannot be compiled as ADTR."""
        with pytest.raises(ModeMismatchError):
            compile_adtr(satr_scenario, satr_scenario.snapshots[0])

    def test_range_migration(self, drone_scenario):
        """Test that approaching targets have shrinking delays when migration is on."""
        scenario = replace(
            drone_scenario,
            sweep=replace(drone_scenario.sweep, range_migration=True, n_time=8),
        )

        _, units = compile_adtr(scenario, scenario.snapshot("t1"))

        assert np.all(np.diff(units[0].delays_s) < 0)
        assert units[0].delays_s[0] == pytest.approx(2 * 50.0 / SPEED_OF_LIGHT)


class TestCompileSatr:
    """Tests for compile_satr."""

    def test_structural_zeros(self, satr_scenario):
        """Test that Tx weights sit on Tx ports only and Rx weights on Rx ports only."""
        apm, _ = compile_satr(satr_scenario, satr_scenario.snapshots[0])

        assert apm.structural_zeros_hold()
        assert np.all(apm.weights_tx[8:] == 0)
        assert np.all(apm.weights_rx[:8] == 0)
        np.testing.assert_allclose(np.abs(apm.weights_tx[:8]), 1.0)

    def test_resource_summary(self, satr_scenario):
        """Test the SATR resource use of one target on a 16-element array."""
        apm, units = compile_snapshot(satr_scenario, satr_scenario.snapshots[0])

        assert apm.resource_summary() == {
            "mode": "satr",
            "type_a_ports": 16,
            "type_b_ports": 2,
            "active_links": 16,
            "rts_units": 1,
        }
        assert len(units) == 1

    def test_far_wavefront_differs(self, satr_scenario):
        """Test that the plane-wave approximation loads different phases."""
        snapshot = satr_scenario.snapshots[0]
        near, _ = compile_satr(satr_scenario, snapshot, wavefront=Wavefront.NEAR)
        far, _ = compile_satr(satr_scenario, snapshot, wavefront=Wavefront.FAR)

        assert not np.allclose(near.weights_tx, far.weights_tx)
        np.testing.assert_allclose(np.abs(far.weights_tx[:8]), 1.0)

    def test_spherical_amplitude(self, satr_scenario):
        """Test that spherical spreading scales each port by d0 / d_k."""
        snapshot = satr_scenario.snapshots[0]
        geometry = scenario_geometry(satr_scenario)
        point = snapshot.targets[0].direction

        apm, _ = compile_satr(satr_scenario, snapshot, geometry, amplitude=SatrAmplitude.SPHERICAL)

        expected = point.distance / element_distances(geometry, point, geometry.tx_mask)
        np.testing.assert_allclose(np.abs(apm.weights_tx[:8, 0]), expected)

    def test_rejects_adtr(self, drone_scenario):
        """Test that an ADTR scenario cannot be compiled as SATR."""
        with pytest.raises(ModeMismatchError):
            compile_satr(drone_scenario, drone_scenario.snapshots[0])


class TestQuantizeApm:
    """Tests for quantize_apm."""

    def test_zeros_stay_zero(self, satr_scenario):
        """Test that structural zeros survive quantization."""
        apm, _ = compile_satr(satr_scenario, satr_scenario.snapshots[0])

        quantized = quantize_apm(apm, 3, 0.5)

        assert quantized.structural_zeros_hold()
        assert quantized.active_links() == apm.active_links()

    def test_phase_lattice(self, satr_scenario):
        """Test that quantized phases are multiples of 2pi / 2^bits."""
        apm, _ = compile_satr(satr_scenario, satr_scenario.snapshots[0])
        step = 2 * np.pi / 2**4

        quantized = quantize_apm(apm, 4, 0.0)

        phases = np.angle(quantized.weights_tx[:8, 0]) / step
        np.testing.assert_allclose(phases, np.round(phases), atol=1e-9)

    @pytest.mark.parametrize("bits,step", [(0, 0.5), (6, -0.5)])
    def test_invalid(self, satr_scenario, bits, step):
        """Test that invalid lattices are rejected."""
        apm, _ = compile_satr(satr_scenario, satr_scenario.snapshots[0])
        with pytest.raises(InvalidArgumentError):
            quantize_apm(apm, bits, step)
