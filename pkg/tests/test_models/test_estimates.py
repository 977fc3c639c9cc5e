"""
Tests for dataset, estimate and report models.
"""

import numpy as np
import pytest
from isac_apm_emulator.core.constants import CheckStatus, SensingMode
from isac_apm_emulator.core.errors import InvalidArgumentError, ReportSchemaError
from isac_apm_emulator.models.dataset import CfrDataset
from isac_apm_emulator.models.estimates import DetectedTarget, DetectionList, EstimationSettings
from isac_apm_emulator.models.report import ParameterCheck, RunReport


def make_dataset(n_time=2, n_freq=3, ports=4, metadata=None):
    return CfrDataset(
        mode=SensingMode.ADTR,
        time_s=np.arange(n_time) * 1e-3,
        frequency_hz=3.5e9 + np.linspace(-20e6, 20e6, n_freq),
        port_indices=(np.arange(ports, dtype=float),),
        samples=np.zeros((n_time, n_freq, ports), dtype=complex),
        carrier_hz=3.5e9,
        metadata=metadata or {},
    )


def make_check(parameter, error, tolerance=1.0, status=CheckStatus.PASS, snapshot="t1"):
    return ParameterCheck(
        snapshot=snapshot,
        target_index=0,
        parameter=parameter,
        target=10.0,
        estimate=None if error is None else 10.0 + error,
        error=error,
        tolerance=tolerance,
        status=status,
    )


class TestCfrDataset:
    """Tests for CfrDataset."""

    def test_axes(self):
        """Test the derived axis quantities."""
        dataset = make_dataset(metadata={"label": "t2"})

        assert dataset.n_time == 2
        assert dataset.n_freq == 3
        assert dataset.port_count == 4
        assert dataset.freq_step_hz == pytest.approx(20e6)
        assert dataset.update_interval_s == pytest.approx(1e-3)
        np.testing.assert_allclose(dataset.baseband_hz, [-20e6, 0.0, 20e6])
        assert dataset.label == "t2"

    def test_static_interval_from_metadata(self):
        """Test that a single-sample dataset reads dt from its metadata."""
        dataset = make_dataset(n_time=1, metadata={"update_interval_s": 5e-4})

        assert dataset.update_interval_s == 5e-4

    def test_shape_mismatch(self):
        """Test that the tensor must match the axis grids."""
        with pytest.raises(InvalidArgumentError):
            CfrDataset(
                mode=SensingMode.ADTR,
                time_s=np.zeros(1),
                frequency_hz=np.zeros(3),
                port_indices=(np.zeros(4),),
                samples=np.zeros((1, 4, 3), dtype=complex),
            )

    def test_satr_needs_two_port_axes(self):
        """Test that SATR datasets carry Rx and Tx port axes."""
        with pytest.raises(InvalidArgumentError):
            CfrDataset(
                mode=SensingMode.SATR,
                time_s=np.zeros(1),
                frequency_hz=np.zeros(3),
                port_indices=(np.zeros(4),),
                samples=np.zeros((1, 4, 3), dtype=complex),
            )


class TestDetections:
    """Tests for detected targets and settings."""

    def test_to_dict_omits_unresolved(self):
        """Test that unresolved fields are left out."""
        data = DetectedTarget(power_db=-3.0, range_m=12.5).to_dict()

        assert data == {"range_m": 12.5, "power_db": -3.0}
        assert DetectedTarget.from_dict(data) == DetectedTarget(power_db=-3.0, range_m=12.5)

    def test_truncated(self):
        """Test that fewer peaks than requested marks the list truncated."""
        found = DetectionList((DetectedTarget(0.0),), requested=2)

        assert found.truncated
        assert len(found) == 1
        assert not DetectionList((DetectedTarget(0.0),), requested=1).truncated

    @pytest.mark.parametrize("kwargs", [{"pad_time": 0}, {"pad_freq": 0}, {"guard_bins": -1}])
    def test_invalid_settings(self, kwargs):
        """Test that invalid estimation settings are rejected."""
        with pytest.raises(InvalidArgumentError):
            EstimationSettings(**kwargs)

    def test_search_grids(self):
        """Test the default search grids."""
        settings = EstimationSettings()

        elevation = settings.elevation_grid()
        angle = settings.satr_angle_grid()
        ranges = settings.satr_range_grid()

        assert len(elevation) == 181
        assert elevation[0] == -90.0 and elevation[-1] == 90.0
        assert len(angle) == 721
        assert 30.0 in angle
        assert len(ranges) == 276
        assert ranges[-1] == pytest.approx(6.0)


class TestRunReport:
    """Tests for RunReport."""

    def test_counts(self):
        """Test the pass/fail/not-estimable tallies."""
        report = RunReport("demo", "adtr", checks=[
            make_check("range_m", 0.5),
            make_check("power_db", 2.0, status=CheckStatus.FAIL),
            make_check("velocity_mps", None, status=CheckStatus.NOT_ESTIMABLE),
        ])

        assert report.pass_count == 1
        assert report.fail_count == 1
        assert report.not_estimable_count == 1
        assert not report.all_passed
        assert report.worst_power_error_db == 2.0
        assert report.worst_check().parameter == "power_db"

    def test_worst_check_uses_tolerance_ratio(self):
        """Test that the worst row is chosen relative to its tolerance."""
        report = RunReport("demo", "adtr", checks=[
            make_check("range_m", 1.5, tolerance=1.9),
            make_check("azimuth_deg", 0.9, tolerance=1.0),
        ])

        assert report.worst_check().parameter == "azimuth_deg"

    def test_round_trip(self):
        """Test that a report survives to_dict / from_dict."""
        report = RunReport(
            "demo", "satr",
            checks=[make_check("range_m", 0.01, snapshot="s1")],
            runtime_s=1.25,
            provenance={"digest": "abc"},
            snapshots=["s1"],
        )

        restored = RunReport.from_dict(report.to_dict())

        assert restored == report

    def test_schema_version(self):
        """Test that an unknown schema version is refused."""
        data = RunReport("demo", "adtr").to_dict()
        data["schema_version"] = 99

        with pytest.raises(ReportSchemaError):
            RunReport.from_dict(data)

    def test_malformed(self):
        """Test that a report without checks is malformed."""
        data = RunReport("demo", "adtr").to_dict()
        del data["checks"]

        with pytest.raises(ReportSchemaError):
            RunReport.from_dict(data)
