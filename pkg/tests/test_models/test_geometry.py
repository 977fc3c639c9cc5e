"""
Tests for the geometry models.
"""

import math

import numpy as np
import pytest
from isac_apm_emulator.core.constants import ArrayLayout
from isac_apm_emulator.core.errors import InvalidArgumentError
from isac_apm_emulator.models.geometry import ArrayGeometry, FarFieldDirection, NearFieldPoint


class TestFarFieldDirection:
    """Tests for plane-wave directions."""

    def test_boresight_unit_vector(self):
        """Test that (0, 0) points along +y."""
        np.testing.assert_allclose(FarFieldDirection(0.0, 0.0).unit_vector, [0.0, 1.0, 0.0])

    def test_unit_vector_components(self):
        """Test u = (cos el sin az, cos el cos az, sin el)."""
        u = FarFieldDirection(30.0, 45.0).unit_vector
        el, az = math.radians(30.0), math.radians(45.0)

        np.testing.assert_allclose(
            u, [math.cos(el) * math.sin(az), math.cos(el) * math.cos(az), math.sin(el)]
        )
        assert np.linalg.norm(u) == pytest.approx(1.0)

    def test_mirrored(self):
        """Test the mirrored direction."""
        assert FarFieldDirection(10.0, -20.0).mirrored() == FarFieldDirection(-10.0, 20.0)

    @pytest.mark.parametrize("elevation,azimuth", [(91.0, 0.0), (0.0, 181.0), (float("nan"), 0.0)])
    def test_invalid(self, elevation, azimuth):
        """Test that out-of-range angles are rejected."""
        with pytest.raises(InvalidArgumentError):
            FarFieldDirection(elevation, azimuth)


class TestNearFieldPoint:
    """Tests for near-field positions."""

    def test_from_polar(self):
        """Test the in-plane polar constructor."""
        point = NearFieldPoint.from_polar(3.0, 30.0)

        assert point.x_m == pytest.approx(1.5)
        assert point.y_m == pytest.approx(3.0 * math.sqrt(3.0) / 2.0)
        assert point.z_m == 0.0
        assert point.distance == pytest.approx(3.0)
        assert point.angle_deg == pytest.approx(30.0)

    def test_negative_angle(self):
        """Test that negative angles lie toward -x."""
        point = NearFieldPoint.from_polar(2.0, -45.0)

        assert point.x_m < 0
        assert point.angle_deg == pytest.approx(-45.0)

    def test_origin_rejected(self):
        """Test that the phase center itself is not a valid target."""
        with pytest.raises(InvalidArgumentError):
            NearFieldPoint(0.0, 0.0, 0.0)

    def test_dict_form(self):
        """Test the position_m serialization."""
        point = NearFieldPoint(1.0, 2.0, 0.5)

        assert point.to_dict() == {"position_m": [1.0, 2.0, 0.5]}
        assert NearFieldPoint.from_dict(point.to_dict()) == point


class TestArrayGeometry:
    """Tests for the ArrayGeometry invariants."""

    @staticmethod
    def make(elements, tx_mask, rx_mask):
        return ArrayGeometry(
            elements=np.asarray(elements, dtype=float),
            wavelength=0.1,
            layout=ArrayLayout.ULA,
            rows=1,
            cols=len(elements),
            spacing_wl=0.5,
            tx_mask=np.asarray(tx_mask),
            rx_mask=np.asarray(rx_mask),
        )

    LINE = [[-0.075, 0.0, 0.0], [-0.025, 0.0, 0.0], [0.025, 0.0, 0.0], [0.075, 0.0, 0.0]]

    def test_duplex_and_split_accepted(self):
        """Test the two valid mask layouts."""
        duplex = self.make(self.LINE, [True] * 4, [True] * 4)
        split = self.make(self.LINE, [True, True, False, False], [False, False, True, True])

        assert not duplex.is_split
        assert split.is_split

    @pytest.mark.parametrize("tx,rx", [
        ([True, True, True, False], [False, False, True, True]),
        ([True, False, False, False], [False, False, True, True]),
        ([True, True, True, True], [False, False, True, True]),
    ])
    def test_bad_masks(self, tx, rx):
        """Test overlapping and non-covering Tx/Rx masks."""
        with pytest.raises(InvalidArgumentError):
            self.make(self.LINE, tx, rx)

    def test_phase_center_off_origin(self):
        """Test that elements must be centered on the origin."""
        shifted = [[x + 0.01, y, z] for x, y, z in self.LINE]

        with pytest.raises(InvalidArgumentError, match="phase center"):
            self.make(shifted, [True] * 4, [True] * 4)
