"""
Tests for the CFR dataset codec.
"""

import json
import struct

import numpy as np
import pytest
from isac_apm_emulator.core.constants import SensingMode
from isac_apm_emulator.core.errors import DatasetFormatError
from isac_apm_emulator.data.dataset_io import (
    dataset_file_size,
    decode_dataset,
    encode_dataset,
    read_dataset,
    write_dataset,
)
from isac_apm_emulator.services.pipeline import synthesize_snapshot


@pytest.fixture
def adtr_dataset(make_adtr_scenario):
    """A small two-target ADTR dataset."""
    scenario = make_adtr_scenario(
        [(30.0, 2.0, 10.0, 20.0, 0.0), (60.0, -1.0, -5.0, 0.0, -10.0)],
        n_time=4, n_freq=8, rows=2, cols=2,
    )
    return synthesize_snapshot(scenario, scenario.snapshots[0], workers=1)[2]


@pytest.fixture
def satr_dataset(make_satr_scenario):
    """A small SATR dataset on the split ULA."""
    scenario = make_satr_scenario([(3.0, 30.0)], n_freq=5)
    return synthesize_snapshot(scenario, scenario.snapshots[0], workers=1)[2]


def assert_same(decoded, original):
    assert decoded.mode is original.mode
    np.testing.assert_array_equal(decoded.samples, original.samples)
    np.testing.assert_array_equal(decoded.time_s, original.time_s)
    np.testing.assert_array_equal(decoded.frequency_hz, original.frequency_hz)
    for got, expected in zip(decoded.port_indices, original.port_indices):
        np.testing.assert_array_equal(got, expected)
    assert decoded.carrier_hz == original.carrier_hz
    assert decoded.label == original.label


class TestCodec:
    """Tests for encode_dataset / decode_dataset."""

    @pytest.mark.parametrize("fixture", ["adtr_dataset", "satr_dataset"])
    def test_round_trip(self, fixture, request):
        """Test that decoding restores axes, samples and metadata."""
        dataset = request.getfixturevalue(fixture)

        assert_same(decode_dataset(encode_dataset(dataset)), dataset)

    def test_header(self, adtr_dataset):
        """Test the magic, version, mode and axis count fields."""
        data = encode_dataset(adtr_dataset)
        magic, version, mode, axes = struct.unpack_from("<8sIBB", data)

        assert magic == b"ISACCFR1"
        assert version == 1
        assert mode == 0
        assert axes == 3

    def test_file_size(self, adtr_dataset, satr_dataset):
        """Test that the size formula matches the encoder."""
        for dataset in (adtr_dataset, satr_dataset):
            data = encode_dataset(dataset)
            meta_len = len(data) - dataset_file_size(dataset.samples.shape, 0)
            (stored,) = struct.unpack_from("<I", data, len(data) - meta_len - 4)

            assert stored == meta_len
            assert dataset_file_size(dataset.samples.shape, meta_len) == len(data)

    def test_file_round_trip(self, tmp_path, satr_dataset):
        """Test writing to and reading from disk."""
        path = write_dataset(satr_dataset, tmp_path / "out" / "s1.cfr")

        decoded = read_dataset(path)

        assert decoded.mode is SensingMode.SATR
        assert_same(decoded, satr_dataset)


class TestMalformed:
    """Tests that malformed files fail with the byte offset."""

    def test_bad_magic(self, adtr_dataset):
        """Test a corrupted magic number."""
        data = b"XSACCFR1" + encode_dataset(adtr_dataset)[8:]

        with pytest.raises(DatasetFormatError) as exc_info:
            decode_dataset(data)

        assert exc_info.value.offset == 0

    def test_bad_version(self, adtr_dataset):
        """Test an unsupported format version."""
        data = encode_dataset(adtr_dataset)
        data = data[:8] + struct.pack("<I", 9) + data[12:]

        with pytest.raises(DatasetFormatError) as exc_info:
            decode_dataset(data)

        assert exc_info.value.offset == 8
        assert exc_info.value.actual == 9

    def test_unknown_mode(self, adtr_dataset):
        """Test a mode code other than ADTR or SATR."""
        data = encode_dataset(adtr_dataset)
        data = data[:12] + bytes([7]) + data[13:]

        with pytest.raises(DatasetFormatError) as exc_info:
            decode_dataset(data)

        assert exc_info.value.offset == 12

    def test_axis_count(self, adtr_dataset):
        """Test an axis count that does not fit the mode."""
        data = encode_dataset(adtr_dataset)
        data = data[:13] + bytes([4]) + data[14:]

        with pytest.raises(DatasetFormatError) as exc_info:
            decode_dataset(data)

        assert exc_info.value.offset == 13

    def test_truncated(self, adtr_dataset):
        """Test a file cut inside the axis grids."""
        data = encode_dataset(adtr_dataset)

        with pytest.raises(DatasetFormatError, match="truncated"):
            decode_dataset(data[:100])

    def test_short_header(self):
        """Test a file shorter than the fixed header."""
        with pytest.raises(DatasetFormatError) as exc_info:
            decode_dataset(b"ISAC")

        assert exc_info.value.offset == 0

    def test_trailing_bytes(self, adtr_dataset):
        """Test garbage after the metadata block."""
        data = encode_dataset(adtr_dataset)

        with pytest.raises(DatasetFormatError) as exc_info:
            decode_dataset(data + b"\x00")

        assert exc_info.value.offset == len(data)

    def test_sample_count_beyond_file(self, adtr_dataset):
        """Test that an inflated axis length is a truncation, not an overflow."""
        data = encode_dataset(adtr_dataset)
        grids_end = 26 + 8 * (4 + 8 + 4)
        extra = 8 * (1000 - 4)
        data = (
            data[:22] + struct.pack("<I", 1000) + data[26:grids_end] + bytes(extra) + data[grids_end:]
        )

        with pytest.raises(DatasetFormatError, match="truncated samples") as exc_info:
            decode_dataset(data)

        assert exc_info.value.offset == grids_end + extra

    def test_huge_shape_size(self):
        """Test that the size formula stays exact for shapes beyond int64."""
        shape = (2**32 - 1,) * 3

        n = 2**32 - 1

        assert dataset_file_size(shape, 0) == 14 + 12 + 8 * 3 * n + 16 * n**3 + 4

    def test_non_uniform_frequency_grid(self, adtr_dataset):
        """Test that a bent frequency grid is rejected at the offending node."""
        data = bytearray(encode_dataset(adtr_dataset))
        node = 26 + 8 * 4 + 8 * 7
        (value,) = struct.unpack_from("<d", data, node)
        struct.pack_into("<d", data, node, value + 1000.0)

        with pytest.raises(DatasetFormatError, match="not uniform") as exc_info:
            decode_dataset(bytes(data))

        assert exc_info.value.offset == node

    def test_carrier_not_a_number(self, adtr_dataset):
        """Test that a non-numeric carrier in the metadata is a format error."""
        data = encode_dataset(adtr_dataset)
        meta_len = len(data) - dataset_file_size(adtr_dataset.samples.shape, 0)
        metadata = json.loads(data[-meta_len:])
        metadata["carrier_hz"] = "3.5 GHz"
        blob = json.dumps(metadata).encode("utf-8")
        data = data[: -meta_len - 4] + struct.pack("<I", len(blob)) + blob

        with pytest.raises(DatasetFormatError, match="carrier_hz") as exc_info:
            decode_dataset(data)

        assert exc_info.value.offset == len(data) - len(blob)
