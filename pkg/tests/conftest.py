"""
Pytest configuration and shared fixtures.
"""

from typing import Callable, Optional, Sequence

import pytest
from isac_apm_emulator.core.constants import (
    SPEED_OF_LIGHT,
    ArrayLayout,
    SensingMode,
)
from isac_apm_emulator.data.scenario_store import load_bundled_scenario
from isac_apm_emulator.models.geometry import ArrayGeometry, FarFieldDirection, NearFieldPoint
from isac_apm_emulator.models.scenario import (
    ArraySpec,
    QuantizationSettings,
    SensingScenario,
    Snapshot,
    SweepSettings,
    TargetState,
)
from isac_apm_emulator.systems.array_geometry import build_split_ula, build_upa

CARRIER_HZ = 3.5e9
BANDWIDTH_HZ = 40e6
WAVELENGTH_M = SPEED_OF_LIGHT / CARRIER_HZ

# Small sweep used by the fast pipeline tests: on-bin targets are exact here
SMALL_N_TIME = 32
SMALL_N_FREQ = 64
SMALL_INTERVAL_S = 1e-3


def pytest_addoption(parser):
    parser.addoption(
        "--run-fullscale", action="store_true", default=False,
        help="run the full measurement-size smoke test",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-fullscale"):
        return
    skip = pytest.mark.skip(reason="needs --run-fullscale")
    for item in items:
        if "fullscale" in item.keywords:
            item.add_marker(skip)


def on_bin_range_m(delay_bin: int, n_freq: int = SMALL_N_FREQ, pad: int = 1) -> float:
    """Range that lands exactly on a (padded) delay bin of the small sweep."""
    freq_step = BANDWIDTH_HZ / (n_freq - 1)
    return SPEED_OF_LIGHT * delay_bin / (2.0 * n_freq * pad * freq_step)


def on_bin_velocity_mps(doppler_bin: int, n_time: int = SMALL_N_TIME, pad: int = 1) -> float:
    """Velocity that lands exactly on a (padded) Doppler bin of the small sweep."""
    return WAVELENGTH_M * doppler_bin / (2.0 * n_time * pad * SMALL_INTERVAL_S)


@pytest.fixture
def range_on_bin() -> Callable[..., float]:
    """on_bin_range_m as a fixture."""
    return on_bin_range_m


@pytest.fixture
def velocity_on_bin() -> Callable[..., float]:
    """on_bin_velocity_mps as a fixture."""
    return on_bin_velocity_mps


@pytest.fixture
def upa() -> ArrayGeometry:
    """The 4 x 8 half-wavelength UPA at 3.5 GHz."""
    return build_upa(4, 8, 0.5, CARRIER_HZ)


@pytest.fixture
def split_ula() -> ArrayGeometry:
    """A 16-element ULA split into 8 Tx and 8 Rx elements."""
    return build_split_ula(16, 0.5, CARRIER_HZ, 8)


@pytest.fixture
def drone_scenario() -> SensingScenario:
    """The bundled two-drone ADTR scenario (scaled sizes)."""
    return load_bundled_scenario("drone_pair_adtr")


@pytest.fixture
def satr_scenario() -> SensingScenario:
    """The bundled single near-field SATR target."""
    return load_bundled_scenario("near_field_satr")


@pytest.fixture
def make_adtr_scenario() -> Callable[..., SensingScenario]:
    """
    Factory for small ADTR scenarios with one snapshot "s1".

    Targets are (range_m, velocity_mps, elevation_deg, azimuth_deg, gain_db).
    """
    def make(
        targets: Sequence[tuple[float, float, float, float, float]],
        n_time: int = SMALL_N_TIME,
        n_freq: int = SMALL_N_FREQ,
        interval_s: Optional[float] = SMALL_INTERVAL_S,
        ideal: bool = True,
        rows: int = 4,
        cols: int = 8,
    ) -> SensingScenario:
        return SensingScenario(
            name="small_adtr",
            mode=SensingMode.ADTR,
            array=ArraySpec(layout=ArrayLayout.UPA, spacing_wl=0.5, rows=rows, cols=cols),
            sweep=SweepSettings(
                carrier_hz=CARRIER_HZ,
                bandwidth_hz=BANDWIDTH_HZ,
                n_freq=n_freq,
                n_time=n_time,
                update_interval_s=interval_s,
            ),
            snapshots=(Snapshot("s1", tuple(
                TargetState(
                    range_m=r,
                    radial_velocity_mps=v,
                    direction=FarFieldDirection(el, az),
                    gain_db=g,
                )
                for r, v, el, az, g in targets
            )),),
            quantization=QuantizationSettings(ideal=ideal),
        )
    return make


@pytest.fixture
def make_satr_scenario() -> Callable[..., SensingScenario]:
    """Factory for SATR scenarios on the 16/8 split ULA; targets are (range_m, angle_deg)."""
    def make(
        targets: Sequence[tuple[float, float]],
        n_freq: int = 201,
        ideal: bool = True,
    ) -> SensingScenario:
        return SensingScenario(
            name="small_satr",
            mode=SensingMode.SATR,
            array=ArraySpec(layout=ArrayLayout.ULA, spacing_wl=0.5, rows=1, cols=16, tx_count=8),
            sweep=SweepSettings(carrier_hz=CARRIER_HZ, bandwidth_hz=BANDWIDTH_HZ, n_freq=n_freq),
            snapshots=(Snapshot("s1", tuple(
                TargetState(
                    range_m=r,
                    direction=NearFieldPoint.from_polar(r, a),
                    gain_db=0.0,
                )
                for r, a in targets
            )),),
            quantization=QuantizationSettings(ideal=ideal),
        )
    return make
