"""
Scenario models - declarative description of what is emulated.

A SensingScenario holds the array parameters, the sweep settings of the
measurement rig, the APM quantization settings and one or more snapshots of
point targets. Models are immutable; conversions to physical delay/Doppler/
gain live in services.physics, invariant checks in services.validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Any, Optional, Union

from ..core.constants import (
    DEFAULT_AMP_STEP_DB,
    DEFAULT_PHASE_BITS,
    SCENARIO_SCHEMA_VERSION,
    SPEED_OF_LIGHT,
    ArrayLayout,
    SatrAmplitude,
    SensingMode,
    Wavefront,
)
from ..core.errors import InvalidArgumentError, ScenarioParseError
from .geometry import FarFieldDirection, NearFieldPoint

TargetDirection = Union[FarFieldDirection, NearFieldPoint]


# =============================================================================
# Parsing helpers
# =============================================================================

def _require(data: Any, key: str, path: str) -> Any:
    """Fetch a mandatory key or raise a parse error naming its location."""
    if not isinstance(data, dict):
        raise ScenarioParseError("expected an object", key_path=path)
    if key not in data:
        raise ScenarioParseError(f"missing key '{key}'", key_path=path)
    return data[key]


def _section(data: Any, path: str) -> dict:
    """Check that an optional settings block is an object."""
    if not isinstance(data, dict):
        raise ScenarioParseError(f"expected an object, got {data!r}", key_path=path)
    return data


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioParseError(f"expected a number, got {value!r}", key_path=path)
    return float(value)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioParseError(f"expected an integer, got {value!r}", key_path=path)
    return value


def _enum(enum_cls: type, value: Any, path: str) -> Any:
    try:
        return enum_cls(value)
    except ValueError:
        allowed = ", ".join(repr(m.value) for m in enum_cls)
        raise ScenarioParseError(
            f"unknown value {value!r} (allowed: {allowed})", key_path=path
        ) from None


# =============================================================================
# Targets and snapshots
# =============================================================================

@dataclass(frozen=True)
class TargetState:
    """
    One point target during a snapshot.

    Attributes:
        range_m: Distance from the phase center
        radial_velocity_mps: Positive = approaching the base station
        direction: FarFieldDirection (ADTR) or NearFieldPoint (SATR)
        gain_db: Normalized two-way channel gain (0 dB = scenario reference)
        rcs_m2: Radar cross-section, converted with the radar equation
            (exactly one of gain_db / rcs_m2 is set)
    """
    range_m: float
    direction: TargetDirection
    radial_velocity_mps: float = 0.0
    gain_db: Optional[float] = None
    rcs_m2: Optional[float] = None

    @property
    def is_near_field(self) -> bool:
        """True when the direction is a near-field point."""
        return isinstance(self.direction, NearFieldPoint)

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        data: dict[str, Any] = {
            "range_m": self.range_m,
            "radial_velocity_mps": self.radial_velocity_mps,
            "direction": self.direction.to_dict(),
        }
        if self.gain_db is not None:
            data["gain_db"] = self.gain_db
        if self.rcs_m2 is not None:
            data["rcs_m2"] = self.rcs_m2
        return data

    @classmethod
    def from_dict(cls, data: dict, path: str = "target") -> TargetState:
        """Deserialize from dictionary."""
        range_m = _number(_require(data, "range_m", path), f"{path}.range_m")
        velocity = _number(data.get("radial_velocity_mps", 0.0), f"{path}.radial_velocity_mps")
        raw_direction = _require(data, "direction", path)
        direction: TargetDirection
        try:
            if isinstance(raw_direction, dict) and "position_m" in raw_direction:
                direction = NearFieldPoint.from_dict(raw_direction)
            else:
                direction = FarFieldDirection.from_dict(raw_direction)
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, InvalidArgumentError):
                message = str(e)
            else:
                message = f"malformed direction: {e!r}"
            raise ScenarioParseError(message, key_path=f"{path}.direction") from None

        gain_db = data.get("gain_db")
        rcs_m2 = data.get("rcs_m2")
        return cls(
            range_m=range_m,
            radial_velocity_mps=velocity,
            direction=direction,
            gain_db=None if gain_db is None else _number(gain_db, f"{path}.gain_db"),
            rcs_m2=None if rcs_m2 is None else _number(rcs_m2, f"{path}.rcs_m2"),
        )

    def __str__(self) -> str:
        level = f"{self.gain_db:g} dB" if self.gain_db is not None else f"{self.rcs_m2:g} m^2"
        return f"{self.range_m:g} m, {self.radial_velocity_mps:g} m/s, {self.direction}, {level}"


@dataclass(frozen=True)
class Snapshot:
    """A labelled set of targets observed at one channel snapshot."""
    label: str
    targets: tuple[TargetState, ...] = ()

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        return {"label": self.label, "targets": [t.to_dict() for t in self.targets]}

    @classmethod
    def from_dict(cls, data: dict, path: str = "snapshot") -> Snapshot:
        """Deserialize from dictionary."""
        label = _require(data, "label", path)
        if not isinstance(label, str):
            raise ScenarioParseError("label must be text", key_path=f"{path}.label")
        raw_targets = _require(data, "targets", path)
        if not isinstance(raw_targets, list):
            raise ScenarioParseError("targets must be a list", key_path=f"{path}.targets")
        targets = tuple(
            TargetState.from_dict(t, f"{path}.targets[{i}]") for i, t in enumerate(raw_targets)
        )
        return cls(label=label, targets=targets)


# =============================================================================
# Settings blocks
# =============================================================================

@dataclass(frozen=True)
class ArraySpec:
    """
    Array parameters consumed by systems.array_geometry.

    UPA uses rows/cols; a split ULA uses count/tx_count.
    """
    layout: ArrayLayout
    spacing_wl: float = 0.5
    rows: int = 1
    cols: int = 1
    tx_count: Optional[int] = None

    @property
    def element_count(self) -> int:
        """Total number of elements."""
        return self.rows * self.cols

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        if self.layout is ArrayLayout.UPA:
            return {
                "layout": self.layout.value,
                "rows": self.rows,
                "cols": self.cols,
                "spacing_wl": self.spacing_wl,
            }
        data: dict[str, Any] = {
            "layout": self.layout.value,
            "count": self.cols,
            "spacing_wl": self.spacing_wl,
        }
        if self.tx_count is not None:
            data["tx_count"] = self.tx_count
        return data

    @classmethod
    def from_dict(cls, data: dict, path: str = "array") -> ArraySpec:
        """Deserialize from dictionary."""
        layout = _enum(ArrayLayout, _require(data, "layout", path), f"{path}.layout")
        spacing = _number(_require(data, "spacing_wl", path), f"{path}.spacing_wl")
        if layout is ArrayLayout.UPA:
            return cls(
                layout=layout,
                spacing_wl=spacing,
                rows=_integer(_require(data, "rows", path), f"{path}.rows"),
                cols=_integer(_require(data, "cols", path), f"{path}.cols"),
            )
        tx_count = data.get("tx_count")
        return cls(
            layout=layout,
            spacing_wl=spacing,
            rows=1,
            cols=_integer(_require(data, "count", path), f"{path}.count"),
            tx_count=None if tx_count is None else _integer(tx_count, f"{path}.tx_count"),
        )


@dataclass(frozen=True)
class SweepSettings:
    """
    Measurement sweep of the emulated base station.

    Attributes:
        carrier_hz: Center frequency
        bandwidth_hz: Swept bandwidth
        n_freq: Frequency points N_f
        n_time: CIR samples per snapshot N_t (1 for a static capture)
        update_interval_s: Fixed CIR update interval; None = 1/(2 nu_max)
        range_migration: Let range drift linearly with velocity inside a snapshot
    """
    carrier_hz: float
    bandwidth_hz: float
    n_freq: int
    n_time: int = 1
    update_interval_s: Optional[float] = None
    range_migration: bool = False

    @property
    def wavelength_m(self) -> float:
        """Carrier wavelength."""
        return SPEED_OF_LIGHT / self.carrier_hz

    @property
    def freq_step_hz(self) -> float:
        """Frequency step between adjacent sweep points."""
        if self.n_freq < 2:
            return math.inf
        return self.bandwidth_hz / (self.n_freq - 1)

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        data: dict[str, Any] = {
            "carrier_hz": self.carrier_hz,
            "bandwidth_hz": self.bandwidth_hz,
            "n_freq": self.n_freq,
            "n_time": self.n_time,
        }
        if self.update_interval_s is not None:
            data["update_interval_s"] = self.update_interval_s
        if self.range_migration:
            data["range_migration"] = True
        return data

    @classmethod
    def from_dict(cls, data: dict, path: str = "sweep") -> SweepSettings:
        """Deserialize from dictionary."""
        data = _section(data, path)
        interval = data.get("update_interval_s")
        migration = data.get("range_migration", False)
        if not isinstance(migration, bool):
            raise ScenarioParseError("expected true/false", key_path=f"{path}.range_migration")
        return cls(
            carrier_hz=_number(_require(data, "carrier_hz", path), f"{path}.carrier_hz"),
            bandwidth_hz=_number(_require(data, "bandwidth_hz", path), f"{path}.bandwidth_hz"),
            n_freq=_integer(_require(data, "n_freq", path), f"{path}.n_freq"),
            n_time=_integer(data.get("n_time", 1), f"{path}.n_time"),
            update_interval_s=None if interval is None else _number(
                interval, f"{path}.update_interval_s"
            ),
            range_migration=migration,
        )


@dataclass(frozen=True)
class QuantizationSettings:
    """APM weight quantization (ideal = no quantization)."""
    ideal: bool = False
    phase_bits: int = DEFAULT_PHASE_BITS
    amp_step_db: float = DEFAULT_AMP_STEP_DB

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        return {
            "ideal": self.ideal,
            "phase_bits": self.phase_bits,
            "amp_step_db": self.amp_step_db,
        }

    @classmethod
    def from_dict(cls, data: dict, path: str = "quantization") -> QuantizationSettings:
        """Deserialize from dictionary."""
        data = _section(data, path)
        ideal = data.get("ideal", False)
        if not isinstance(ideal, bool):
            raise ScenarioParseError("expected true/false", key_path=f"{path}.ideal")
        return cls(
            ideal=ideal,
            phase_bits=_integer(data.get("phase_bits", DEFAULT_PHASE_BITS), f"{path}.phase_bits"),
            amp_step_db=_number(data.get("amp_step_db", DEFAULT_AMP_STEP_DB), f"{path}.amp_step_db"),
        )

    def describe(self) -> str:
        """Short human-readable form."""
        if self.ideal:
            return "ideal"
        return f"{self.phase_bits}-bit phase, {self.amp_step_db:g} dB amplitude step"


@dataclass(frozen=True)
class NoiseSettings:
    """Optional additive complex white Gaussian noise on synthesized CFRs."""
    snr_db: Optional[float] = None
    seed: int = 0

    @property
    def enabled(self) -> bool:
        """True when noise is added."""
        return self.snr_db is not None

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        return {"snr_db": self.snr_db, "seed": self.seed}

    @classmethod
    def from_dict(cls, data: dict, path: str = "noise") -> NoiseSettings:
        """Deserialize from dictionary."""
        data = _section(data, path)
        snr = data.get("snr_db")
        return cls(
            snr_db=None if snr is None else _number(snr, f"{path}.snr_db"),
            seed=_integer(data.get("seed", 0), f"{path}.seed"),
        )


@dataclass(frozen=True)
class EmulationSettings:
    """How the APM network is configured (used in SATR mode)."""
    wavefront: Wavefront = Wavefront.NEAR
    satr_amplitude: SatrAmplitude = SatrAmplitude.UNIFORM

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        return {"wavefront": self.wavefront.value, "satr_amplitude": self.satr_amplitude.value}

    @classmethod
    def from_dict(cls, data: dict, path: str = "emulation") -> EmulationSettings:
        """Deserialize from dictionary."""
        data = _section(data, path)
        return cls(
            wavefront=_enum(Wavefront, data.get("wavefront", "near"), f"{path}.wavefront"),
            satr_amplitude=_enum(
                SatrAmplitude, data.get("satr_amplitude", "uniform"), f"{path}.satr_amplitude"
            ),
        )


# =============================================================================
# Scenario
# =============================================================================

@dataclass(frozen=True)
class SensingScenario:
    """
    A complete emulation scenario.

    Attributes:
        name: Free-form scenario name
        mode: ADTR or SATR
        array: Array parameters
        sweep: Sweep settings
        snapshots: Target snapshots (target count constant across snapshots)
        quantization: APM quantization settings
        noise: Optional noise settings
        emulation: APM configuration options
    """
    name: str
    mode: SensingMode
    array: ArraySpec
    sweep: SweepSettings
    snapshots: tuple[Snapshot, ...] = ()
    quantization: QuantizationSettings = field(default_factory=QuantizationSettings)
    noise: NoiseSettings = field(default_factory=NoiseSettings)
    emulation: EmulationSettings = field(default_factory=EmulationSettings)

    @property
    def wavelength_m(self) -> float:
        """Carrier wavelength."""
        return self.sweep.wavelength_m

    @property
    def target_count(self) -> int:
        """Targets per snapshot (taken from the first snapshot)."""
        return len(self.snapshots[0].targets) if self.snapshots else 0

    def snapshot(self, label: str) -> Snapshot:
        """Look up a snapshot by label."""
        for snap in self.snapshots:
            if snap.label == label:
                return snap
        raise InvalidArgumentError(f"scenario '{self.name}' has no snapshot '{label}'")

    def with_overrides(
        self,
        *,
        n_time: Optional[int] = None,
        n_freq: Optional[int] = None,
        phase_bits: Optional[int] = None,
        amp_step_db: Optional[float] = None,
        ideal: Optional[bool] = None,
        snr_db: Optional[float] = None,
        seed: Optional[int] = None,
    ) -> SensingScenario:
        """
        Return a copy with command-line overrides applied.

        Setting phase_bits or amp_step_db implies non-ideal quantization
        unless ideal is given explicitly.
        """
        sweep = self.sweep
        if n_time is not None:
            sweep = replace(sweep, n_time=n_time)
        if n_freq is not None:
            sweep = replace(sweep, n_freq=n_freq)

        quant = self.quantization
        if phase_bits is not None:
            quant = replace(quant, phase_bits=phase_bits, ideal=False)
        if amp_step_db is not None:
            quant = replace(quant, amp_step_db=amp_step_db, ideal=False)
        if ideal is not None:
            quant = replace(quant, ideal=ideal)

        noise = self.noise
        if snr_db is not None:
            noise = replace(noise, snr_db=snr_db)
        if seed is not None:
            noise = replace(noise, seed=seed)

        return replace(self, sweep=sweep, quantization=quant, noise=noise)

    def to_dict(self) -> dict:
        """Serialize to dictionary (key order is part of the file format)."""
        return {
            "schema_version": SCENARIO_SCHEMA_VERSION,
            "name": self.name,
            "mode": self.mode.value,
            "array": self.array.to_dict(),
            "sweep": self.sweep.to_dict(),
            "quantization": self.quantization.to_dict(),
            "noise": self.noise.to_dict(),
            "emulation": self.emulation.to_dict(),
            "snapshots": [s.to_dict() for s in self.snapshots],
        }

    @classmethod
    def from_dict(cls, data: dict) -> SensingScenario:
        """Deserialize from dictionary."""
        if not isinstance(data, dict):
            raise ScenarioParseError("scenario document must be an object")
        version = data.get("schema_version", SCENARIO_SCHEMA_VERSION)
        if version != SCENARIO_SCHEMA_VERSION:
            raise ScenarioParseError(
                f"unsupported schema_version {version} (expected {SCENARIO_SCHEMA_VERSION})",
                key_path="schema_version",
            )
        raw_snapshots = _require(data, "snapshots", "")
        if not isinstance(raw_snapshots, list):
            raise ScenarioParseError("snapshots must be a list", key_path="snapshots")
        return cls(
            name=str(data.get("name", "unnamed")),
            mode=_enum(SensingMode, _require(data, "mode", ""), "mode"),
            array=ArraySpec.from_dict(_require(data, "array", "")),
            sweep=SweepSettings.from_dict(_require(data, "sweep", "")),
            quantization=QuantizationSettings.from_dict(data.get("quantization", {})),
            noise=NoiseSettings.from_dict(data.get("noise", {})),
            emulation=EmulationSettings.from_dict(data.get("emulation", {})),
            snapshots=tuple(
                Snapshot.from_dict(s, f"snapshots[{i}]") for i, s in enumerate(raw_snapshots)
            ),
        )

    def __str__(self) -> str:
        return (
            f"{self.name} ({self.mode.value.upper()}, {len(self.snapshots)} snapshot(s), "
            f"{self.target_count} target(s))"
        )
