"""
Configuration compiler.

Turns a scenario snapshot into the settings the emulator hardware is loaded
with: APM weight matrices that reproduce each target's spatial signature,
and one RTS unit per target carrying its delay, Doppler and gain.
"""

from __future__ import annotations

import math
from dataclasses import replace
from typing import Optional

import numpy as np

from ..core.constants import ArrayLayout, SatrAmplitude, SensingMode, Wavefront
from ..core.errors import InvalidArgumentError, ModeMismatchError
from ..models.emulation import ApmConfig, CirRecord, RtsUnitConfig
from ..models.geometry import ArrayGeometry, FarFieldDirection, NearFieldPoint
from ..models.scenario import QuantizationSettings, SensingScenario, Snapshot, TargetState
from ..services.physics import delay_of, doppler_of, target_amplitude, update_interval_s
from ..utils.logger import get_logger
from .array_geometry import (
    build_split_ula,
    build_upa,
    element_distances,
    far_field_steering,
    near_field_phases,
)

logger = get_logger(__name__)


def scenario_geometry(scenario: SensingScenario) -> ArrayGeometry:
    """
    Build the array described by a scenario.

    ADTR arrays are not split; an ADTR ULA is a single-row planar array.
    """
    spec = scenario.array
    carrier = scenario.sweep.carrier_hz
    if spec.layout is ArrayLayout.UPA:
        return build_upa(spec.rows, spec.cols, spec.spacing_wl, carrier)
    if scenario.mode is SensingMode.SATR:
        if spec.tx_count is None:
            raise InvalidArgumentError("SATR arrays need tx_count")
        return build_split_ula(spec.cols, spec.spacing_wl, carrier, spec.tx_count)
    return replace(build_upa(1, spec.cols, spec.spacing_wl, carrier), layout=ArrayLayout.ULA)


# =============================================================================
# RTS units
# =============================================================================

def _rts_unit(
    scenario: SensingScenario,
    index: int,
    target: TargetState,
    dt: float,
) -> RtsUnitConfig:
    """CIR sequence of one target over the N_t samples of a snapshot."""
    sweep = scenario.sweep
    gain = complex(target_amplitude(scenario, target))
    nu = doppler_of(target.radial_velocity_mps, sweep.wavelength_m)
    if sweep.range_migration:
        times = np.arange(sweep.n_time) * dt
        ranges = target.range_m - target.radial_velocity_mps * times
        records = tuple(CirRecord(delay_of(float(r)), gain, nu) for r in ranges)
    else:
        record = CirRecord(delay_of(target.range_m), gain, nu)
        records = (record,) * sweep.n_time
    return RtsUnitConfig(index=index, records=records, update_interval_s=dt)


def _rts_units(scenario: SensingScenario, snapshot: Snapshot) -> list[RtsUnitConfig]:
    dt = update_interval_s(snapshot, scenario.sweep)
    units = [_rts_unit(scenario, n, t, dt) for n, t in enumerate(snapshot.targets)]
    logger.debug(
        f"Snapshot {snapshot.label}: {len(units)} RTS unit(s), dt = {dt * 1e3:.4f} ms"
    )
    return units


def _maybe_quantize(cfg: ApmConfig, settings: QuantizationSettings) -> ApmConfig:
    if settings.ideal:
        return replace(cfg, quantization=settings)
    return quantize_apm(cfg, settings.phase_bits, settings.amp_step_db)


# =============================================================================
# Compilers
# =============================================================================

def compile_adtr(
    scenario: SensingScenario,
    snapshot: Snapshot,
    geometry: Optional[ArrayGeometry] = None,
) -> tuple[ApmConfig, list[RtsUnitConfig]]:
    """
    Compile an ADTR snapshot.

    Column n of both weight matrices is the far-field steering vector of
    target n (Tx and Rx steering are identical when the whole array does
    both).

    Args:
        scenario: ADTR scenario
        snapshot: Snapshot to compile
        geometry: Pre-built array (built from the scenario when None)

    Returns:
        (APM configuration, RTS units in target order)
    """
    if scenario.mode is not SensingMode.ADTR:
        raise ModeMismatchError(f"compile_adtr needs an ADTR scenario, got {scenario.mode.value}")
    geometry = geometry or scenario_geometry(scenario)

    columns = []
    for n, target in enumerate(snapshot.targets):
        if not isinstance(target.direction, FarFieldDirection):
            raise InvalidArgumentError(f"ADTR target {n} needs a far-field direction")
        columns.append(far_field_steering(geometry, target.direction))
    steering = np.stack(columns, axis=1) if columns else np.zeros((geometry.element_count, 0), complex)

    cfg = ApmConfig(
        mode=SensingMode.ADTR,
        weights_tx=steering,
        weights_rx=steering.copy(),
        tx_mask=np.array(geometry.tx_mask),
        rx_mask=np.array(geometry.rx_mask),
    )
    cfg = _maybe_quantize(cfg, scenario.quantization)
    logger.info(
        f"Compiled ADTR snapshot {snapshot.label}: {geometry.element_count} ports x "
        f"{cfg.target_count} targets ({scenario.quantization.describe()})"
    )
    return cfg, _rts_units(scenario, snapshot)


def _satr_subarray_weights(
    geometry: ArrayGeometry,
    point: NearFieldPoint,
    mask: np.ndarray,
    wavefront: Wavefront,
    amplitude: SatrAmplitude,
) -> np.ndarray:
    """Full-length weight column with zeros outside ``mask``."""
    column = np.zeros(geometry.element_count, dtype=np.complex128)
    if wavefront is Wavefront.NEAR:
        phases = near_field_phases(geometry, point, mask)
    else:
        elevation = math.degrees(math.asin(point.z_m / point.distance))
        toward = FarFieldDirection(elevation_deg=elevation, azimuth_deg=point.angle_deg)
        phases = far_field_steering(geometry, toward)[mask]
    if amplitude is SatrAmplitude.SPHERICAL:
        phases = phases * (point.distance / element_distances(geometry, point, mask))
    column[mask] = phases
    return column


def compile_satr(
    scenario: SensingScenario,
    snapshot: Snapshot,
    geometry: Optional[ArrayGeometry] = None,
    wavefront: Optional[Wavefront] = None,
    amplitude: Optional[SatrAmplitude] = None,
) -> tuple[ApmConfig, list[RtsUnitConfig]]:
    """
    Compile a SATR snapshot.

    Tx-side rows carry the spherical-wavefront phases of the Tx sub-array,
    Rx-side rows those of the Rx sub-array; every other entry is a
    structural zero.

    Args:
        scenario: SATR scenario
        snapshot: Snapshot to compile
        geometry: Pre-built split array (built from the scenario when None)
        wavefront: NEAR (exact phases) or FAR (plane-wave approximation);
            defaults to the scenario setting
        amplitude: UNIFORM or SPHERICAL (1/d spreading, normalized to the
            phase-center distance); defaults to the scenario setting

    Returns:
        (APM configuration, RTS units in target order)
    """
    if scenario.mode is not SensingMode.SATR:
        raise ModeMismatchError(f"compile_satr needs a SATR scenario, got {scenario.mode.value}")
    geometry = geometry or scenario_geometry(scenario)
    wavefront = wavefront or scenario.emulation.wavefront
    amplitude = amplitude or scenario.emulation.satr_amplitude
    tx_mask = np.array(geometry.tx_mask)
    rx_mask = np.array(geometry.rx_mask)

    tx_cols, rx_cols = [], []
    for n, target in enumerate(snapshot.targets):
        if not isinstance(target.direction, NearFieldPoint):
            raise InvalidArgumentError(f"SATR target {n} needs a near-field position")
        tx_cols.append(_satr_subarray_weights(geometry, target.direction, tx_mask, wavefront, amplitude))
        rx_cols.append(_satr_subarray_weights(geometry, target.direction, rx_mask, wavefront, amplitude))

    empty = np.zeros((geometry.element_count, 0), dtype=np.complex128)
    cfg = ApmConfig(
        mode=SensingMode.SATR,
        weights_tx=np.stack(tx_cols, axis=1) if tx_cols else empty,
        weights_rx=np.stack(rx_cols, axis=1) if rx_cols else empty.copy(),
        tx_mask=tx_mask,
        rx_mask=rx_mask,
    )
    cfg = _maybe_quantize(cfg, scenario.quantization)
    logger.info(
        f"Compiled SATR snapshot {snapshot.label}: {int(tx_mask.sum())} Tx + "
        f"{int(rx_mask.sum())} Rx ports, {cfg.target_count} target(s), {wavefront.value}-field"
    )
    return cfg, _rts_units(scenario, snapshot)


def compile_snapshot(
    scenario: SensingScenario,
    snapshot: Snapshot,
    geometry: Optional[ArrayGeometry] = None,
) -> tuple[ApmConfig, list[RtsUnitConfig]]:
    """Compile with the compiler matching the scenario mode."""
    if scenario.mode is SensingMode.ADTR:
        return compile_adtr(scenario, snapshot, geometry)
    return compile_satr(scenario, snapshot, geometry)


# =============================================================================
# Quantization
# =============================================================================

def _quantize_weights(w: np.ndarray, phase_step: float, amp_step_db: float) -> np.ndarray:
    magnitude = np.abs(w)
    nonzero = magnitude > 0
    phase = np.round(np.angle(w) / phase_step) * phase_step
    if amp_step_db > 0:
        amp_db = np.zeros_like(magnitude)
        amp_db[nonzero] = 20.0 * np.log10(magnitude[nonzero])
        amp_db = np.round(amp_db / amp_step_db) * amp_step_db
        magnitude = np.where(nonzero, 10.0 ** (amp_db / 20.0), 0.0)
    return np.where(nonzero, magnitude * np.exp(1j * phase), 0.0)


def quantize_apm(cfg: ApmConfig, phase_bits: int, amp_step_db: float) -> ApmConfig:
    """
    Snap APM weights to the hardware phase/amplitude lattice.

    Phase is rounded to the nearest multiple of 2pi / 2^phase_bits and the
    amplitude in dB to the nearest multiple of ``amp_step_db``. Structural
    zeros stay zero.

    Args:
        cfg: Configuration to quantize
        phase_bits: Phase shifter resolution (>= 1)
        amp_step_db: Attenuator step in dB (0 leaves amplitude untouched)

    Returns:
        New configuration tagged with the applied settings
    """
    if phase_bits < 1:
        raise InvalidArgumentError(f"phase_bits must be >= 1, got {phase_bits}")
    if not amp_step_db >= 0:
        raise InvalidArgumentError(f"amp_step_db must be >= 0, got {amp_step_db}")
    phase_step = 2.0 * np.pi / 2**phase_bits
    return ApmConfig(
        mode=cfg.mode,
        weights_tx=_quantize_weights(np.asarray(cfg.weights_tx), phase_step, amp_step_db),
        weights_rx=_quantize_weights(np.asarray(cfg.weights_rx), phase_step, amp_step_db),
        tx_mask=np.array(cfg.tx_mask),
        rx_mask=np.array(cfg.rx_mask),
        quantization=QuantizationSettings(ideal=False, phase_bits=phase_bits, amp_step_db=amp_step_db),
    )
