"""
Scenario validation service.

validate_scenario collects every invariant violation instead of stopping
at the first one, so a user sees the full list in one pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..core.constants import SATR_RANGE_CONSISTENCY_M, ArrayLayout, SensingMode
from ..models.geometry import FarFieldDirection, NearFieldPoint
from ..models.scenario import SensingScenario
from ..utils.logger import get_logger
from .physics import delay_of, doppler_of, update_interval_s

logger = get_logger(__name__)


@dataclass(frozen=True)
class Violation:
    """One broken scenario invariant."""
    code: str
    message: str
    location: str = ""

    def __str__(self) -> str:
        if self.location:
            return f"{self.location}: {self.message} [{self.code}]"
        return f"{self.message} [{self.code}]"


def _validate_array(s: SensingScenario) -> list[Violation]:
    a = s.array
    out: list[Violation] = []
    if not (math.isfinite(a.spacing_wl) and a.spacing_wl > 0):
        out.append(Violation("array-spacing", f"spacing must be > 0, got {a.spacing_wl}", "array"))
    if a.layout is ArrayLayout.UPA:
        if a.rows < 1 or a.cols < 1:
            out.append(Violation("array-size", f"UPA needs rows, cols >= 1, got {a.rows}x{a.cols}", "array"))
        if s.mode is SensingMode.SATR:
            out.append(Violation("array-layout", "SATR mode needs a split ULA", "array.layout"))
        return out

    if a.cols < 1:
        out.append(Violation("array-size", f"ULA needs count >= 1, got {a.cols}", "array.count"))
    if s.mode is SensingMode.SATR:
        if a.tx_count is None:
            out.append(Violation("array-split", "SATR mode needs tx_count", "array"))
        elif not 1 <= a.tx_count < a.cols:
            out.append(Violation(
                "array-split", f"tx_count must lie in [1, {a.cols - 1}], got {a.tx_count}",
                "array.tx_count",
            ))
    elif a.tx_count is not None:
        out.append(Violation("array-split", "ADTR arrays are not split; drop tx_count", "array.tx_count"))
    return out


def _validate_sweep(s: SensingScenario) -> list[Violation]:
    sw = s.sweep
    out: list[Violation] = []
    if not (math.isfinite(sw.carrier_hz) and sw.carrier_hz > 0):
        out.append(Violation("sweep-carrier", f"carrier must be > 0, got {sw.carrier_hz}", "sweep.carrier_hz"))
    if not (math.isfinite(sw.bandwidth_hz) and sw.bandwidth_hz > 0):
        out.append(Violation(
            "sweep-bandwidth", f"bandwidth must be > 0, got {sw.bandwidth_hz}", "sweep.bandwidth_hz"
        ))
    if sw.n_freq < 2:
        out.append(Violation(
            "sweep-nfreq", f"range estimation needs N_f >= 2, got {sw.n_freq}", "sweep.n_freq"
        ))
    if sw.n_time < 1:
        out.append(Violation("sweep-ntime", f"N_t must be >= 1, got {sw.n_time}", "sweep.n_time"))
    if sw.update_interval_s is not None and not sw.update_interval_s > 0:
        out.append(Violation(
            "sweep-interval", f"update interval must be > 0, got {sw.update_interval_s}",
            "sweep.update_interval_s",
        ))
    return out


def _validate_settings(s: SensingScenario) -> list[Violation]:
    q = s.quantization
    out: list[Violation] = []
    if not q.ideal and q.phase_bits < 1:
        out.append(Violation(
            "quant-bits", f"phase_bits must be >= 1, got {q.phase_bits}", "quantization.phase_bits"
        ))
    if not (math.isfinite(q.amp_step_db) and q.amp_step_db >= 0):
        out.append(Violation(
            "quant-amp", f"amp_step_db must be >= 0, got {q.amp_step_db}", "quantization.amp_step_db"
        ))
    if s.noise.snr_db is not None and not math.isfinite(s.noise.snr_db):
        out.append(Violation("noise-snr", "SNR must be finite", "noise.snr_db"))
    return out


def _validate_targets(s: SensingScenario) -> list[Violation]:
    out: list[Violation] = []
    if not s.snapshots:
        out.append(Violation("snapshots-empty", "scenario has no snapshots", "snapshots"))
        return out

    counts = {len(snap.targets) for snap in s.snapshots}
    if len(counts) > 1:
        out.append(Violation(
            "target-count", f"target count varies across snapshots: {sorted(counts)}", "snapshots"
        ))
    labels = [snap.label for snap in s.snapshots]
    if len(set(labels)) != len(labels):
        out.append(Violation("snapshot-label", "snapshot labels must be unique", "snapshots"))

    sweep_ok = s.sweep.carrier_hz > 0 and s.sweep.n_freq >= 2 and s.sweep.bandwidth_hz > 0
    for si, snap in enumerate(s.snapshots):
        where = f"snapshots[{si}] ({snap.label})"
        if not snap.targets:
            out.append(Violation("targets-empty", "snapshot has no targets", where))
            continue
        for ti, t in enumerate(snap.targets):
            loc = f"{where}.targets[{ti}]"
            if not (math.isfinite(t.range_m) and t.range_m > 0):
                out.append(Violation("target-range", f"range must be > 0, got {t.range_m}", loc))
            if not math.isfinite(t.radial_velocity_mps):
                out.append(Violation("target-velocity", "velocity must be finite", loc))
            if (t.gain_db is None) == (t.rcs_m2 is None):
                out.append(Violation("target-gain", "exactly one of gain_db / rcs_m2 must be set", loc))
            if t.gain_db is not None and not math.isfinite(t.gain_db):
                out.append(Violation("target-gain", "gain_db must be finite", loc))
            if t.rcs_m2 is not None and not (math.isfinite(t.rcs_m2) and t.rcs_m2 > 0):
                out.append(Violation("target-rcs", f"rcs_m2 must be > 0, got {t.rcs_m2}", loc))

            if s.mode is SensingMode.ADTR and not isinstance(t.direction, FarFieldDirection):
                out.append(Violation("target-direction", "ADTR targets need a far-field direction", loc))
            if s.mode is SensingMode.SATR:
                if not isinstance(t.direction, NearFieldPoint):
                    out.append(Violation("target-direction", "SATR targets need a position", loc))
                elif abs(t.direction.distance - t.range_m) > SATR_RANGE_CONSISTENCY_M:
                    out.append(Violation(
                        "target-position",
                        f"range_m {t.range_m} disagrees with position distance "
                        f"{t.direction.distance:.9f}",
                        loc,
                    ))

        if sweep_ok and all(t.range_m > 0 for t in snap.targets):
            out.extend(_validate_ambiguity(s, si))
    return out


def _validate_ambiguity(s: SensingScenario, si: int) -> list[Violation]:
    """Delay below 1/df; Doppler inside the CIR update rate; range stays positive."""
    snap = s.snapshots[si]
    sw = s.sweep
    where = f"snapshots[{si}] ({snap.label})"
    out: list[Violation] = []

    max_delay = max(delay_of(t.range_m) for t in snap.targets)
    limit = 1.0 / sw.freq_step_hz
    if max_delay >= limit:
        out.append(Violation(
            "delay-ambiguity",
            f"max delay {max_delay * 1e9:.1f} ns reaches the unambiguous limit "
            f"1/df = {limit * 1e9:.1f} ns",
            where,
        ))

    dt = update_interval_s(snap, sw)
    if dt > 0:
        nyquist = 0.5 / dt
        for ti, t in enumerate(snap.targets):
            nu = doppler_of(t.radial_velocity_mps, sw.wavelength_m)
            if abs(nu) > nyquist * (1.0 + 1e-9):
                out.append(Violation(
                    "doppler-ambiguity",
                    f"Doppler {nu:.1f} Hz exceeds half the CIR update rate ({nyquist:.1f} Hz)",
                    f"{where}.targets[{ti}]",
                ))
            if sw.range_migration:
                end_range = t.range_m - t.radial_velocity_mps * dt * (sw.n_time - 1)
                if end_range <= 0:
                    out.append(Violation(
                        "range-migration", "target reaches the array within the snapshot",
                        f"{where}.targets[{ti}]",
                    ))
    return out


def validate_scenario(scenario: SensingScenario) -> list[Violation]:
    """
    Check every scenario invariant.

    Never raises; an empty list means the scenario is valid.

    Args:
        scenario: Scenario to check

    Returns:
        List of violations
    """
    violations = (
        _validate_array(scenario)
        + _validate_sweep(scenario)
        + _validate_settings(scenario)
        + _validate_targets(scenario)
    )
    for v in violations:
        logger.warning(f"Scenario '{scenario.name}': {v}")
    return violations
