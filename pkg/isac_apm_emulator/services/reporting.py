"""
Reporting service - compares estimates with scenario truth and renders
run reports as aligned text tables.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..core.constants import DEFAULT_TOLERANCES, SATR_RANGE_TOLERANCE_M, CheckStatus, SensingMode
from ..core.errors import InvalidArgumentError
from ..models.estimates import DetectedTarget
from ..models.geometry import FarFieldDirection, NearFieldPoint
from ..models.report import ParameterCheck, RunReport
from ..models.scenario import SensingScenario, Snapshot, TargetState
from .physics import target_gain_db

ADTR_PARAMETERS = ("range_m", "velocity_mps", "elevation_deg", "azimuth_deg", "power_db")
SATR_PARAMETERS = ("range_m", "angle_deg")

# Tolerance keys accepted in a tolerance file
TOLERANCE_KEYS = tuple(DEFAULT_TOLERANCES) + ("satr_range_m",)


def default_tolerances() -> dict[str, float]:
    """Default absolute tolerance per parameter."""
    tol = dict(DEFAULT_TOLERANCES)
    tol["satr_range_m"] = SATR_RANGE_TOLERANCE_M
    return tol


def check_tolerances(tolerances: dict[str, float]) -> dict[str, float]:
    """Validate a tolerance table (known keys, non-negative values)."""
    for key, value in tolerances.items():
        if key not in TOLERANCE_KEYS:
            raise InvalidArgumentError(
                f"unknown tolerance '{key}' (known: {', '.join(TOLERANCE_KEYS)})"
            )
        if isinstance(value, bool) or not isinstance(value, (int, float)) or value < 0:
            raise InvalidArgumentError(f"tolerance '{key}' must be a number >= 0, got {value!r}")
    return {k: float(v) for k, v in tolerances.items()}


# =============================================================================
# Comparison
# =============================================================================

def truth_values(scenario: SensingScenario, target: TargetState) -> dict[str, float]:
    """Scenario values of the compared parameters."""
    if scenario.mode is SensingMode.ADTR:
        direction = target.direction
        assert isinstance(direction, FarFieldDirection)
        return {
            "range_m": target.range_m,
            "velocity_mps": target.radial_velocity_mps,
            "elevation_deg": direction.elevation_deg,
            "azimuth_deg": direction.azimuth_deg,
            "power_db": target_gain_db(scenario, target),
        }
    point = target.direction
    assert isinstance(point, NearFieldPoint)
    return {"range_m": target.range_m, "angle_deg": point.angle_deg}


def _match(
    truths: list[dict[str, float]],
    estimates: Sequence[DetectedTarget],
    keys: Sequence[str],
    tolerances: dict[str, float],
) -> dict[int, int]:
    """Assign estimates to truth targets minimizing tolerance-scaled distance."""
    if not truths or not estimates:
        return {}
    cost = np.zeros((len(truths), len(estimates)))
    for i, truth in enumerate(truths):
        for j, est in enumerate(estimates):
            for key in keys:
                value = getattr(est, key)
                if value is not None:
                    cost[i, j] += abs(value - truth[key]) / max(tolerances[key], 1e-12)
    rows, cols = linear_sum_assignment(cost)
    return {int(r): int(c) for r, c in zip(rows, cols)}


def _tolerance_for(mode: SensingMode, parameter: str, tolerances: dict[str, float]) -> float:
    if mode is SensingMode.SATR and parameter == "range_m":
        return tolerances["satr_range_m"]
    return tolerances[parameter]


def compare_snapshot(
    scenario: SensingScenario,
    snapshot: Snapshot,
    estimates: Sequence[DetectedTarget],
    tolerances: dict[str, float],
    velocity_estimable: bool = True,
) -> list[ParameterCheck]:
    """
    One check row per (target, parameter) of a snapshot.

    Estimates are matched to targets first on range (and velocity, when
    estimable). A target without a matching estimate fails every row;
    velocity rows of a single-sample capture are NOT_ESTIMABLE.

    Args:
        scenario: Scenario providing truth and gain normalization
        snapshot: Snapshot compared
        estimates: Detected targets of the snapshot
        tolerances: Absolute tolerance per parameter
        velocity_estimable: False when the dataset had one CIR sample

    Returns:
        Check rows in target order
    """
    mode = scenario.mode
    parameters = ADTR_PARAMETERS if mode is SensingMode.ADTR else SATR_PARAMETERS
    truths = [truth_values(scenario, t) for t in snapshot.targets]
    match_keys = ["range_m"]
    if mode is SensingMode.ADTR and velocity_estimable:
        match_keys.append("velocity_mps")
    scaled = dict(tolerances)
    if mode is SensingMode.SATR:
        scaled["range_m"] = tolerances["satr_range_m"]
    assignment = _match(truths, estimates, match_keys, scaled)

    checks: list[ParameterCheck] = []
    for i, truth in enumerate(truths):
        est = estimates[assignment[i]] if i in assignment else None
        for parameter in parameters:
            tol = _tolerance_for(mode, parameter, tolerances)
            value: Optional[float] = None if est is None else getattr(est, parameter)
            if parameter == "velocity_mps" and not velocity_estimable:
                status, error = CheckStatus.NOT_ESTIMABLE, None
                value = None
            elif value is None:
                status, error = CheckStatus.FAIL, None
            else:
                error = abs(float(value) - truth[parameter])
                status = CheckStatus.PASS if error <= tol else CheckStatus.FAIL
            checks.append(ParameterCheck(
                snapshot=snapshot.label,
                target_index=i,
                parameter=parameter,
                target=truth[parameter],
                estimate=None if value is None else float(value),
                error=error,
                tolerance=tol,
                status=status,
            ))
    return checks


# =============================================================================
# Rendering
# =============================================================================

_COLUMNS = ("Snapshot", "Target", "Parameter", "Target value", "Estimate", "|Error|", "Tol", "Status")


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.4f}"


def render_report(report: RunReport) -> str:
    """
    Render a report as an aligned text table.

    The row with the largest error-to-tolerance ratio is marked. Output is
    a pure function of the report, so re-rendering is deterministic.
    """
    worst = report.worst_check()
    rows = [
        (
            c.snapshot,
            str(c.target_index + 1),
            c.parameter,
            _fmt(c.target),
            _fmt(c.estimate),
            _fmt(c.error),
            _fmt(c.tolerance),
            c.status.value.upper(),
        )
        for c in report.checks
    ]
    widths = [len(h) for h in _COLUMNS]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]

    def line(cells: Sequence[str]) -> str:
        return "  ".join(cell.ljust(w) for cell, w in zip(cells, widths)).rstrip()

    out = [
        f"Scenario: {report.scenario_name} ({report.mode.upper()})",
        line(_COLUMNS),
        line(["-" * w for w in widths]),
    ]
    for check, row in zip(report.checks, rows):
        text = line(row)
        if check is worst:
            text += "  <-- worst"
        out.append(text)

    worst_power = report.worst_power_error_db
    out.append("")
    out.append(
        f"Passed {report.pass_count}/{len(report.checks)}, failed {report.fail_count}, "
        f"not estimable {report.not_estimable_count}"
    )
    if worst_power is not None:
        out.append(f"Worst power error: {worst_power:.3f} dB")
    out.append(f"Runtime: {report.runtime_s:.2f} s")
    return "\n".join(out) + "\n"
