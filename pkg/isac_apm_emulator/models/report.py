"""
Run report - target-vs-estimate comparison rows in the layout of a
"target and measured parameters" table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from ..core.constants import REPORT_SCHEMA_VERSION, CheckStatus
from ..core.errors import ReportSchemaError


@dataclass(frozen=True)
class ParameterCheck:
    """
    One compared parameter of one target in one snapshot.

    ``estimate``/``error`` are None when the parameter was not estimable.
    """
    snapshot: str
    target_index: int
    parameter: str
    target: float
    estimate: Optional[float]
    error: Optional[float]
    tolerance: float
    status: CheckStatus

    @property
    def passed(self) -> bool:
        """True only for PASS rows."""
        return self.status is CheckStatus.PASS

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        return {
            "snapshot": self.snapshot,
            "target": self.target_index,
            "parameter": self.parameter,
            "target_value": self.target,
            "estimate": self.estimate,
            "abs_error": self.error,
            "tolerance": self.tolerance,
            "status": self.status.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> ParameterCheck:
        """Deserialize from dictionary."""
        return cls(
            snapshot=str(data["snapshot"]),
            target_index=int(data["target"]),
            parameter=str(data["parameter"]),
            target=float(data["target_value"]),
            estimate=None if data["estimate"] is None else float(data["estimate"]),
            error=None if data["abs_error"] is None else float(data["abs_error"]),
            tolerance=float(data["tolerance"]),
            status=CheckStatus(data["status"]),
        )


@dataclass
class RunReport:
    """
    Outcome of an end-to-end run.

    Attributes:
        scenario_name: Name of the scenario
        mode: "adtr" or "satr"
        checks: Comparison rows, grouped by snapshot then target
        runtime_s: Wall-clock runtime of the run
        provenance: Scenario digest, tool version, quantization settings
        snapshots: Snapshot labels in scenario order
    """
    scenario_name: str
    mode: str
    checks: list[ParameterCheck] = field(default_factory=list)
    runtime_s: float = 0.0
    provenance: dict[str, Any] = field(default_factory=dict)
    snapshots: list[str] = field(default_factory=list)

    @property
    def pass_count(self) -> int:
        """Rows that passed."""
        return sum(1 for c in self.checks if c.status is CheckStatus.PASS)

    @property
    def fail_count(self) -> int:
        """Rows that failed."""
        return sum(1 for c in self.checks if c.status is CheckStatus.FAIL)

    @property
    def not_estimable_count(self) -> int:
        """Rows the estimator could not resolve."""
        return sum(1 for c in self.checks if c.status is CheckStatus.NOT_ESTIMABLE)

    @property
    def all_passed(self) -> bool:
        """True when no row failed."""
        return self.fail_count == 0

    @property
    def worst_power_error_db(self) -> Optional[float]:
        """Largest power error over all rows (None when no power row exists)."""
        errors = [c.error for c in self.checks if c.parameter == "power_db" and c.error is not None]
        return max(errors) if errors else None

    def worst_check(self) -> Optional[ParameterCheck]:
        """The row with the largest error-to-tolerance ratio."""
        scored = [c for c in self.checks if c.error is not None and c.tolerance > 0]
        if not scored:
            return None
        return max(scored, key=lambda c: c.error / c.tolerance)  # type: ignore[operator]

    def summary(self) -> dict:
        """Global summary block."""
        return {
            "checks": len(self.checks),
            "passed": self.pass_count,
            "failed": self.fail_count,
            "not_estimable": self.not_estimable_count,
            "all_passed": self.all_passed,
            "worst_power_error_db": self.worst_power_error_db,
            "runtime_s": self.runtime_s,
        }

    def to_dict(self) -> dict:
        """Serialize to dictionary."""
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "scenario": self.scenario_name,
            "mode": self.mode,
            "snapshots": list(self.snapshots),
            "provenance": self.provenance,
            "summary": self.summary(),
            "checks": [c.to_dict() for c in self.checks],
        }

    @classmethod
    def from_dict(cls, data: dict) -> RunReport:
        """Deserialize from dictionary."""
        version = data.get("schema_version")
        if version != REPORT_SCHEMA_VERSION:
            raise ReportSchemaError(
                f"unsupported report schema_version {version!r} "
                f"(expected {REPORT_SCHEMA_VERSION})"
            )
        try:
            return cls(
                scenario_name=str(data["scenario"]),
                mode=str(data["mode"]),
                checks=[ParameterCheck.from_dict(c) for c in data["checks"]],
                runtime_s=float(data.get("summary", {}).get("runtime_s", 0.0)),
                provenance=dict(data.get("provenance", {})),
                snapshots=list(data.get("snapshots", [])),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise ReportSchemaError(f"malformed report: {e!r}") from None
