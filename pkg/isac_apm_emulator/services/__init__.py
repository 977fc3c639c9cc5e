"""
Orchestration services.

Services tie the systems together for user-triggered operations
(validate, run, compare). They return results and leave file output and
terminal rendering to the data layer and the CLI.

The pipeline is imported from its module (services.pipeline): it depends on
the systems package, which in turn uses the physics conversions here.
"""

from .physics import delay_of, doppler_of, range_of, update_interval_s, velocity_of
from .reporting import compare_snapshot, default_tolerances, render_report
from .validation import Violation, validate_scenario

__all__ = [
    "delay_of",
    "range_of",
    "doppler_of",
    "velocity_of",
    "update_interval_s",
    "Violation",
    "validate_scenario",
    "compare_snapshot",
    "default_tolerances",
    "render_report",
]
