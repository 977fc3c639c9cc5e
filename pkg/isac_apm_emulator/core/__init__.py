"""
Core emulator infrastructure.

This package contains:
- constants: Physical constants, defaults, enums and file-format constants
- errors: Exception hierarchy
- event_bus: Publish/subscribe progress notifications
- changelog: Version history (source of the package version)
"""

from .constants import *  # noqa: F403
from .errors import (
    DatasetFormatError,
    EmulatorError,
    InvalidArgumentError,
    ModeMismatchError,
    ReportSchemaError,
    ScenarioParseError,
    ScenarioValidationError,
)
from .event_bus import EventBus, event_bus

__all__ = [
    "EventBus",
    "event_bus",
    "EmulatorError",
    "InvalidArgumentError",
    "ModeMismatchError",
    "ScenarioParseError",
    "ScenarioValidationError",
    "DatasetFormatError",
    "ReportSchemaError",
]
