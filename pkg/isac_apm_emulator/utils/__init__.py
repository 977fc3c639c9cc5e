"""
Utility functions for the ISAC APM emulator.
"""

from .logger import (
    get_log_file_path,
    get_logger,
    setup_file_logging,
    setup_logging,
)
from .math_utils import (
    amplitude_to_db,
    apply_window,
    db_to_amplitude,
    nearest_index,
    power_to_db,
    uniform_grid,
    window_weights,
)

__all__ = [
    # Logging
    "setup_logging",
    "setup_file_logging",
    "get_logger",
    "get_log_file_path",
    # Math utilities
    "power_to_db",
    "db_to_amplitude",
    "amplitude_to_db",
    "window_weights",
    "apply_window",
    "uniform_grid",
    "nearest_index",
]
