"""
ISAC APM Emulator - desk-scale simulator of conductive multi-target emulation
for ISAC base-station testing.

The simulated rig connects the base station's antenna ports through an
amplitude-and-phase modulation (APM) network to radar target simulator (RTS)
units. This package compiles target scenarios into APM weights and RTS
configurations, synthesizes the channel frequency responses the base station
would record, and runs the estimation chain that recovers the targets.
"""

from __future__ import annotations

from .core.constants import VERSION
from .utils.logger import get_logger, setup_logging

__version__ = VERSION

__all__ = ["__version__", "get_logger", "setup_logging", "main"]


def main(argv: list[str] | None = None) -> int:
    """Run the command-line interface."""
    from .cli.main import main as cli_main

    return cli_main(argv)
