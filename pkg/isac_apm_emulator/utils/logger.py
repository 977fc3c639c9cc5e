"""
Logging configuration for the ISAC APM emulator.

Sets up logging to the console (stderr, so result tables written to stdout
stay clean) and, once a command knows its output directory, to a rotating
log file next to the generated artifacts.
"""

from __future__ import annotations

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

# Log format
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

# Log file settings
LOG_FILENAME = "isac_emulator.log"
MAX_LOG_SIZE_BYTES = 1024 * 1024  # 1 MB
BACKUP_COUNT = 1

ROOT_LOGGER_NAME = "isac_apm_emulator"

# Global state
_file_handler: Optional[RotatingFileHandler] = None
_file_log_path: Optional[Path] = None
_console_handler: Optional[logging.StreamHandler] = None


def setup_logging(level: int = logging.INFO) -> logging.Logger:
    """
    Configure console logging for the package.

    Safe to call repeatedly: the console handler is created once and later
    calls only adjust its level.

    Args:
        level: Console log level

    Returns:
        The package root logger
    """
    global _console_handler

    logger = logging.getLogger(ROOT_LOGGER_NAME)
    logger.setLevel(logging.DEBUG)

    if _console_handler is None:
        logger.handlers.clear()

        _console_handler = logging.StreamHandler(sys.stderr)
        _console_handler.setFormatter(logging.Formatter(LOG_FORMAT, DATE_FORMAT))
        logger.addHandler(_console_handler)
        logger.propagate = False

    _console_handler.setLevel(level)
    return logger


def setup_file_logging(log_dir: Path) -> Optional[Path]:
    """
    Add a rotating file handler writing into ``log_dir``.

    Called by the CLI once the output directory of a command is known.
    A previous file handler (from an earlier command in the same process)
    is replaced.

    Args:
        log_dir: Directory that receives the log file

    Returns:
        Path to the log file, or None if it could not be created
    """
    global _file_handler, _file_log_path

    logger = logging.getLogger(ROOT_LOGGER_NAME)

    if _file_handler is not None:
        logger.removeHandler(_file_handler)
        _file_handler.close()
        _file_handler = None
        _file_log_path = None

    try:
        log_dir.mkdir(parents=True, exist_ok=True)
        log_path = log_dir / LOG_FILENAME

        _file_handler = RotatingFileHandler(
            log_path,
            maxBytes=MAX_LOG_SIZE_BYTES,
            backupCount=BACKUP_COUNT,
            encoding="utf-8",
        )
        _file_handler.setLevel(logging.DEBUG)
        _file_handler.setFormatter(logging.Formatter(LOG_FORMAT, DATE_FORMAT))
        logger.addHandler(_file_handler)

        _file_log_path = log_path
        logger.debug(f"Log file: {log_path}")
        return log_path
    except OSError as e:
        logger.warning(f"Could not set up file logging in {log_dir}: {e}")
        return None


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger for a specific module.

    Args:
        name: Module name (typically __name__)

    Returns:
        Logger instance under the package root logger
    """
    setup_logging_once()

    if name.startswith(ROOT_LOGGER_NAME):
        return logging.getLogger(name)
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")


def setup_logging_once() -> None:
    """Install the console handler with the default level if nothing did yet."""
    if _console_handler is None:
        setup_logging()


def get_log_file_path() -> Path | None:
    """
    Get the path to the current log file.

    Returns:
        Path to log file, or None if file logging isn't set up
    """
    return _file_log_path
