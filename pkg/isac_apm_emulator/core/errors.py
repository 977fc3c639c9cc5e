"""
Exception hierarchy for the emulator.

Library code raises these; only the CLI turns them into exit codes.
"""

from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from ..services.validation import Violation


class EmulatorError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgumentError(EmulatorError, ValueError):
    """An argument is outside its documented domain."""


class ModeMismatchError(EmulatorError):
    """An ADTR-only operation received SATR input, or vice versa."""


class ScenarioParseError(EmulatorError):
    """
    A scenario file could not be parsed.

    Attributes:
        path: File that failed to parse
        line: 1-based line number when known (syntax errors)
        column: 1-based column when known
        key_path: Dotted location in the document (schema errors)
    """

    def __init__(
        self,
        message: str,
        *,
        path: str | None = None,
        line: int | None = None,
        column: int | None = None,
        key_path: str | None = None,
    ):
        self.path = path
        self.line = line
        self.column = column
        self.key_path = key_path
        self.detail = message
        super().__init__(self._format(message))

    def _format(self, message: str) -> str:
        where = self.path or "<scenario>"
        if self.line is not None:
            where += f":{self.line}"
            if self.column is not None:
                where += f":{self.column}"
        if self.key_path:
            where += f" [{self.key_path}]"
        return f"{where}: {message}"


class ScenarioValidationError(EmulatorError):
    """A scenario parsed but violates one or more invariants."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        lines = "\n".join(f"  - {v}" for v in violations)
        super().__init__(f"scenario has {len(violations)} violation(s):\n{lines}")


class DatasetFormatError(EmulatorError):
    """
    A CFR dataset file is malformed.

    Attributes:
        offset: Byte offset at which the problem was detected
        expected: What the reader expected (length or value)
        actual: What it found
    """

    def __init__(
        self,
        message: str,
        *,
        offset: int,
        expected: object = None,
        actual: object = None,
    ):
        self.offset = offset
        self.expected = expected
        self.actual = actual
        detail = f"at byte {offset}: {message}"
        if expected is not None or actual is not None:
            detail += f" (expected {expected}, got {actual})"
        super().__init__(detail)


class ReportSchemaError(EmulatorError):
    """A saved run report has an unsupported schema."""
