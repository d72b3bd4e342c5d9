"""Source spans, diagnostics and the base error type shared by all stages."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional


class Severity(str, Enum):
    """Diagnostic severity, ordered from most to least serious."""

    ERROR = "error"
    WARNING = "warning"
    NOTE = "note"


@dataclass(frozen=True)
class Span:
    """A region of a source file.

    ``start`` and ``end`` are character offsets into the decoded text, not
    byte offsets into the file. Line and column are 1-based and refer to
    ``start``; column counts characters too.
    """

    start: int
    end: int
    file: str = "<input>"
    line: int = 1
    column: int = 1

    def contains(self, other: "Span") -> bool:
        return (
            self.file == other.file
            and self.start <= other.start
            and other.end <= self.end
        )

    def overlaps(self, start: int, end: int) -> bool:
        return self.start < end and start < self.end


@dataclass(frozen=True)
class Diagnostic:
    """A single finding reported to the user."""

    severity: Severity
    code: str
    message: str
    span: Optional[Span] = None

    @property
    def is_error(self) -> bool:
        return self.severity == Severity.ERROR

    def format(self) -> str:
        """Render as ``file:line:col: severity: message``."""
        if self.span is None:
            return f"<unknown>:0:0: {self.severity.value}: {self.message}"
        return (
            f"{self.span.file}:{self.span.line}:{self.span.column}: "
            f"{self.severity.value}: {self.message}"
        )

    def to_json(self) -> dict:
        return {
            "severity": self.severity.value,
            "code": self.code,
            "message": self.message,
            "file": self.span.file if self.span else None,
            "line": self.span.line if self.span else None,
            "column": self.span.column if self.span else None,
        }


class DartwinError(Exception):
    """Base exception for all toolchain errors."""

    code = "DartwinError"

    def __init__(self, message: str, span: Optional[Span] = None):
        self.message = message
        self.span = span
        super().__init__(message)

    def to_diagnostic(self, severity: Severity = Severity.ERROR) -> Diagnostic:
        return Diagnostic(severity, self.code, self.message, self.span)


def has_errors(diagnostics) -> bool:
    """Check whether any diagnostic is at error severity."""
    return any(d.is_error for d in diagnostics)
