"""Exception types and global enumeration caps."""
from __future__ import annotations

import os


class FibraeError(Exception):
    """Base class for all library errors."""


class DomainError(FibraeError):
    """Bad operand: unknown object, base mismatch, unmet precondition."""


class ParseError(FibraeError):
    """Syntax error in the text format, with line/column diagnostics."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}" if line else message)


class ValidationFailure(FibraeError):
    """A parsed value failed validation; carries the full report."""

    def __init__(self, name: str, report: list[str]):
        self.name = name
        self.report = list(report)
        super().__init__(f"{name}: " + "; ".join(report))


class SizeCapError(FibraeError):
    """An enumeration exceeded the configured size cap."""


class DepthCapError(FibraeError):
    """A truncation search hit its depth cap before stabilizing."""


DEFAULT_FIBER_CAP = 100_000
DEFAULT_SEARCH_CAP = 10_000_000


def _env_cap() -> int | None:
    raw = os.environ.get("FIBRAE_SIZE_CAP", "").strip()
    if not raw:
        return None
    try:
        return int(raw)
    except ValueError:
        return None


def fiber_cap() -> int:
    """Cap on a single materialized function-set fiber."""
    return _env_cap() or DEFAULT_FIBER_CAP


def search_cap() -> int:
    """Cap on total nodes visited by a backtracking enumeration."""
    return _env_cap() or DEFAULT_SEARCH_CAP
