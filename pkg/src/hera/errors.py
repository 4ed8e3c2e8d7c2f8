"""Exception types shared across the package."""

from __future__ import annotations


class HeraError(Exception):
    """Base class for every error raised by :mod:`hera`."""


class FieldError(HeraError, ValueError):
    """Invalid field construction or mixing elements of different fields."""


class SingularMatrixError(HeraError, ArithmeticError):
    """A linear system has no unique solution."""


class ParameterError(HeraError, ValueError):
    """Scheme parameters violate a named constraint.

    ``constraint`` is one of ``"bound"``, ``"partition"``, ``"field"``,
    ``"range"`` or ``"dimension"``.
    """

    def __init__(self, constraint: str, message: str) -> None:
        super().__init__(f"{constraint}: {message}")
        self.constraint = constraint


class AssignmentError(HeraError, RuntimeError):
    """No usable point assignment (override rejected or retry cap exhausted)."""

    def __init__(self, message: str, diagnostics: dict | None = None) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class EnumerationError(HeraError, ValueError):
    """A brute-force enumeration would exceed its size guard."""


class ShapeError(HeraError, ValueError):
    """Matrix dimensions do not fit the operation."""
