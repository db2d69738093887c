"""Shared exception types.

Budget overruns are first-class results, never silent truncation: a
truncated minimum would be an invalid bound pretending to be exact.
"""

from __future__ import annotations


class BudgetError(RuntimeError):
    """An enumeration would exceed its configured budget."""

    def __init__(self, count: int, budget: int, message: str | None = None):
        self.count = count
        self.budget = budget
        super().__init__(message or f"enumeration of {count} candidates exceeds budget {budget}")


class HypothesisError(ValueError):
    """A routine with mathematical preconditions was invoked outside them."""


class CodeFileError(ValueError):
    """Malformed code or wiretap file; carries the offending line number."""

    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")
