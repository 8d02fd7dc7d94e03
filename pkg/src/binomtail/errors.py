"""Exception types shared across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class IndeterminateError(ArithmeticError):
    """A comparison could not be decided within the precision cap.

    The last enclosure computed is kept on ``enclosure`` so callers can
    report it.
    """

    def __init__(self, message: str, enclosure=None):
        super().__init__(message)
        self.enclosure = enclosure
