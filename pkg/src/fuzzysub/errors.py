"""Exception hierarchy shared by every module."""

from __future__ import annotations


class FuzzySubError(Exception):
    """Base class for all package errors."""


class CapacityError(FuzzySubError):
    """A configured size limit would be exceeded."""


class InvalidParameterError(FuzzySubError, ValueError):
    """A constructor or formula received a parameter outside its domain."""


class SpecError(FuzzySubError, ValueError):
    """A group-spec string could not be parsed.

    ``token`` and ``position`` (0-based character offset) identify the
    offending piece of input.
    """

    def __init__(self, message: str, token: str, position: int):
        self.token = token
        self.position = position
        super().__init__(f"{message} (token {token!r} at position {position})")


class SpecCapacityError(SpecError, CapacityError):
    """A parsed spec realizes a group larger than the order cap."""


class InternalError(FuzzySubError):
    """An engine invariant broke. Always a bug, never a result."""


class MethodMismatchError(InternalError):
    """The lattice DP and the inclusion-exclusion recurrence disagree."""
