"""Exceptions raised by the exstates library."""

from typing import Optional


class ExStatesError(Exception):
    """Base class for all library errors."""


class DomainError(ExStatesError, ValueError):
    """A parameter lies outside the domain of a formula."""


class CapacityError(ExStatesError, IndexError):
    """A precomputed table or a truncated series ran out of room."""


class RouteError(DomainError):
    """A normalization route is singular at the requested point.

    Attributes:
        fallback (Optional[str]): Name of the route that handles the point.
    """

    def __init__(self, message: str, fallback: Optional[str] = None):
        super().__init__(message)
        self.fallback = fallback


class TruncationRiskError(ExStatesError, ValueError):
    """A truncated Fock space or series is too short for the request."""


class ConsistencyError(ExStatesError, ArithmeticError):
    """Two independent computations of the same quantity disagree."""


class UsageError(ExStatesError, ValueError):
    """Invalid sweep configuration or command-line input."""
