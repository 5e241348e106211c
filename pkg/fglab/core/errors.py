"""Exception hierarchy shared by every fglab module."""
from __future__ import annotations

from typing import Optional


class FglabError(Exception):
    """Base class for all fglab errors."""


class DomainError(FglabError):
    """A point, interval or branch violates its domain."""


class NoPreimage(FglabError):
    def __init__(self, map_name: str, y: float, message: Optional[str] = None) -> None:
        self.map_name = map_name
        self.y = y
        super().__init__(message or f"no preimage of {y!r} under map '{map_name}'")


class ScheduleError(FglabError):
    """Step size outside [0, 1] or an unusable schedule."""


class EmptySetError(FglabError):
    pass


class ExpressionError(FglabError):
    """A custom altering-distance expression could not be parsed."""
