"""Compact subsets of the line and best approximations out of them."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from fglab.core.errors import DomainError, EmptySetError
from fglab.core.interval import Domain, Interval

TIE_TOL = 1e-12


@dataclass(frozen=True)
class CompactSet:
    """A finite union of closed, bounded intervals."""

    domain: Domain

    def __post_init__(self) -> None:
        for iv in self.domain:
            if not (iv.lo_closed and iv.hi_closed):
                raise DomainError(f"compact sets need closed intervals, got {iv}")

    @classmethod
    def of(cls, *intervals: Interval) -> CompactSet:
        return cls(Domain.of(*intervals))

    @classmethod
    def closed(cls, lo: float, hi: float) -> CompactSet:
        return cls.of(Interval.closed(lo, hi))

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.domain)

    @property
    def is_empty(self) -> bool:
        return self.domain.is_empty

    def contains(self, x: float) -> bool:
        return self.domain.contains(x)

    def __str__(self) -> str:
        return str(self.domain)


@dataclass(frozen=True)
class BestApproxResult:
    u: float
    dist: float
    points: tuple[float, ...]

    def __iter__(self) -> Iterator[float]:
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        return {"u": self.u, "dist": self.dist, "points": list(self.points)}


def best_approx(m: CompactSet, u: float) -> BestApproxResult:
    """P_M(u) from interval endpoints: {u} when u is in M, else the nearest endpoint(s)."""
    if m.is_empty:
        raise EmptySetError("best approximation out of an empty set")
    if not math.isfinite(u):
        raise DomainError(f"u must be finite, got {u!r}")
    if m.contains(u):
        return BestApproxResult(u=u, dist=0.0, points=(u,))
    nearest = [(iv.distance(u), min(max(u, iv.lo), iv.hi)) for iv in m]
    dist = min(d for d, _ in nearest)
    points = sorted({p for d, p in nearest if d <= dist + TIE_TOL})
    return BestApproxResult(u=u, dist=dist, points=tuple(points))
