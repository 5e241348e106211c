"""Intervals, finite unions of intervals and grid sampling on the real line."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from fglab.core.errors import DomainError


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"interval endpoints must be finite: {self.lo!r}, {self.hi!r}")
        if self.lo > self.hi:
            raise DomainError(f"interval has lo > hi: {self.lo!r} > {self.hi!r}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise DomainError(f"degenerate interval at {self.lo!r} must be closed on both sides")

    @classmethod
    def closed(cls, lo: float, hi: float) -> Interval:
        return cls(lo, hi, True, True)

    @classmethod
    def open(cls, lo: float, hi: float) -> Interval:
        return cls(lo, hi, False, False)

    @classmethod
    def point(cls, c: float) -> Interval:
        return cls(c, c, True, True)

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: float) -> bool:
        above = x >= self.lo if self.lo_closed else x > self.lo
        below = x <= self.hi if self.hi_closed else x < self.hi
        return bool(above and below)

    def contains_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        above = xs >= self.lo if self.lo_closed else xs > self.lo
        below = xs <= self.hi if self.hi_closed else xs < self.hi
        return above & below

    def contains_with_tol(self, x: float, tol: float) -> bool:
        """Membership with both endpoints relaxed by ``tol`` (open ends included)."""
        return self.lo - tol <= x <= self.hi + tol

    def closure(self) -> Interval:
        return Interval(self.lo, self.hi, True, True)

    def distance(self, x: float) -> float:
        if x < self.lo:
            return self.lo - x
        if x > self.hi:
            return x - self.hi
        return 0.0

    def nearest_member(self, x: float, inset: float = 0.0) -> float:
        """Closest point of the interval to ``x``; open ends are approached by ``inset``."""
        if self.contains(x):
            return x
        step = min(inset, self.length / 2.0) if inset > 0 else self.length / 2.0
        if x <= self.lo:
            return self.lo if self.lo_closed else self.lo + step
        return self.hi if self.hi_closed else self.hi - step

    def overlaps(self, other: Interval) -> bool:
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo < hi:
            return True
        if lo > hi:
            return False
        return self.contains(lo) and other.contains(lo)

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo!r}, {self.hi!r}{right}"


def _sort_key(iv: Interval) -> tuple[float, bool, float]:
    return (iv.lo, not iv.lo_closed, iv.hi)


def _touch(cur: Interval, nxt: Interval, merge_tol: float) -> bool:
    if nxt.lo < cur.hi - merge_tol:
        return True
    if abs(nxt.lo - cur.hi) <= merge_tol:
        return cur.hi_closed or nxt.lo_closed
    return False


def _merge(cur: Interval, nxt: Interval) -> Interval:
    lo_closed = cur.lo_closed or (nxt.lo == cur.lo and nxt.lo_closed)
    if nxt.hi > cur.hi:
        hi, hi_closed = nxt.hi, nxt.hi_closed
    elif nxt.hi == cur.hi:
        hi, hi_closed = cur.hi, cur.hi_closed or nxt.hi_closed
    else:
        hi, hi_closed = cur.hi, cur.hi_closed
    return Interval(cur.lo, hi, lo_closed, hi_closed)


@dataclass(frozen=True)
class Domain:
    """A finite union of disjoint intervals, kept sorted and merged."""

    intervals: tuple[Interval, ...] = ()

    def __post_init__(self) -> None:
        ivs = tuple(self.intervals)
        object.__setattr__(self, "intervals", ivs)
        for a, b in zip(ivs, ivs[1:]):
            if _sort_key(b) < _sort_key(a) or _touch(a, b, 0.0):
                raise DomainError(
                    f"domain intervals must be sorted and separated: {a} then {b} "
                    "(use Domain.of to normalise)"
                )

    @classmethod
    def of(cls, *intervals: Interval, merge_tol: float = 0.0) -> Domain:
        ivs = sorted(intervals, key=_sort_key)
        merged: list[Interval] = []
        for iv in ivs:
            if merged and _touch(merged[-1], iv, merge_tol):
                merged[-1] = _merge(merged[-1], iv)
            else:
                merged.append(iv)
        return cls(tuple(merged))

    def __iter__(self) -> Iterator[Interval]:
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def lo(self) -> float:
        return self.intervals[0].lo

    @property
    def hi(self) -> float:
        return self.intervals[-1].hi

    def contains(self, x: float) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    def contains_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        mask = np.zeros(xs.shape, dtype=bool)
        for iv in self.intervals:
            mask |= iv.contains_array(xs)
        return mask

    def contains_with_tol(self, x: float, tol: float) -> bool:
        return any(iv.contains_with_tol(x, tol) for iv in self.intervals)

    def distance(self, x: float) -> float:
        if not self.intervals:
            return math.inf
        return min(iv.distance(x) for iv in self.intervals)

    def distance_array(self, xs: np.ndarray) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        out = np.full(xs.shape, np.inf)
        for iv in self.intervals:
            d = np.maximum(np.maximum(iv.lo - xs, xs - iv.hi), 0.0)
            out = np.minimum(out, d)
        return out

    def closure(self) -> Domain:
        return Domain.of(*(iv.closure() for iv in self.intervals))

    def contains_interval(self, iv: Interval, tol: float = 0.0) -> bool:
        for outer in self.intervals:
            lo_ok = outer.lo < iv.lo - tol or (
                abs(outer.lo - iv.lo) <= tol and (outer.lo_closed or not iv.lo_closed)
            )
            hi_ok = outer.hi > iv.hi + tol or (
                abs(outer.hi - iv.hi) <= tol and (outer.hi_closed or not iv.hi_closed)
            )
            if lo_ok and hi_ok:
                return True
        return False

    def contains_domain(self, other: Domain, tol: float = 0.0) -> bool:
        """True when every interval of ``other`` fits inside one interval of this domain."""
        return all(self.contains_interval(iv, tol) for iv in other.intervals)

    def nearest_member(self, x: float, inset: float = 0.0) -> float:
        best = min(self.intervals, key=lambda iv: (iv.distance(x), iv.lo))
        return best.nearest_member(x, inset)

    def __str__(self) -> str:
        if not self.intervals:
            return "{}"
        return " U ".join(str(iv) for iv in self.intervals)


@dataclass(frozen=True)
class GridSpec:
    """How a domain is discretised for pair scans.

    ``inset`` is an absolute offset for open endpoints; when it is None the offset is
    ``relative_inset`` times the interval length.
    """

    points_per_interval: int = 201
    inset: Optional[float] = None
    relative_inset: float = 1e-6
    extra_points: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.points_per_interval < 1:
            raise ValueError("points_per_interval must be positive")
        if self.inset is not None and self.inset <= 0:
            raise ValueError("inset must be positive")
        if self.relative_inset <= 0:
            raise ValueError("relative_inset must be positive")
        object.__setattr__(self, "extra_points", tuple(float(p) for p in self.extra_points))

    def inset_for(self, iv: Interval) -> float:
        if self.inset is not None:
            return self.inset
        return self.relative_inset * iv.length

    def with_points(self, n: int) -> GridSpec:
        return replace(self, points_per_interval=n)

    def with_extra(self, points: Iterable[float]) -> GridSpec:
        return replace(self, extra_points=self.extra_points + tuple(points))

    def spacing(self, d: Domain) -> float:
        """Largest distance between neighbouring samples of one interval."""
        n = self.points_per_interval
        if n < 2:
            return max((iv.length for iv in d), default=0.0)
        return max((iv.length / (n - 1) for iv in d), default=0.0)

    def describe(self) -> dict:
        return {
            "points_per_interval": self.points_per_interval,
            "inset": self.inset,
            "relative_inset": self.relative_inset,
            "extra_points": list(self.extra_points),
        }


def sample_grid(d: Domain, spec: GridSpec, extra: Sequence[float] = ()) -> np.ndarray:
    """Sorted, duplicate-free sample of ``d``; every returned point is a member."""
    chunks: list[np.ndarray] = []
    for iv in d:
        if iv.is_degenerate:
            chunks.append(np.array([iv.lo]))
            continue
        inset = spec.inset_for(iv)
        a = iv.lo if iv.lo_closed else iv.lo + inset
        b = iv.hi if iv.hi_closed else iv.hi - inset
        if a > b:
            a = b = (iv.lo + iv.hi) / 2.0
        chunks.append(np.linspace(a, b, spec.points_per_interval))
    points = list(spec.extra_points) + [float(p) for p in extra]
    if points:
        chunks.append(np.asarray(points, dtype=float))
    if not chunks:
        return np.empty(0)
    xs = np.concatenate(chunks)
    xs = xs[d.contains_array(xs)]
    return np.unique(xs)
