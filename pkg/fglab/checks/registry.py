from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from fglab.core.errors import DomainError
from fglab.core.maps import PiecewiseMap
from fglab.core.psi import PsiFunction


class InequalityTag(str, Enum):
    CONTRACTION = "contraction"
    WEAKLY_CONTRACTIVE = "weakly_contractive"
    WEAKLY_CONTRACTIVE_WRT = "weakly_contractive_wrt"
    CROSS = "cross"
    FG_MIN = "fg_min"
    FG_MAX = "fg_max"
    FAMILY_MIN = "family_min"


@dataclass(frozen=True)
class InequalityKind:
    tag: InequalityTag
    k: Optional[float] = None

    def __post_init__(self) -> None:
        if self.tag is InequalityTag.CONTRACTION:
            if self.k is None or not 0.0 <= self.k < 1.0:
                raise ValueError(f"contraction needs 0 <= k < 1, got {self.k!r}")

    @property
    def label(self) -> str:
        if self.tag is InequalityTag.CONTRACTION:
            return f"contraction(k={self.k!r})"
        return self.tag.value


@dataclass(frozen=True)
class Values:
    """Maps evaluated at one side of a pair; arrays broadcast against the other side."""

    x: np.ndarray
    t: np.ndarray
    f: Optional[np.ndarray] = None
    g: Optional[np.ndarray] = None

    def column(self) -> Values:
        cols = (self.x, self.t, self.f, self.g)
        return Values(*(None if a is None else a[:, None] for a in cols))

    def row(self) -> Values:
        rows = (self.x, self.t, self.f, self.g)
        return Values(*(None if a is None else a[None, :] for a in rows))


Evaluator = Callable[[Values, Values, PsiFunction, InequalityKind], Tuple[np.ndarray, np.ndarray]]


@dataclass
class InequalityEntry:
    tag: InequalityTag
    evaluator: Evaluator
    roles: Tuple[str, ...]
    uses_psi: bool = True
    description: str = ""


INEQUALITY_REGISTRY: Dict[InequalityTag, InequalityEntry] = {}


def register_inequality(
    tag: InequalityTag,
    *,
    roles: Iterable[str],
    uses_psi: bool = True,
    description: str = "",
):
    """Class-free registration: the decorated function becomes the tag's evaluator."""

    def deco(fn: Evaluator) -> Evaluator:
        if tag in INEQUALITY_REGISTRY:
            raise ValueError(f"register_inequality: duplicate tag '{tag.value}'")
        INEQUALITY_REGISTRY[tag] = InequalityEntry(
            tag=tag,
            evaluator=fn,
            roles=tuple(roles),
            uses_psi=uses_psi,
            description=description,
        )
        return fn

    return deco


def get_entry(tag: InequalityTag) -> InequalityEntry:
    # evaluators register on import
    from fglab.checks import inequalities  # noqa: F401

    entry = INEQUALITY_REGISTRY.get(tag)
    if entry is None:
        raise KeyError(f"Inequality '{tag.value}' not registered")
    return entry


def list_tags() -> List[str]:
    from fglab.checks import inequalities  # noqa: F401

    return [tag.value for tag in INEQUALITY_REGISTRY]


@dataclass(frozen=True)
class MapBundle:
    t: PiecewiseMap
    f: Optional[PiecewiseMap] = None
    g: Optional[PiecewiseMap] = None

    def __post_init__(self) -> None:
        dom = self.t.domain
        for m in self.maps()[1:]:
            if m.domain != dom:
                raise DomainError(
                    f"maps do not share one domain: '{self.t.name}' on {dom}, "
                    f"'{m.name}' on {m.domain}"
                )

    def maps(self) -> List[PiecewiseMap]:
        return [m for m in (self.t, self.f, self.g) if m is not None]

    def require(self, roles: Iterable[str]) -> None:
        missing = [r for r in roles if getattr(self, r) is None]
        if missing:
            raise ValueError(f"map bundle is missing role(s): {', '.join(missing)}")

    def swapped(self) -> MapBundle:
        return MapBundle(self.t, self.g, self.f)

    @property
    def domain(self):
        return self.t.domain

    def side(self, xs: np.ndarray, t: Optional[PiecewiseMap] = None) -> Values:
        """Vectorised evaluation of every present map at ``xs``."""
        tmap = t or self.t
        return Values(
            x=xs,
            t=tmap.evaluate(xs),
            f=None if self.f is None else self.f.evaluate(xs),
            g=None if self.g is None else self.g.evaluate(xs),
        )

    def side_pointwise(self, xs: np.ndarray, t: Optional[PiecewiseMap] = None) -> Values:
        """Same as :meth:`side` but through scalar evaluation, one point at a time."""
        tmap = t or self.t

        def ev(m: Optional[PiecewiseMap]) -> Optional[np.ndarray]:
            if m is None:
                return None
            return np.array([m(float(x)) for x in xs], dtype=float)

        return Values(x=xs, t=ev(tmap), f=ev(self.f), g=ev(self.g))
