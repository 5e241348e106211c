from __future__ import annotations

from fractions import Fraction
from numbers import Real
from typing import Union

RealLike = Union[str, int, float, Fraction]


def parse_real(value: RealLike) -> float:
    """Parse a number given as int, float or rational string ("4/3", "-1/2", "0.25").

    Rational strings go through Fraction so "2/3" is rounded once, here.
    """
    if isinstance(value, bool):
        raise ValueError(f"expected a number, got boolean {value!r}")
    if isinstance(value, (Fraction, Real)):
        return float(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty numeric string")
        try:
            return float(Fraction(text.replace(" ", "")))
        except (ValueError, ZeroDivisionError) as err:
            raise ValueError(f"not a real number or rational string: {value!r}") from err
    raise ValueError(f"expected a number, got {type(value).__name__}")
