"""Exact rational intervals and certified comparisons.

:class:`RatInterval` plays two roles that share one representation:

* an *enclosure* of a real number (``lo <= x <= hi``, exact when
  ``lo == hi``), used wherever a quantity may only be known up to a
  computable error, and
* a *solid closed interval* ``[lo, hi]`` of the line, used for
  construction pieces and compact-set representations.

All arithmetic is outward-exact in ``fractions.Fraction``; nothing here
ever rounds.  Comparisons come in a certified flavour that either
separates its operands or raises :class:`~cantorvis.errors.Inconclusive`
with the overlap width needed to decide.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import Inconclusive, InvalidInput

RationalLike = Union[Fraction, int, str]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, ``"p/q"`` strings, and Fractions to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"not a rational literal: {value!r}") from exc
    raise InvalidInput(f"cannot interpret {type(value).__name__} as a rational")


def format_fraction(value: Fraction) -> str:
    """Canonical ``p/q`` form: reduced, explicit denominator, ``q > 0``."""
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class RatInterval:
    """Closed interval ``[lo, hi]`` with exact rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not isinstance(self.lo, Fraction) or not isinstance(self.hi, Fraction):
            object.__setattr__(self, "lo", as_fraction(self.lo))
            object.__setattr__(self, "hi", as_fraction(self.hi))
        if self.lo > self.hi:
            raise InvalidInput(f"interval endpoints out of order: {self.lo} > {self.hi}")

    # -- constructors -------------------------------------------------

    @classmethod
    def exact(cls, value: RationalLike) -> "RatInterval":
        v = as_fraction(value)
        return cls(v, v)

    @classmethod
    def of(cls, lo: RationalLike, hi: RationalLike) -> "RatInterval":
        return cls(as_fraction(lo), as_fraction(hi))

    # -- basic geometry ----------------------------------------------

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def exact_value(self) -> Fraction:
        """The represented rational, for degenerate intervals only."""
        if not self.is_exact:
            raise Inconclusive(
                f"interval [{self.lo}, {self.hi}] is not degenerate", overlap=self.width
            )
        return self.lo

    def contains_point(self, x: RationalLike) -> bool:
        v = as_fraction(x)
        return self.lo <= v <= self.hi

    def contains_interval(self, other: "RatInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def hull(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    # -- exact arithmetic (outward in both endpoints) -----------------

    def __add__(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(self.lo - other.hi, self.hi - other.lo)

    def shift(self, offset: RationalLike) -> "RatInterval":
        d = as_fraction(offset)
        return RatInterval(self.lo + d, self.hi + d)

    def scale(self, factor: RationalLike) -> "RatInterval":
        f = as_fraction(factor)
        if f >= 0:
            return RatInterval(self.lo * f, self.hi * f)
        return RatInterval(self.hi * f, self.lo * f)

    def __str__(self) -> str:  # compact human-facing form
        if self.is_exact:
            return format_fraction(self.lo)
        return f"[{format_fraction(self.lo)}, {format_fraction(self.hi)}]"


def interval_sum(items: Iterable[RatInterval]) -> RatInterval:
    total = RatInterval.exact(0)
    for item in items:
        total = total + item
    return total


# ---------------------------------------------------------------------------
# Certified predicates.  Each returns a plain bool when the enclosures
# separate, and raises Inconclusive otherwise.
# ---------------------------------------------------------------------------


def _overlap_width(a: RatInterval, b: RatInterval) -> Fraction:
    return min(a.hi, b.hi) - max(a.lo, b.lo)


def certainly_lt(a: RatInterval, b: RatInterval) -> bool:
    """Certified strict ``a < b``."""
    if a.hi < b.lo:
        return True
    if a.lo >= b.hi:
        return False
    raise Inconclusive(
        f"cannot certify [{a.lo},{a.hi}] < [{b.lo},{b.hi}]",
        overlap=_overlap_width(a, b),
    )


def certainly_le(a: RatInterval, b: RatInterval) -> bool:
    """Certified ``a <= b``."""
    if a.hi <= b.lo:
        return True
    if a.lo > b.hi:
        return False
    raise Inconclusive(
        f"cannot certify [{a.lo},{a.hi}] <= [{b.lo},{b.hi}]",
        overlap=_overlap_width(a, b),
    )


def certainly_disjoint(a: RatInterval, b: RatInterval) -> bool:
    """Certified disjointness of the *solid* closed intervals a and b."""
    if a.hi < b.lo or b.hi < a.lo:
        return True
    if _overlap_width(a, b) > 0:
        return False
    # Shared endpoint only: closed intervals touching at a point intersect.
    return False
