"""Rational linear independence and translate overlaps.

Models points of a finite-dimensional vector space over the rationals
(coordinates in a formal basis).  The structural fact used by the
invisibility constructions is that for a linearly independent finite set
``B`` and any nonzero ``alpha``, the translate ``B + alpha`` meets ``B``
in at most one point: two overlap points would witness the dependency
``y1 - x1 - y2 + x2 = 0``.  Dependent sets can overlap arbitrarily, e.g.
an arithmetic progression shifted by its step.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import InvalidInput
from .intervals import RationalLike, as_fraction

QPoint = tuple[Fraction, ...]


def qpoint(coords: Sequence[RationalLike]) -> QPoint:
    return tuple(as_fraction(c) for c in coords)


def _check_same_dimension(points: Sequence[QPoint]) -> int:
    if not points:
        raise InvalidInput("need at least one point")
    dim = len(points[0])
    if any(len(p) != dim for p in points):
        raise InvalidInput("all points must share one dimension")
    return dim


def rank(points: Sequence[QPoint]) -> int:
    """Rank over the rationals, by exact Gaussian elimination."""
    if not points:
        return 0
    dim = _check_same_dimension(points)
    rows = [list(p) for p in points]
    r = 0
    for col in range(dim):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][col]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col] / lead
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r


def is_independent(points: Sequence[QPoint]) -> bool:
    """True when the points are linearly independent over the rationals.

    A set containing the zero vector or a repeated point is dependent.
    """
    if not points:
        return True
    if len(set(points)) != len(points):
        return False
    return rank(points) == len(points)


def translate_overlap(points: Sequence[QPoint], alpha: QPoint) -> list[QPoint]:
    """Sorted ``(B + alpha) intersect B`` for a nonzero shift ``alpha``."""
    dim = _check_same_dimension(points)
    if len(alpha) != dim:
        raise InvalidInput(f"shift has dimension {len(alpha)}, points have {dim}")
    if all(c == 0 for c in alpha):
        raise InvalidInput("the shift must be nonzero")
    base = set(points)
    shifted = {tuple(c + d for c, d in zip(p, alpha)) for p in points}
    return sorted(base & shifted)
