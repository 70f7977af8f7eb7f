"""Compact subsets of the line, their Hausdorff metric, and dense families.

A :class:`CompactRep` is a canonical finite union of closed rational
intervals (points are degenerate intervals): sorted, disjoint, merged.
For two such unions the Hausdorff distance is an exact rational: the
directed distance from ``A`` to ``B`` is piecewise linear in the probe
point with breakpoints at interval endpoints of ``A`` and midpoints of
the gaps of ``B``, so a finite candidate scan is exact.

:func:`dense_approx` witnesses the density of two structured families in
the hyperspace of compacts: given any target and ``eps`` it returns a
finite union of translates of a single small *seed* member within
Hausdorff distance ``eps`` of the target.  The seed is either

* a scaled ternary-set stage (arbitrarily small pieces of the
  middle-thirds set, gauge-visible), or
* a scaled truncated Davies cloud (finite shadow of a set no gauge
  measure sees), scaled by a power of two to keep coordinates rational.

Translates sit on a net of points chosen on the target itself, which
gives the two-sided distance bound directly; the returned certificate is
checked by :func:`hausdorff_distance` before the result is released.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .davies import DyadicFiltration, GoodSequence, build_bk_points
from .errors import InvalidInput
from .gaps import build_cantor, middle_thirds
from .intervals import RatInterval, RationalLike, as_fraction


@dataclass(frozen=True)
class CompactRep:
    """Canonical form: sorted disjoint closed intervals, possibly degenerate."""

    intervals: tuple[RatInterval, ...]
    provenance: Mapping[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not self.intervals:
            raise InvalidInput("a compact representation cannot be empty")
        for left, right in zip(self.intervals, self.intervals[1:]):
            if not left.hi < right.lo:
                raise InvalidInput(
                    "canonical intervals must be sorted, disjoint, and non-touching"
                )

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_intervals(
        cls,
        items: Iterable[RatInterval],
        provenance: Mapping[str, object] | None = None,
    ) -> "CompactRep":
        """Sort and merge overlapping or touching intervals."""
        pool = sorted(items, key=lambda iv: (iv.lo, iv.hi))
        if not pool:
            raise InvalidInput("a compact representation cannot be empty")
        merged: list[RatInterval] = [pool[0]]
        for iv in pool[1:]:
            last = merged[-1]
            if iv.lo <= last.hi:
                merged[-1] = RatInterval(last.lo, max(last.hi, iv.hi))
            else:
                merged.append(iv)
        return cls(intervals=tuple(merged), provenance=provenance or {})

    @classmethod
    def from_points(
        cls,
        points: Iterable[RationalLike],
        provenance: Mapping[str, object] | None = None,
    ) -> "CompactRep":
        return cls.from_intervals(
            (RatInterval.exact(p) for p in points), provenance=provenance
        )

    # -- geometry ---------------------------------------------------------

    @property
    def support_min(self) -> Fraction:
        return self.intervals[0].lo

    @property
    def support_max(self) -> Fraction:
        return self.intervals[-1].hi

    @property
    def diameter(self) -> Fraction:
        return self.support_max - self.support_min

    @cached_property
    def _lower_bounds(self) -> list[Fraction]:
        return [iv.lo for iv in self.intervals]

    def shift(self, offset: RationalLike) -> "CompactRep":
        d = as_fraction(offset)
        return CompactRep(
            intervals=tuple(iv.shift(d) for iv in self.intervals),
            provenance=dict(self.provenance),
        )

    def scale(self, factor: RationalLike) -> "CompactRep":
        f = as_fraction(factor)
        if f <= 0:
            raise InvalidInput("scale factor must be positive")
        return CompactRep(
            intervals=tuple(iv.scale(f) for iv in self.intervals),
            provenance=dict(self.provenance),
        )


def point_to_set_distance(x: Fraction, rep: CompactRep) -> Fraction:
    """Exact distance from a point to a canonical union of intervals.

    Because the intervals are sorted and pairwise disjoint, the nearest
    one is adjacent to the insertion point of ``x`` among the lower
    endpoints, so two probes suffice.
    """
    idx = bisect_left(rep._lower_bounds, x)
    best: Fraction | None = None
    for iv in rep.intervals[max(0, idx - 1) : idx + 1]:
        if iv.lo <= x <= iv.hi:
            return Fraction(0)
        d = iv.lo - x if x < iv.lo else x - iv.hi
        if best is None or d < best:
            best = d
    return best


def _directed_distance(a: CompactRep, b: CompactRep) -> Fraction:
    """``sup over x in A`` of ``dist(x, B)``, exact via a candidate scan.

    Within each interval of ``A`` the distance to ``B`` is piecewise
    linear with slope in {-1, 0, 1}; its maximum over the interval sits
    at an endpoint or at a midpoint between consecutive intervals of
    ``B``, so those points are the only candidates.
    """
    gap_midpoints = [
        (left.hi + right.lo) / 2 for left, right in zip(b.intervals, b.intervals[1:])
    ]
    worst = Fraction(0)
    for iv in a.intervals:
        candidates = [iv.lo, iv.hi]
        candidates.extend(m for m in gap_midpoints if iv.lo < m < iv.hi)
        for x in candidates:
            d = point_to_set_distance(x, b)
            if d > worst:
                worst = d
    return worst


def hausdorff_distance(a: CompactRep, b: CompactRep) -> RatInterval:
    """Exact Hausdorff distance between two canonical compacta."""
    return RatInterval.exact(max(_directed_distance(a, b), _directed_distance(b, a)))


# ---------------------------------------------------------------------------
# Seeds and density witnesses
# ---------------------------------------------------------------------------


VISIBLE_FAMILY = "visible-ternary"
INVISIBLE_FAMILY = "invisible-cloud"
FAMILIES = (VISIBLE_FAMILY, INVISIBLE_FAMILY)

_FAMILY_ALIASES = {
    VISIBLE_FAMILY: VISIBLE_FAMILY,
    "visible": VISIBLE_FAMILY,
    "hvisible": VISIBLE_FAMILY,
    "h-visible": VISIBLE_FAMILY,
    INVISIBLE_FAMILY: INVISIBLE_FAMILY,
    "invisible": INVISIBLE_FAMILY,
    "strongly-invisible": INVISIBLE_FAMILY,
}


def normalize_family(name: str) -> str:
    """Map a family name or accepted alias to its canonical identifier."""
    try:
        return _FAMILY_ALIASES[name.strip().lower()]
    except KeyError:
        raise InvalidInput(
            f"unknown family {name!r}; choose one of {FAMILIES}"
        ) from None


def ternary_seed(max_diameter: Fraction, *, stage_depth: int = 2) -> CompactRep:
    """A scaled ternary stage of diameter ``3**-j <= max_diameter``.

    Represents the clopen piece of the middle-thirds set living on
    ``[0, 3**-j]``; the stored intervals are its construction stage of
    depth ``stage_depth`` inside that piece.
    """
    if max_diameter <= 0:
        raise InvalidInput("seed diameter bound must be positive")
    j = 0
    scale = Fraction(1)
    while scale > max_diameter:
        j += 1
        scale = Fraction(1, 3**j)
    stage = build_cantor(middle_thirds(stage_depth), stage_depth)
    return CompactRep(
        intervals=tuple(iv.scale(scale) for iv in stage.pieces),
        provenance={
            "family": VISIBLE_FAMILY,
            "seed": "middle-thirds piece",
            "scale_level": j,
            "stage_depth": stage_depth,
        },
    )


def cloud_seed(max_diameter: Fraction, *, truncation: int = 8) -> CompactRep:
    """A truncated Davies cloud scaled by a power of two below the bound."""
    if max_diameter <= 0:
        raise InvalidInput("seed diameter bound must be positive")
    base = build_bk_points(GoodSequence.default(truncation), DyadicFiltration(), 1)
    diameter = base.diameter
    s = 0
    while diameter * Fraction(1, 2**s) > max_diameter:
        s += 1
    factor = Fraction(1, 2**s)
    return CompactRep.from_points(
        (p * factor for p in base.points),
        provenance={
            "family": INVISIBLE_FAMILY,
            "seed": "davies cloud k=1",
            "truncation": truncation,
            "scale_power": s,
        },
    )


def _net_on(rep: CompactRep, spacing: Fraction) -> list[Fraction]:
    """Points on the set, left to right, consecutive gaps at most ``spacing``."""
    net: list[Fraction] = []
    for iv in rep.intervals:
        x = iv.lo
        net.append(x)
        while x + spacing < iv.hi:
            x += spacing
            net.append(x)
        if iv.hi != net[-1]:
            net.append(iv.hi)
    return net


@dataclass(frozen=True)
class DensityWitness:
    output: CompactRep
    seed: CompactRep
    translations: tuple[Fraction, ...]
    distance: Fraction
    epsilon: Fraction

    @property
    def within_epsilon(self) -> bool:
        return self.distance <= self.epsilon


def dense_approx(
    target: CompactRep, epsilon: RationalLike, family: str
) -> DensityWitness:
    """A union of translates of one seed within ``epsilon`` of ``target``.

    The seed has diameter at most ``epsilon / 2`` and a translate is
    anchored (by its left end) at every point of an ``epsilon / 2``-net
    chosen on the target, so each side of the Hausdorff bound holds by
    construction; the exact distance is computed and checked anyway.
    """
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise InvalidInput("epsilon must be positive")
    family = normalize_family(family)
    if family == VISIBLE_FAMILY:
        seed = ternary_seed(eps / 2)
    else:
        seed = cloud_seed(eps / 2)
    anchors = _net_on(target, eps / 2)
    base = seed.shift(-seed.support_min)  # left end at 0
    translated = [iv.shift(a) for a in anchors for iv in base.intervals]
    output = CompactRep.from_intervals(
        translated,
        provenance={
            "family": family,
            "seed": dict(seed.provenance),
            "translates": len(anchors),
        },
    )
    distance = hausdorff_distance(output, target).exact_value()
    if distance > eps:
        raise InvalidInput(
            f"internal certificate failed: distance {distance} exceeds {eps}"
        )
    return DensityWitness(
        output=output,
        seed=seed,
        translations=tuple(anchors),
        distance=distance,
        epsilon=eps,
    )
