"""Finitely-branching trees of nested open intervals.

A depth-``K`` assignment attaches one nonempty open interval to every
node of the full ``n``-ary tree of words of length 1..K.  The classical
conditions for such a family to carve out a Cantor-type compact are:

1. every interval is nonempty and open;
2. an interval at level ``k`` has diameter strictly below ``1/k``;
3. intervals at the same level are pairwise disjoint;
4. each child's closure is contained in its parent.

Condition 4 is checked on closures (child closure inside parent
closure, endpoints allowed to touch).  The canonical assignments built
from a gap function share endpoints between a parent and its extreme
children, so demanding the open-interval containment would reject the
very families the construction produces; the separating gaps already
keep distinct branches strictly apart, which is all the downstream
covering arguments use.

An assignment is *regular* when the largest level-``k+1`` diameter is
strictly smaller than the smallest level-``k`` diameter.

The *l-intersection* condition asks that every open ball meeting at
least ``l`` same-level intervals contain the closure of one of them.
On the line this reduces to windows of consecutive intervals: a ball
meeting three or more sorted disjoint intervals straddles a middle one
entirely, so for ``l >= 3`` the condition is automatic, while for
``l = 2`` a ball reaching only from the interior of one interval into
the interior of its right neighbour contains no closure at all, and such
a ball exists as soon as a level has two intervals.  The brute-force
quantifier over balls survives in the test-suite as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import Inconclusive, InvalidInput
from .gaps import CantorApprox, GapFunction, GapSequence, build_cantor, phi_from_alpha
from .intervals import RatInterval

Verdict = str  # "true" | "false" | "inconclusive"


@dataclass(frozen=True)
class TAssignment:
    """Intervals per level for a full ``branching``-ary tree.

    ``levels[k]`` holds the ``branching**(k+1)`` open intervals of level
    ``k+1`` sorted left to right, which for the orientation-preserving
    assignments used here is also lexicographic word order; node ``i``
    at a level has parent ``i // branching`` one level up.
    """

    branching: int
    levels: tuple[tuple[RatInterval, ...], ...]

    def __post_init__(self):
        if self.branching < 2:
            raise InvalidInput(f"branching must be >= 2, got {self.branching}")
        if not self.levels:
            raise InvalidInput("assignment needs at least one level")
        for k, level in enumerate(self.levels, start=1):
            if len(level) != self.branching**k:
                raise InvalidInput(
                    f"level {k} must hold {self.branching ** k} intervals, got {len(level)}"
                )
            for left, right in zip(level, level[1:]):
                if left.lo > right.lo:
                    raise InvalidInput(f"level {k} intervals are not sorted left to right")

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, k: int) -> tuple[RatInterval, ...]:
        if not (1 <= k <= self.depth):
            raise InvalidInput(f"level {k} out of range 1..{self.depth}")
        return self.levels[k - 1]

    def parent(self, k: int, i: int) -> RatInterval:
        return self.levels[k - 2][i // self.branching]


@dataclass(frozen=True)
class ConditionReport:
    verdict: Verdict
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    nonempty: ConditionReport
    diameter_bound: ConditionReport
    same_level_disjoint: ConditionReport
    nested_closures: ConditionReport

    @property
    def ok(self) -> bool:
        return all(
            c.verdict == "true"
            for c in (
                self.nonempty,
                self.diameter_bound,
                self.same_level_disjoint,
                self.nested_closures,
            )
        )

    @property
    def conditions(self) -> dict[str, ConditionReport]:
        return {
            "nonempty": self.nonempty,
            "diameter_bound": self.diameter_bound,
            "same_level_disjoint": self.same_level_disjoint,
            "nested_closures": self.nested_closures,
        }


def _check(pred) -> ConditionReport:
    try:
        failure = pred()
    except Inconclusive as exc:
        return ConditionReport("inconclusive", str(exc))
    if failure is None:
        return ConditionReport("true")
    return ConditionReport("false", failure)


def validate_assignment(assignment: TAssignment) -> ValidationReport:
    """Certify conditions 1 to 4; each reports true, false, or inconclusive."""

    def nonempty():
        for k, level in enumerate(assignment.levels, start=1):
            for i, interval in enumerate(level):
                if not interval.lo < interval.hi:
                    return f"level {k} node {i} is empty"
        return None

    def diameter_bound():
        for k, level in enumerate(assignment.levels, start=1):
            cap = Fraction(1, k)
            for i, interval in enumerate(level):
                if not interval.width < cap:
                    return f"level {k} node {i} has diameter {interval.width} >= 1/{k}"
        return None

    def same_level_disjoint():
        # sorted order reduces pairwise disjointness to adjacent pairs;
        # open intervals may share an endpoint and remain disjoint
        for k, level in enumerate(assignment.levels, start=1):
            for i, (left, right) in enumerate(zip(level, level[1:])):
                if not left.hi <= right.lo:
                    return f"level {k} nodes {i},{i + 1} overlap"
        return None

    def nested_closures():
        for k in range(2, assignment.depth + 1):
            for i, child in enumerate(assignment.level(k)):
                parent = assignment.parent(k, i)
                if not (parent.lo <= child.lo and child.hi <= parent.hi):
                    return f"level {k} node {i} leaves its parent"
        return None

    return ValidationReport(
        nonempty=_check(nonempty),
        diameter_bound=_check(diameter_bound),
        same_level_disjoint=_check(same_level_disjoint),
        nested_closures=_check(nested_closures),
    )


# ---------------------------------------------------------------------------
# Construction from a decreasing gap sequence
# ---------------------------------------------------------------------------


def assignment_from_phi(phi: GapFunction, depth: int) -> TAssignment:
    """Binary assignment whose level-``k`` closures are the construction pieces.

    The node addressed by the word ``sigma`` receives the open interval
    from the end of the gap at ``d_sigma`` to the start of the gap at
    ``d_sigma + 2^-k``, i.e. the interior of the corresponding piece of
    the gap-function construction.  The result is validated; a gap
    function whose pieces break one of the four conditions is rejected.
    """
    if depth < 1:
        raise InvalidInput(f"depth must be >= 1, got {depth}")
    levels = []
    for k in range(1, depth + 1):
        stage = build_cantor(phi, k)
        levels.append(tuple(RatInterval(p.lo, p.hi) for p in stage.pieces))
    assignment = TAssignment(branching=2, levels=tuple(levels))
    report = validate_assignment(assignment)
    if not report.ok:
        bad = {name: c for name, c in report.conditions.items() if c.verdict != "true"}
        raise InvalidInput(f"constructed assignment failed validation: {bad}")
    return assignment


def assignment_from_alpha(
    alpha: GapSequence, depth: int, *, resolution: int | None = None
) -> TAssignment:
    """Assignment of the gap-function construction driven by ``alpha``."""
    res = depth if resolution is None else resolution
    if res < depth:
        raise InvalidInput(f"resolution {res} is below the requested depth {depth}")
    return assignment_from_phi(phi_from_alpha(alpha, res), depth)


def body_approx(assignment: TAssignment, k: int) -> CantorApprox:
    """Closures of the level-``k`` intervals as a construction stage."""
    level = assignment.level(k)
    if assignment.branching != 2:
        raise InvalidInput("body_approx is defined for binary assignments")
    return CantorApprox(depth=k, pieces=tuple(level))


# ---------------------------------------------------------------------------
# Diameter profile and regularity
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiameterProfile:
    """Per-level smallest and largest diameters, as exact enclosures."""

    min_diams: tuple[RatInterval, ...]
    max_diams: tuple[RatInterval, ...]

    @property
    def depth(self) -> int:
        return len(self.min_diams)

    def min_at(self, k: int) -> RatInterval:
        return self.min_diams[k - 1]

    def max_at(self, k: int) -> RatInterval:
        return self.max_diams[k - 1]


def diameter_profile(assignment: TAssignment) -> DiameterProfile:
    mins, maxs = [], []
    for level in assignment.levels:
        widths = [iv.width for iv in level]
        mins.append(RatInterval.exact(min(widths)))
        maxs.append(RatInterval.exact(max(widths)))
    return DiameterProfile(min_diams=tuple(mins), max_diams=tuple(maxs))


def check_regular(assignment: TAssignment) -> bool:
    """Certified: every level-``k+1`` diameter < every level-``k`` diameter."""
    profile = diameter_profile(assignment)
    for k in range(1, profile.depth):
        if not profile.max_at(k + 1).hi < profile.min_at(k).lo:
            if profile.max_at(k + 1).lo >= profile.min_at(k).hi:
                return False
            raise Inconclusive(
                f"regularity between levels {k} and {k + 1} is not separated",
                overlap=profile.max_at(k + 1).hi - profile.min_at(k).lo,
            )
    return True


# ---------------------------------------------------------------------------
# l-intersection condition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ball:
    """Open ball on the line, stored as (center, radius) with rational data."""

    center: Fraction
    radius: Fraction

    @property
    def lo(self) -> Fraction:
        return self.center - self.radius

    @property
    def hi(self) -> Fraction:
        return self.center + self.radius

    def meets_open(self, interval: RatInterval) -> bool:
        return self.lo < interval.hi and interval.lo < self.hi

    def contains_closure(self, interval: RatInterval) -> bool:
        return self.lo < interval.lo and interval.hi < self.hi


@dataclass(frozen=True)
class IntersectionReport:
    verdict: bool
    l: int
    vacuous_levels: tuple[int, ...]
    witness: Ball | None = None
    witness_level: int | None = None


def check_l_intersection(assignment: TAssignment, l: int) -> IntersectionReport:
    """Window reduction of the ball condition for sorted disjoint intervals.

    For ``l >= 3`` any ball meeting ``l`` intervals straddles an entire
    middle one, so the condition holds wherever it is not vacuous.  For
    ``l = 2`` a sliver ball between the midpoints of an adjacent pair is
    a counterexample whenever a level has two intervals; the returned
    witness makes the failure checkable by direct evaluation.
    """
    if l < 2:
        raise InvalidInput(f"l must be >= 2, got {l}")
    vacuous = tuple(
        k for k, level in enumerate(assignment.levels, start=1) if len(level) < l
    )
    if l >= 3:
        return IntersectionReport(verdict=True, l=l, vacuous_levels=vacuous)
    for k, level in enumerate(assignment.levels, start=1):
        if len(level) < 2:
            continue
        left, right = level[0], level[1]
        witness = Ball(
            center=(left.midpoint + right.midpoint) / 2,
            radius=(right.midpoint - left.midpoint) / 2,
        )
        return IntersectionReport(
            verdict=False, l=l, vacuous_levels=vacuous, witness=witness, witness_level=k
        )
    return IntersectionReport(verdict=True, l=l, vacuous_levels=vacuous)


def ball_violates(level: Sequence[RatInterval], ball: Ball, l: int) -> bool:
    """Direct evaluation: ball meets >= l intervals yet contains no closure."""
    met = [iv for iv in level if ball.meets_open(iv)]
    if len(met) < l:
        return False
    return not any(ball.contains_closure(iv) for iv in met)
