"""Gauge functions and certified covering bounds.

A gauge is a continuous nondecreasing function ``h`` on ``[0, oo)`` with
``h(0) = 0``.  Applying ``h`` to the diameters of a cover and summing
gives the quantity whose infimum over fine covers is the ``h``-measure;
this module works with two computable stand-ins for that infimum:

* :func:`natural_cover_sum`, the sum over one construction level, and
* :func:`min_cover_oracle`, the exact minimum over covers by open hulls
  of consecutive pieces subject to a diameter cap.

For a regular assignment with ``n``-ary branching, :func:`synth_gauge`
builds the canonical plateau gauge: constant ``n**-k`` across the range
of level-``k`` diameters, linear in between, linear down to ``h(0) = 0``
below the deepest stored plateau, and frozen at ``n**-1`` above the
shallowest.  Every level-``k`` diameter then contributes exactly
``n**-k``, so the level-``k`` natural cover sum is exactly 1.

The associated visibility constant is ``c = n**-(j0+1)`` where ``j0`` is
the least exponent with ``n**j0 > l``; together with the cover oracle it
brackets the measure of the assignment body inside ``[c, 1]``.

Gauge evaluation returns :class:`RatInterval` enclosures so that a pair
of piecewise-linear gauges can sandwich an irrational gauge; the exact
gauges used in practice return degenerate enclosures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol, Sequence

from .errors import Inconclusive, InfeasibleCover, InvalidInput
from .gaps import CantorApprox
from .intervals import RatInterval, RationalLike, as_fraction, interval_sum
from .trees import DiameterProfile, TAssignment, diameter_profile


class Gauge(Protocol):
    """Evaluate the gauge at an exact nonnegative rational point."""

    def eval(self, t: Fraction) -> RatInterval: ...


def _require_nonnegative(t: Fraction) -> Fraction:
    if t < 0:
        raise InvalidInput(f"gauges are defined on [0, oo), got {t}")
    return t


@dataclass(frozen=True)
class PlateauGauge:
    """Piecewise-linear gauge that is constant ``value_k`` on plateau ``k``.

    ``plateaus`` are ``(lo, hi, value)`` triples sorted by increasing
    ``lo`` with strictly increasing values; consecutive plateaus must not
    overlap.  Below the first plateau the gauge drops linearly to the
    origin, above the last it stays at the last value.
    """

    plateaus: tuple[tuple[Fraction, Fraction, Fraction], ...]

    def __post_init__(self):
        if not self.plateaus:
            raise InvalidInput("a plateau gauge needs at least one plateau")
        prev_hi = None
        prev_value = None
        for lo, hi, value in self.plateaus:
            if not (0 < lo <= hi):
                raise InvalidInput(f"plateau [{lo}, {hi}] must sit inside (0, oo)")
            if value <= 0:
                raise InvalidInput("plateau values must be positive")
            if prev_hi is not None and lo <= prev_hi:
                raise InvalidInput("plateaus must be disjoint and increasing")
            if prev_value is not None and value <= prev_value:
                raise InvalidInput("plateau values must increase with scale")
            prev_hi, prev_value = hi, value

    def eval(self, t: RationalLike) -> RatInterval:
        t = _require_nonnegative(as_fraction(t))
        first_lo = self.plateaus[0][0]
        if t <= first_lo:
            # linear from (0,0) to the start of the deepest plateau
            v = self.plateaus[0][2] * t / first_lo
            return RatInterval.exact(v)
        for i, (lo, hi, value) in enumerate(self.plateaus):
            if lo <= t <= hi:
                return RatInterval.exact(value)
            nxt = self.plateaus[i + 1] if i + 1 < len(self.plateaus) else None
            if nxt is not None and hi < t < nxt[0]:
                span = nxt[0] - hi
                v = value + (nxt[2] - value) * (t - hi) / span
                return RatInterval.exact(v)
        return RatInterval.exact(self.plateaus[-1][2])


@dataclass(frozen=True)
class IdentityGauge:
    """``h(t) = t``; sums of it measure plain length."""

    def eval(self, t: RationalLike) -> RatInterval:
        return RatInterval.exact(_require_nonnegative(as_fraction(t)))


@dataclass(frozen=True)
class TabulatedGauge:
    """Linear interpolation through rational breakpoints starting at (0, 0)."""

    breakpoints: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pts = self.breakpoints
        if not pts or pts[0] != (Fraction(0), Fraction(0)):
            raise InvalidInput("tabulated gauges must start at the breakpoint (0, 0)")
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t1 <= t0:
                raise InvalidInput("breakpoint abscissae must strictly increase")
            if v1 < v0:
                raise InvalidInput("gauge values must be nondecreasing")

    @classmethod
    def through(cls, points: Sequence[tuple[RationalLike, RationalLike]]) -> "TabulatedGauge":
        return cls(tuple((as_fraction(t), as_fraction(v)) for t, v in points))

    def eval(self, t: RationalLike) -> RatInterval:
        t = _require_nonnegative(as_fraction(t))
        pts = self.breakpoints
        if t >= pts[-1][0]:
            return RatInterval.exact(pts[-1][1])
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t0 <= t <= t1:
                v = v0 + (v1 - v0) * (t - t0) / (t1 - t0)
                return RatInterval.exact(v)
        raise InvalidInput(f"gauge evaluation fell outside the table at {t}")


@dataclass(frozen=True)
class EnclosureGauge:
    """Sandwich of an un-representable gauge between two rational ones."""

    lower: Gauge
    upper: Gauge

    def eval(self, t: RationalLike) -> RatInterval:
        t = as_fraction(t)
        lo = self.lower.eval(t).lo
        hi = self.upper.eval(t).hi
        if lo > hi:
            raise InvalidInput("enclosure gauge has lower above upper")
        return RatInterval(lo, hi)


def synth_gauge(profile: DiameterProfile, branching: int) -> PlateauGauge:
    """Plateau gauge with ``h = branching**-k`` across level ``k`` diameters.

    Requires the profile to be regular (certified strict separation of
    consecutive levels); the plateau for level ``k`` spans the outer hull
    of the stored min and max diameters.
    """
    if branching < 2:
        raise InvalidInput(f"branching must be >= 2, got {branching}")
    plateaus = []
    for k in range(profile.depth, 0, -1):
        lo = profile.min_at(k).lo
        hi = profile.max_at(k).hi
        plateaus.append((lo, hi, Fraction(1, branching**k)))
    for (lo0, hi0, _), (lo1, _, _) in zip(plateaus, plateaus[1:]):
        if not hi0 < lo1:
            raise Inconclusive(
                "profile levels are not separated; synthesize from a regular assignment",
                overlap=hi0 - lo1,
            )
    return PlateauGauge(plateaus=tuple(plateaus))


def eval_gauge(gauge: Gauge, t: RatInterval | RationalLike) -> RatInterval:
    """Enclosure of ``h([t])``; monotonicity reduces it to the endpoints."""
    if not isinstance(t, RatInterval):
        t = RatInterval.exact(as_fraction(t))
    return RatInterval(gauge.eval(t.lo).lo, gauge.eval(t.hi).hi)


def natural_cover_sum(assignment: TAssignment, gauge: Gauge, k: int) -> RatInterval:
    """Sum of gauge values of the level-``k`` diameters."""
    level = assignment.level(k)
    return interval_sum(eval_gauge(gauge, iv.width) for iv in level)


def certified_constant(branching: int, l: int) -> tuple[int, Fraction]:
    """Least ``j0`` with ``branching**j0 > l`` and the constant ``n**-(j0+1)``."""
    if branching < 2:
        raise InvalidInput(f"branching must be >= 2, got {branching}")
    if l < 1:
        raise InvalidInput(f"l must be >= 1, got {l}")
    j0 = 1
    while branching**j0 <= l:
        j0 += 1
    return j0, Fraction(1, branching ** (j0 + 1))


# ---------------------------------------------------------------------------
# Minimum-weight covers by runs of consecutive pieces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoverProblem:
    """Cover the pieces of ``stage`` by open hulls of consecutive runs.

    A run ``(i, j)`` covers pieces ``i..j``; its weight is the gauge
    value of the hull diameter ``pieces[j].hi - pieces[i].lo``, and it is
    admissible when that diameter is at most ``delta``.
    """

    stage: CantorApprox
    gauge: Gauge
    delta: Fraction

    def __post_init__(self):
        if self.delta <= 0:
            raise InvalidInput(f"delta must be positive, got {self.delta}")

    def hull_diameter(self, i: int, j: int) -> Fraction:
        return self.stage.pieces[j].hi - self.stage.pieces[i].lo


@dataclass(frozen=True)
class CoverResult:
    value_lo: Fraction
    value_hi: Fraction
    delta: Fraction
    depth: int
    runs: tuple[tuple[int, int], ...]

    @property
    def bracket(self) -> RatInterval:
        return RatInterval(self.value_lo, self.value_hi)


def min_cover_oracle(problem: CoverProblem) -> CoverResult:
    """Exact minimum weight of an admissible cover, as a bracket.

    Any cover by runs can be trimmed to a partition into disjoint runs
    without increasing hull diameters, so a shortest-path scan over
    piece boundaries computes the true minimum.  With an enclosure gauge
    the scan runs separately on the lower and upper weights; the
    reported run list achieves ``value_hi`` and every admissible cover
    weighs at least ``value_lo``.
    """
    pieces = problem.stage.pieces
    n = len(pieces)
    for idx, piece in enumerate(pieces):
        if piece.width > problem.delta:
            raise InfeasibleCover(
                f"piece {idx} has diameter {piece.width} above the cap {problem.delta}"
            )

    weights: dict[tuple[int, int], RatInterval] = {}
    for i in range(n):
        for j in range(i, n):
            diam = problem.hull_diameter(i, j)
            if diam > problem.delta:
                break  # hulls only widen as j grows
            weights[(i, j)] = eval_gauge(problem.gauge, diam)

    INF = None
    dp_lo: list[Fraction | None] = [INF] * (n + 1)
    dp_hi: list[Fraction | None] = [INF] * (n + 1)
    choice: list[int | None] = [None] * (n + 1)
    dp_lo[0] = Fraction(0)
    dp_hi[0] = Fraction(0)
    for end in range(1, n + 1):
        for start in range(end - 1, -1, -1):
            w = weights.get((start, end - 1))
            if w is None:
                break
            if dp_lo[start] is not None:
                cand = dp_lo[start] + w.lo
                if dp_lo[end] is None or cand < dp_lo[end]:
                    dp_lo[end] = cand
            if dp_hi[start] is not None:
                cand = dp_hi[start] + w.hi
                if dp_hi[end] is None or cand < dp_hi[end]:
                    dp_hi[end] = cand
                    choice[end] = start
                elif cand == dp_hi[end] and start < choice[end]:
                    # deterministic certificate: prefer the longest run
                    choice[end] = start
    if dp_hi[n] is None or dp_lo[n] is None:
        raise InfeasibleCover("no admissible cover exists under the diameter cap")

    runs: list[tuple[int, int]] = []
    end = n
    while end > 0:
        start = choice[end]
        runs.append((start, end - 1))
        end = start
    runs.reverse()
    return CoverResult(
        value_lo=dp_lo[n],
        value_hi=dp_hi[n],
        delta=problem.delta,
        depth=problem.stage.depth,
        runs=tuple(runs),
    )


def measure_bracket(
    assignment: TAssignment,
    gauge: Gauge,
    k: int,
    delta: Fraction | None = None,
) -> CoverResult:
    """Cover oracle for level ``k`` with the default cap ``max diameter``."""
    from .trees import body_approx

    profile = diameter_profile(assignment)
    cap = profile.max_at(k).hi if delta is None else delta
    stage = body_approx(assignment, k)
    return min_cover_oracle(CoverProblem(stage=stage, gauge=gauge, delta=cap))
