"""Gap-function model of Cantor sets on the unit interval.

A Cantor set here is the complement in ``[0, 1]`` of countably many open
gaps, one per dyadic rational ``d = (2s+1)/2^j`` in ``(0, 1)``.  The gap
anchored at ``d`` has length ``phi(d)`` and sits at position
``Phi(d) = sum of phi over dyadics strictly left of d``; the lengths sum
to 1, so the remaining set has measure zero.

We never store the infinitely many gap lengths.  A :class:`GapFunction`
keeps the lengths for dyadics of level at most ``resolution`` plus one
*residual* mass per depth-``resolution`` leaf, the total mass buried
strictly inside that leaf.  Because residuals attach to whole leaves,
every cut at a stored dyadic splits the mass exactly, and all endpoints
of the depth-``k`` construction pieces (``k <= resolution``) are exact
rationals.

Gap lengths are fed in breadth-first order from a decreasing sequence
``alpha``: level ``j`` consumes ``alpha(2^(j-1)) .. alpha(2^j - 1)``
left to right, so ``phi(1/2) = alpha(1)``, ``phi(1/4) = alpha(2)``,
``phi(3/4) = alpha(3)``, and in general
``phi((2s+1)/2^j) = alpha(2^(j-1) + s)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import BudgetExceeded, InvalidInput, ResolutionExceeded
from .intervals import RatInterval, RationalLike, as_fraction

DEFAULT_ENUM_BUDGET = 2**20


# ---------------------------------------------------------------------------
# Dyadic addresses
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=False)
class Dyadic:
    """A dyadic rational ``num / 2**level`` in ``(0, 1)`` with ``num`` odd."""

    num: int
    level: int

    def __post_init__(self):
        if self.level < 1:
            raise InvalidInput(f"dyadic level must be >= 1, got {self.level}")
        if not (0 < self.num < 2**self.level):
            raise InvalidInput(f"dyadic numerator {self.num} out of range for level {self.level}")
        if self.num % 2 == 0:
            raise InvalidInput(f"dyadic numerator must be odd, got {self.num}/2^{self.level}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, 2**self.level)

    @property
    def index(self) -> int:
        """Breadth-first index: level j, offset s maps to ``2^(j-1) + s``."""
        return 2 ** (self.level - 1) + (self.num - 1) // 2

    @classmethod
    def from_index(cls, index: int) -> "Dyadic":
        if index < 1:
            raise InvalidInput(f"breadth-first index must be >= 1, got {index}")
        level = index.bit_length()
        s = index - 2 ** (level - 1)
        return cls(2 * s + 1, level)

    @classmethod
    def from_fraction(cls, value: RationalLike) -> "Dyadic":
        v = as_fraction(value)
        if not (0 < v < 1):
            raise InvalidInput(f"dyadic must lie in (0,1), got {v}")
        den = v.denominator
        if den & (den - 1) != 0:
            raise InvalidInput(f"{v} is not dyadic")
        return cls(v.numerator, den.bit_length() - 1)

    def __lt__(self, other: "Dyadic") -> bool:
        return self.value < other.value


def dyadics_up_to_level(level: int) -> Iterable[Dyadic]:
    """All dyadics of level <= ``level`` in breadth-first index order."""
    for index in range(1, 2**level):
        yield Dyadic.from_index(index)


# ---------------------------------------------------------------------------
# Decreasing gap sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GapSequence:
    """A decreasing positive sequence with total mass exactly 1.

    Two kinds are supported.  ``geometric(r)`` is the fully closed-form
    sequence ``alpha(i) = (1-r) * r**(i-1)``.  An *explicit* sequence
    stores a strictly decreasing finite prefix together with the exact
    mass ``tail`` carried by all later terms; any operation that would
    need an individual term past the prefix refuses.
    """

    kind: str
    ratio: Fraction | None = None
    terms: tuple[Fraction, ...] = ()
    tail: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind == "geometric":
            if self.ratio is None or not (0 < self.ratio < 1):
                raise InvalidInput(f"geometric ratio must lie in (0,1), got {self.ratio}")
        elif self.kind == "explicit":
            if not self.terms:
                raise InvalidInput("explicit gap sequence needs at least one term")
            if any(t <= 0 for t in self.terms):
                raise InvalidInput("gap sequence terms must be positive")
            if any(a <= b for a, b in zip(self.terms, self.terms[1:])):
                raise InvalidInput("explicit gap sequence must be strictly decreasing")
            if self.tail < 0:
                raise InvalidInput("tail mass cannot be negative")
            total = sum(self.terms, Fraction(0)) + self.tail
            if total != 1:
                raise InvalidInput(f"gap sequence mass must be exactly 1, got {total}")
        else:
            raise InvalidInput(f"unknown gap sequence kind {self.kind!r}")

    @classmethod
    def geometric(cls, ratio: RationalLike) -> "GapSequence":
        return cls(kind="geometric", ratio=as_fraction(ratio))

    @classmethod
    def explicit(cls, terms: Sequence[RationalLike], tail: RationalLike = 0) -> "GapSequence":
        return cls(
            kind="explicit",
            terms=tuple(as_fraction(t) for t in terms),
            tail=as_fraction(tail),
        )

    def term(self, index: int) -> Fraction:
        """``alpha(index)`` with 1-based indexing."""
        if index < 1:
            raise InvalidInput(f"sequence index must be >= 1, got {index}")
        if self.kind == "geometric":
            return (1 - self.ratio) * self.ratio ** (index - 1)
        if index > len(self.terms):
            raise ResolutionExceeded(
                f"explicit gap sequence stores {len(self.terms)} terms, index {index} requested",
                required=index,
                available=len(self.terms),
            )
        return self.terms[index - 1]

    def tail_mass(self, start: int) -> Fraction:
        """Exact mass of all terms with index >= ``start``."""
        if self.kind == "geometric":
            # sum_{i >= start} (1-r) r^(i-1) telescopes to r^(start-1)
            return self.ratio ** (start - 1)
        stored = sum(self.terms[start - 1 :], Fraction(0)) if start <= len(self.terms) else Fraction(0)
        return stored + self.tail

    @property
    def known_prefix(self) -> int:
        """Largest index with an individually addressable term."""
        return len(self.terms) if self.kind == "explicit" else 2**62

    def is_strictly_decreasing_prefix(self, upto: int) -> bool:
        if self.kind == "geometric":
            return True
        upto = min(upto, len(self.terms))
        return all(a > b for a, b in zip(self.terms[: upto - 1], self.terms[1:upto]))


# ---------------------------------------------------------------------------
# Gap functions at finite resolution
# ---------------------------------------------------------------------------


class GapFunction:
    """Gap lengths for dyadics of level <= ``resolution`` plus leaf residuals.

    Invariants checked at construction: every stored gap length is
    positive, residuals are nonnegative, and the total mass (values plus
    residuals) is exactly 1.
    """

    def __init__(
        self,
        resolution: int,
        values: Mapping[Dyadic, Fraction],
        residuals: Sequence[Fraction],
    ):
        if resolution < 1:
            raise InvalidInput(f"resolution must be >= 1, got {resolution}")
        expected = [d for d in dyadics_up_to_level(resolution)]
        if set(values.keys()) != set(expected):
            raise InvalidInput(
                f"gap function at resolution {resolution} needs values exactly at "
                f"{2 ** resolution - 1} dyadics of level <= {resolution}"
            )
        if any(v <= 0 for v in values.values()):
            raise InvalidInput("all stored gap lengths must be positive")
        if len(residuals) != 2**resolution:
            raise InvalidInput(
                f"expected {2 ** resolution} leaf residuals, got {len(residuals)}"
            )
        if any(r < 0 for r in residuals):
            raise InvalidInput("leaf residuals cannot be negative")
        total = sum(values.values(), Fraction(0)) + sum(residuals, Fraction(0))
        if total != 1:
            raise InvalidInput(f"total mass must be exactly 1, got {total}")

        self.resolution = resolution
        self.values = dict(values)
        self.residuals = tuple(as_fraction(r) for r in residuals)
        self._boundary_mass, self._prefix = self._build_prefix()

    def _build_prefix(self) -> tuple[list[Fraction], list[Fraction]]:
        """Prefix sums of mass left of each depth-``resolution`` boundary."""
        n = 2**self.resolution
        boundary = [Fraction(0)] * (n + 1)  # gap length anchored at boundary c/2^R
        for d, mass in self.values.items():
            c = d.num * 2 ** (self.resolution - d.level)
            boundary[c] = mass
        prefix = [Fraction(0)] * (n + 1)
        running = Fraction(0)
        for c in range(1, n + 1):
            running += self.residuals[c - 1] + boundary[c - 1]
            prefix[c] = running
        return boundary, prefix

    # -- queries -------------------------------------------------------

    def value_at(self, d: Dyadic) -> Fraction:
        if d.level > self.resolution:
            raise ResolutionExceeded(
                f"gap length at level {d.level} exceeds stored resolution {self.resolution}",
                required=d.level,
                available=self.resolution,
            )
        return self.values[d]

    def cumulative_at(self, d: Dyadic) -> Fraction:
        """Exact left-mass ``Phi(d)`` for a stored dyadic ``d``."""
        if d.level > self.resolution:
            raise ResolutionExceeded(
                f"cut at level {d.level} exceeds stored resolution {self.resolution}",
                required=d.level,
                available=self.resolution,
            )
        c = d.num * 2 ** (self.resolution - d.level)
        return self._prefix[c]

    def total_mass(self) -> Fraction:
        return sum(self.values.values(), Fraction(0)) + sum(self.residuals, Fraction(0))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GapFunction)
            and self.resolution == other.resolution
            and self.values == other.values
            and self.residuals == other.residuals
        )

    def __repr__(self) -> str:
        return f"GapFunction(resolution={self.resolution}, gaps={len(self.values)})"


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def phi_from_alpha(
    alpha: GapSequence, resolution: int, *, budget: int = DEFAULT_ENUM_BUDGET
) -> GapFunction:
    """Lay out ``alpha`` breadth-first over the dyadic tree.

    Stored values are the exact terms ``alpha(1) .. alpha(2^R - 1)``.
    The mass below the resolution is attached to leaves: explicit terms
    past the prefix land in the leaf containing their dyadic, and the
    closed-form tail (which no finite prefix resolves further) is split
    evenly across leaves.  The split is a canonical modelling choice; it
    keeps every residual rational, keeps the total exactly 1, and
    perturbs nothing at the stored levels.
    """
    leaf_count = 2**resolution
    if leaf_count > budget:
        raise BudgetExceeded(
            f"resolution {resolution} needs {leaf_count} leaves, budget is {budget}",
            required=leaf_count,
            budget=budget,
        )
    if alpha.kind == "explicit" and len(alpha.terms) < leaf_count - 1:
        raise ResolutionExceeded(
            f"resolution {resolution} needs {leaf_count - 1} explicit terms, "
            f"got {len(alpha.terms)}",
            required=leaf_count - 1,
            available=len(alpha.terms),
        )

    values = {d: alpha.term(d.index) for d in dyadics_up_to_level(resolution)}

    residuals = [Fraction(0)] * leaf_count
    uniform_tail = alpha.tail if alpha.kind == "explicit" else alpha.tail_mass(leaf_count)
    if alpha.kind == "explicit":
        for index in range(leaf_count, len(alpha.terms) + 1):
            d = Dyadic.from_index(index)
            leaf = (d.num << resolution) >> d.level  # floor(value * 2^R)
            residuals[leaf] += alpha.term(index)
    share = uniform_tail / leaf_count
    for leaf in range(leaf_count):
        residuals[leaf] += share
    return GapFunction(resolution, values, residuals)


def middle_thirds(resolution: int) -> GapFunction:
    """The ternary set's gap function: level-``j`` gaps have length ``3^-j``.

    Exactly self-similar, so the residual of every depth-``R`` leaf is the
    true piece length ``3^-R`` and nothing is approximated.
    """
    values = {d: Fraction(1, 3**d.level) for d in dyadics_up_to_level(resolution)}
    residuals = [Fraction(1, 3**resolution)] * 2**resolution
    return GapFunction(resolution, values, residuals)


def cumulative_phi(phi: GapFunction, d: RationalLike | Dyadic) -> RatInterval:
    """Enclosure of ``Phi(d)``; degenerate whenever ``d`` is stored.

    Residuals attach to whole leaves, so any cut at a dyadic of level at
    most the resolution splits every mass contribution exactly.
    """
    dyadic = d if isinstance(d, Dyadic) else Dyadic.from_fraction(d)
    return RatInterval.exact(phi.cumulative_at(dyadic))


@dataclass(frozen=True)
class CantorApprox:
    """Depth-``k`` stage of a construction: ``2^k`` closed pieces, left to right."""

    depth: int
    pieces: tuple[RatInterval, ...]
    gaps_removed: tuple[tuple[Dyadic, RatInterval], ...] = field(default=(), repr=False)

    def __post_init__(self):
        if len(self.pieces) != 2**self.depth:
            raise InvalidInput(
                f"depth {self.depth} stage needs {2 ** self.depth} pieces, got {len(self.pieces)}"
            )
        for left, right in zip(self.pieces, self.pieces[1:]):
            if not left.hi < right.lo:
                raise InvalidInput("construction pieces must be disjoint and ordered")

    @property
    def diameters(self) -> tuple[Fraction, ...]:
        return tuple(p.width for p in self.pieces)


def build_cantor(phi: GapFunction, depth: int) -> CantorApprox:
    """Remove the gaps of level <= ``depth``; return the surviving pieces."""
    if depth < 0:
        raise InvalidInput(f"depth must be >= 0, got {depth}")
    if depth > phi.resolution:
        raise ResolutionExceeded(
            f"depth {depth} exceeds stored resolution {phi.resolution}",
            required=depth,
            available=phi.resolution,
        )
    gaps: list[tuple[Dyadic, RatInterval]] = []
    pieces: list[RatInterval] = []
    for m in range(1, 2**depth):
        d = Dyadic.from_fraction(Fraction(m, 2**depth))
        left = phi.cumulative_at(d)
        gaps.append((d, RatInterval(left, left + phi.value_at(d))))
    # piece m runs from the end of the gap on its left to the start of the
    # gap on its right
    for m in range(2**depth):
        lo = Fraction(0) if m == 0 else gaps[m - 1][1].hi
        hi = Fraction(1) if m == 2**depth - 1 else gaps[m][1].lo
        pieces.append(RatInterval(lo, hi))
    gaps_sorted = sorted(gaps, key=lambda item: (item[0].level, item[0].num))
    return CantorApprox(depth=depth, pieces=tuple(pieces), gaps_removed=tuple(gaps_sorted))


def extract_gaps(approx: CantorApprox) -> list[RatInterval]:
    """The open gaps between consecutive pieces, left to right."""
    return [
        RatInterval(left.hi, right.lo)
        for left, right in zip(approx.pieces, approx.pieces[1:])
    ]


def recover_phi(gaps: Sequence[RatInterval], resolution: int) -> GapFunction:
    """Rebuild a gap function from observed gaps of a measure-zero set.

    The canonical assignment sends the largest gap (ties broken leftmost)
    to the dyadic 1/2 and recurses into the regions on either side.  The
    gaps must be disjoint open intervals strictly inside ``(0, 1)``, and
    there must be exactly ``2^resolution - 1`` of them, distributed so
    every recursion region down to the last level holds at least one;
    leaf residuals are then the lengths of the uncovered regions, which
    is forced if the underlying set has measure zero.
    """
    if resolution < 1:
        raise InvalidInput(f"resolution must be >= 1, got {resolution}")
    ordered = sorted(gaps, key=lambda g: g.lo)
    if len(ordered) != 2**resolution - 1:
        raise InvalidInput(
            f"resolution {resolution} needs exactly {2 ** resolution - 1} gaps, "
            f"got {len(ordered)}"
        )
    for g in ordered:
        if g.width <= 0:
            raise InvalidInput(f"gaps must be nonempty open intervals, got {g}")
    if ordered[0].lo <= 0 or ordered[-1].hi >= 1:
        raise InvalidInput("gaps must lie strictly inside (0, 1)")
    for left, right in zip(ordered, ordered[1:]):
        if left.hi >= right.lo:
            raise InvalidInput(
                f"gaps must be disjoint and non-touching: {left} then {right}"
            )

    values: dict[Dyadic, Fraction] = {}
    residuals: dict[int, Fraction] = {}

    def assign(region_lo: Fraction, region_hi: Fraction, level: int, path: int, pool: list[RatInterval]):
        if level > resolution:
            if pool:
                raise InvalidInput(
                    f"{len(pool)} gaps remain below resolution {resolution}; "
                    "increase the resolution to consume them"
                )
            residuals[path] = region_hi - region_lo
            return
        if not pool:
            raise InvalidInput(
                f"no gap available for the level-{level} dyadic on record; "
                "gaps are not exhaustive to this resolution"
            )
        best = max(range(len(pool)), key=lambda i: (pool[i].width, -pool[i].lo))
        chosen = pool[best]
        d = Dyadic(2 * path + 1, level)
        values[d] = chosen.width
        left_pool = [g for g in pool if g.hi <= chosen.lo]
        right_pool = [g for g in pool if g.lo >= chosen.hi]
        assign(region_lo, chosen.lo, level + 1, 2 * path, left_pool)
        assign(chosen.hi, region_hi, level + 1, 2 * path + 1, right_pool)

    assign(Fraction(0), Fraction(1), 1, 0, list(ordered))
    residual_list = [residuals[m] for m in range(2**resolution)]
    return GapFunction(resolution, values, residual_list)


def total_level_mass(alpha: GapSequence, level: int) -> Fraction:
    """Exact total gap mass placed at ``level`` by the breadth-first layout."""
    start, stop = 2 ** (level - 1), 2**level
    if alpha.kind == "geometric":
        return alpha.tail_mass(start) - alpha.tail_mass(stop)
    return sum((alpha.term(i) for i in range(start, stop)), Fraction(0))
