"""Truncated Davies clouds: point sets that no gauge measure can see.

The construction starts from a rapidly decreasing positive sequence
``t_1, t_2, ...`` and the injective coding map ``p(sigma) = sum of
sigma(k) * t_k`` over 0/1 sequences.  *Goodness* is the half-domination
property ``sum_{j > k} t_j < t_k / 2``, which forces all subset sums to
be distinct.  A decreasing chain of index sets ``A_0 = N, A_1, A_2, ...``
(each dropping infinitely many elements, default: ``A_k`` = multiples of
``2**k``) selects the codes

``B_k``: sigma vanishing below ``k`` and on ``A_k``, with point set
``C_k = p(B_k)``.

Freezing additionally the first ``l`` coordinates at and above ``k``
gives ``B0_{k,l}`` and its cloud ``C0``; the two exact decompositions

* ``C_k``   = disjoint union of ``C0 + u`` over the finite set ``U`` of
  sums of the freed coordinates ``t_k .. t_{k+l-1}``, and
* ``C_{k+l}`` = disjoint union of ``C0 + p(tau)`` over codes ``tau``
  supported on ``A_k \\ A_{k+l}`` past ``k+l``,

are what makes the full set translate into itself in too many ways to
carry a sigma-finite translation-invariant measure.  At a truncation
``N`` every identity above is a finite multiset equality this module
checks exactly.

:func:`assemble_c` glues scaled clouds near ``0``: block ``k`` is
``C_{n_k}`` shifted to the anchor ``x_k``, with ``n_k`` deep enough that
the block fits inside a ball of radius ``rho_k`` and the balls stay
pairwise disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Protocol, Sequence

from .errors import BudgetExceeded, CapacityError, InvalidInput
from .gaps import DEFAULT_ENUM_BUDGET
from .intervals import RationalLike, as_fraction


# ---------------------------------------------------------------------------
# Good sequences
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GoodSequence:
    """Finite prefix ``t_1..t_N`` plus the exact mass of the dropped tail."""

    terms: tuple[Fraction, ...]
    tail_bound: Fraction = Fraction(0)

    def __post_init__(self):
        if not self.terms:
            raise InvalidInput("a sequence needs at least one term")
        if any(t <= 0 for t in self.terms):
            raise InvalidInput("sequence terms must be positive")
        if len(set(self.terms)) != len(self.terms):
            raise InvalidInput("sequence terms must be distinct")
        if self.tail_bound < 0:
            raise InvalidInput("tail bound cannot be negative")

    @classmethod
    def default(cls, truncation: int) -> "GoodSequence":
        """``t_k = 4**-k`` with the exact tail ``4**-N / 3``."""
        if truncation < 1:
            raise InvalidInput(f"truncation must be >= 1, got {truncation}")
        terms = tuple(Fraction(1, 4**k) for k in range(1, truncation + 1))
        return cls(terms=terms, tail_bound=Fraction(1, 3 * 4**truncation))

    @classmethod
    def custom(cls, terms: Sequence[RationalLike], tail_bound: RationalLike = 0) -> "GoodSequence":
        return cls(
            terms=tuple(as_fraction(t) for t in terms),
            tail_bound=as_fraction(tail_bound),
        )

    @property
    def truncation(self) -> int:
        return len(self.terms)

    def term(self, k: int) -> Fraction:
        if not (1 <= k <= len(self.terms)):
            raise InvalidInput(f"index {k} outside 1..{len(self.terms)}")
        return self.terms[k - 1]

    def suffix_mass(self, k: int) -> Fraction:
        """Exact ``sum_{j > k} t_j`` including the tail bound."""
        return sum(self.terms[k:], Fraction(0)) + self.tail_bound

    def half_domination_at(self, k: int) -> bool:
        return self.suffix_mass(k) < self.term(k) / 2

    def half_domination(self) -> bool:
        return all(self.half_domination_at(k) for k in range(1, len(self.terms) + 1))


def p_map(sigma: Sequence[int], seq: GoodSequence) -> Fraction:
    """``p(sigma) = sum sigma(k) t_k`` for a 0/1 vector over ``1..N``."""
    if len(sigma) > seq.truncation:
        raise InvalidInput(
            f"code of length {len(sigma)} exceeds truncation {seq.truncation}"
        )
    if any(bit not in (0, 1) for bit in sigma):
        raise InvalidInput("codes must be 0/1 vectors")
    return sum(
        (seq.term(k) for k, bit in enumerate(sigma, start=1) if bit), Fraction(0)
    )


@dataclass(frozen=True)
class GoodnessReport:
    verdict: bool
    half_domination: bool
    distinct: bool | None
    criterion: str
    collision: tuple[tuple[int, ...], tuple[int, ...]] | None = None


def check_good(seq: GoodSequence, *, budget: int = DEFAULT_ENUM_BUDGET) -> GoodnessReport:
    """Certify injectivity of ``p`` at the truncation.

    Half-domination is checked exactly and is sufficient on its own; the
    ``2**N`` subset sums are additionally enumerated when they fit the
    budget, so the report states which criterion settled the verdict and
    exhibits a colliding pair when injectivity fails.
    """
    half = seq.half_domination()
    n = seq.truncation
    if 2**n > budget:
        if half:
            return GoodnessReport(
                verdict=True, half_domination=True, distinct=None,
                criterion="half-domination",
            )
        raise BudgetExceeded(
            f"enumerating 2^{n} subset sums exceeds the budget and "
            "half-domination failed, so injectivity is unresolved",
            required=2**n,
            budget=budget,
        )
    seen: dict[Fraction, tuple[int, ...]] = {}
    for mask in range(2**n):
        support = tuple(k + 1 for k in range(n) if mask >> k & 1)
        value = sum((seq.term(k) for k in support), Fraction(0))
        if value in seen:
            return GoodnessReport(
                verdict=False, half_domination=half, distinct=False,
                criterion="enumeration", collision=(seen[value], support),
            )
        seen[value] = support
    criterion = "half-domination" if half else "enumeration"
    return GoodnessReport(
        verdict=True, half_domination=half, distinct=True, criterion=criterion
    )


# ---------------------------------------------------------------------------
# Filtrations
# ---------------------------------------------------------------------------


class Filtration(Protocol):
    """Decreasing chain ``A_0 superset A_1 superset ...`` of index sets."""

    def contains(self, index: int, k: int) -> bool: ...


@dataclass(frozen=True)
class DyadicFiltration:
    """``A_k`` = positive multiples of ``2**k``; certified nested by form."""

    def contains(self, index: int, k: int) -> bool:
        if index < 1:
            raise InvalidInput(f"indices start at 1, got {index}")
        if k < 0:
            raise InvalidInput(f"filtration stages start at 0, got {k}")
        return index % 2**k == 0


@dataclass(frozen=True)
class ExplicitFiltration:
    """Finitely many stages given as explicit sets over ``1..horizon``.

    Construction rejects chains that are not nested, so corrupted inputs
    never reach the decomposition machinery.
    """

    stages: tuple[frozenset[int], ...]
    horizon: int

    def __post_init__(self):
        if self.horizon < 1:
            raise InvalidInput("horizon must be >= 1")
        universe = frozenset(range(1, self.horizon + 1))
        if not self.stages or self.stages[0] != universe:
            raise InvalidInput("stage 0 must contain every index up to the horizon")
        for k, (big, small) in enumerate(zip(self.stages, self.stages[1:])):
            if not small <= big:
                raise InvalidInput(f"stage {k + 1} is not contained in stage {k}")
            if not small <= universe:
                raise InvalidInput(f"stage {k + 1} leaves the horizon")

    @classmethod
    def from_sets(cls, stages: Sequence[Iterable[int]], horizon: int) -> "ExplicitFiltration":
        return cls(
            stages=tuple(frozenset(stage) for stage in stages),
            horizon=horizon,
        )

    def contains(self, index: int, k: int) -> bool:
        if not (1 <= index <= self.horizon):
            raise InvalidInput(f"index {index} outside 1..{self.horizon}")
        if k >= len(self.stages):
            raise InvalidInput(f"filtration stores stages 0..{len(self.stages) - 1}")
        return index in self.stages[k]


# ---------------------------------------------------------------------------
# Point clouds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointCloud:
    """Sorted distinct rational points with a record of how they arose."""

    points: tuple[Fraction, ...]
    provenance: Mapping[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for a, b in zip(self.points, self.points[1:]):
            if not a < b:
                raise InvalidInput("cloud points must be sorted and distinct")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def diameter(self) -> Fraction:
        if not self.points:
            return Fraction(0)
        return self.points[-1] - self.points[0]

    def shift(self, offset: RationalLike) -> "PointCloud":
        d = as_fraction(offset)
        return PointCloud(
            points=tuple(p + d for p in self.points),
            provenance={**dict(self.provenance), "shifted_by": d},
        )

    def scale(self, factor: RationalLike) -> "PointCloud":
        f = as_fraction(factor)
        if f <= 0:
            raise InvalidInput("scale factor must be positive")
        return PointCloud(
            points=tuple(p * f for p in self.points),
            provenance={**dict(self.provenance), "scaled_by": f},
        )


def _subset_sums(
    indices: Sequence[int], seq: GoodSequence, budget: int, what: str
) -> list[Fraction]:
    if 2 ** len(indices) > budget:
        raise BudgetExceeded(
            f"{what} needs 2^{len(indices)} subset sums, budget is {budget}",
            required=2 ** len(indices),
            budget=budget,
        )
    sums = [Fraction(0)]
    for i in indices:
        t = seq.term(i)
        sums.extend([s + t for s in sums])
    sums.sort()
    for a, b in zip(sums, sums[1:]):
        if a == b:
            raise InvalidInput(
                f"{what}: subset sums collide at {a}; the sequence is not good "
                "on this support"
            )
    return sums


def bk_support(filtration: Filtration, k: int, truncation: int) -> list[int]:
    """Indices free in ``B_k``: ``k <= i <= N`` with ``i`` outside ``A_k``."""
    if k < 1:
        raise InvalidInput(f"k must be >= 1, got {k}")
    return [i for i in range(k, truncation + 1) if not filtration.contains(i, k)]


def build_bk_points(
    seq: GoodSequence,
    filtration: Filtration,
    k: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> PointCloud:
    """The cloud ``C_k = p(B_k)`` at the sequence's truncation."""
    support = bk_support(filtration, k, seq.truncation)
    sums = _subset_sums(support, seq, budget, f"C_{k}")
    return PointCloud(
        points=tuple(sums),
        provenance={
            "kind": "davies-Ck",
            "k": k,
            "truncation": seq.truncation,
            "support": tuple(support),
            "empty_support": not support,
        },
    )


@dataclass(frozen=True)
class RestrictedCloud:
    """``C0 = p(B0_{k,l})`` together with the finite translation sets."""

    c0: PointCloud
    u_values: tuple[Fraction, ...]
    d_values: tuple[Fraction, ...]
    k: int
    l: int


def restricted_cloud(
    seq: GoodSequence,
    filtration: Filtration,
    k: int,
    l: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> RestrictedCloud:
    """Freeze the ``l`` coordinates at and above ``k`` and return the pieces.

    ``u_values`` are the sums of the freed coordinates among
    ``t_k..t_{k+l-1}`` (those outside ``A_k``), and ``d_values`` are the
    points ``p(tau)`` over codes supported on ``A_k \\ A_{k+l}`` past
    ``k + l``; both are sorted.
    """
    if l < 1:
        raise InvalidInput(f"l must be >= 1, got {l}")
    n = seq.truncation
    if k + l > n + 1:
        raise CapacityError(
            f"freezing levels {k}..{k + l - 1} exceeds the truncation {n}"
        )
    c0_sup = [i for i in range(k + l, n + 1) if not filtration.contains(i, k)]
    u_indices = [i for i in range(k, k + l) if not filtration.contains(i, k)]
    d_sup = [
        i
        for i in range(k + l, n + 1)
        if filtration.contains(i, k) and not filtration.contains(i, k + l)
    ]
    c0 = PointCloud(
        points=tuple(_subset_sums(c0_sup, seq, budget, f"C0_{k},{l}")),
        provenance={
            "kind": "davies-C0",
            "k": k,
            "l": l,
            "truncation": n,
            "support": tuple(c0_sup),
        },
    )
    u_values = tuple(_subset_sums(u_indices, seq, budget, "U"))
    d_values = tuple(_subset_sums(d_sup, seq, budget, "D"))
    return RestrictedCloud(c0=c0, u_values=u_values, d_values=d_values, k=k, l=l)


@dataclass(frozen=True)
class DecompositionReport:
    identity_u: bool
    identity_d: bool
    k: int
    l: int
    truncation: int

    @property
    def verdict(self) -> bool:
        return self.identity_u and self.identity_d


def _disjoint_union_equals(
    base: Sequence[Fraction], shifts: Sequence[Fraction], target: Sequence[Fraction]
) -> bool:
    combined: list[Fraction] = [p + s for s in shifts for p in base]
    if len(set(combined)) != len(combined):
        return False  # translates overlap, the union is not disjoint
    return sorted(combined) == list(target)


def decomposition_check(
    seq: GoodSequence,
    filtration: Filtration,
    k: int,
    l: int,
    *,
    budget: int = DEFAULT_ENUM_BUDGET,
) -> DecompositionReport:
    """Verify both exact decompositions of the truncated clouds.

    ``identity_u``: ``C_k`` equals the disjoint union of ``C0 + u`` over
    ``u`` in the freed-coordinate sums.  ``identity_d``: ``C_{k+l}``
    equals the disjoint union of ``C0 + d`` over the ``d_values``.
    """
    restricted = restricted_cloud(seq, filtration, k, l, budget=budget)
    ck = build_bk_points(seq, filtration, k, budget=budget)
    ckl = build_bk_points(seq, filtration, k + l, budget=budget)
    identity_u = _disjoint_union_equals(
        restricted.c0.points, restricted.u_values, ck.points
    )
    identity_d = _disjoint_union_equals(
        restricted.c0.points, restricted.d_values, ckl.points
    )
    return DecompositionReport(
        identity_u=identity_u,
        identity_d=identity_d,
        k=k,
        l=l,
        truncation=seq.truncation,
    )


# ---------------------------------------------------------------------------
# Assembling the full invisible cloud
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockSpec:
    """One block: ``C_{pick}`` shifted to ``anchor`` inside radius ``radius``."""

    index: int
    anchor: Fraction
    radius: Fraction
    pick: int


@dataclass(frozen=True)
class DaviesConfig:
    sequence: GoodSequence
    filtration: Filtration
    blocks: tuple[BlockSpec, ...]

    @classmethod
    def default(cls, truncation: int, n_blocks: int) -> "DaviesConfig":
        """Anchors ``2**-k``, radii ``2**-k-2``, blocks as deep as they must be.

        ``pick`` for block ``k`` is the least ``m`` whose cloud diameter
        bound ``(4/3) 4**-m`` drops below the radius; the truncation caps
        how deep a block can reach, so too many blocks raise
        :class:`CapacityError`.
        """
        if n_blocks < 1:
            raise InvalidInput("need at least one block")
        seq = GoodSequence.default(truncation)
        filtration = DyadicFiltration()
        blocks = []
        for k in range(1, n_blocks + 1):
            anchor = Fraction(1, 2**k)
            radius = Fraction(1, 2 ** (k + 2))
            pick = None
            for m in range(1, truncation + 1):
                if Fraction(4, 3) * Fraction(1, 4**m) < radius:
                    pick = m
                    break
            if pick is None:
                raise CapacityError(
                    f"truncation {truncation} cannot host block {k}: no stage dives "
                    f"below radius {radius}"
                )
            blocks.append(BlockSpec(index=k, anchor=anchor, radius=radius, pick=pick))
        return cls(sequence=seq, filtration=filtration, blocks=tuple(blocks))


def assemble_c(config: DaviesConfig, *, budget: int = DEFAULT_ENUM_BUDGET) -> PointCloud:
    """``{0}`` together with every block cloud shifted to its anchor.

    Certifies that each block fits inside its ball and that the balls
    are pairwise disjoint, which keeps the union's points distinct.
    """
    seq = config.sequence
    points: list[Fraction] = [Fraction(0)]
    ordered = sorted(config.blocks, key=lambda b: b.anchor, reverse=True)
    for prev, nxt in zip(ordered, ordered[1:]):
        if not nxt.anchor + nxt.radius < prev.anchor - prev.radius:
            raise InvalidInput(
                f"balls of blocks {prev.index} and {nxt.index} are not disjoint"
            )
    if ordered and not ordered[-1].anchor - ordered[-1].radius > 0:
        raise InvalidInput("the deepest ball must stay away from 0")
    for block in ordered:
        cloud = build_bk_points(seq, config.filtration, block.pick, budget=budget)
        bound = seq.suffix_mass(block.pick - 1)
        if not bound < block.radius:
            raise CapacityError(
                f"block {block.index} (stage {block.pick}) has diameter bound "
                f"{bound}, radius is {block.radius}"
            )
        points.extend(p + block.anchor for p in cloud.points)
    distinct = sorted(set(points))
    if len(distinct) != len(points):
        raise InvalidInput("assembled blocks collide; check the ball layout")
    return PointCloud(
        points=tuple(distinct),
        provenance={
            "kind": "davies-assembled",
            "truncation": seq.truncation,
            "blocks": tuple(
                {"index": b.index, "anchor": b.anchor, "radius": b.radius, "pick": b.pick}
                for b in config.blocks
            ),
        },
    )
