"""Good sequences, truncated clouds, exact decompositions, assembly.

Frozen expectations below were computed by hand from the subset-sum
definition (supports are small enough to enumerate manually); the
closed form for the default sequence's suffix mass is an exact
geometric-series identity, asserted as such.
"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cantorvis.davies import (
    BlockSpec,
    DaviesConfig,
    DyadicFiltration,
    ExplicitFiltration,
    GoodSequence,
    PointCloud,
    assemble_c,
    bk_support,
    build_bk_points,
    check_good,
    decomposition_check,
    p_map,
    restricted_cloud,
)
from cantorvis.errors import BudgetExceeded, CapacityError, InvalidInput

F = Fraction


class TestGoodSequence:
    def test_default_terms_and_tail(self):
        seq = GoodSequence.default(5)
        assert seq.terms == tuple(F(1, 4**k) for k in range(1, 6))
        assert seq.tail_bound == F(1, 3 * 4**5)

    def test_suffix_mass_closed_form(self):
        """For t_k = 4**-k with the exact tail, sum_{j>k} t_j = 4**-k / 3."""
        seq = GoodSequence.default(8)
        for k in range(0, 9):
            assert seq.suffix_mass(k) == F(1, 3 * 4**k)

    def test_default_is_half_dominated(self):
        assert GoodSequence.default(8).half_domination() is True

    def test_rejections(self):
        with pytest.raises(InvalidInput):
            GoodSequence.custom([])
        with pytest.raises(InvalidInput):
            GoodSequence.custom(["1/2", "0"])
        with pytest.raises(InvalidInput):
            GoodSequence.custom(["1/2", "1/2"])
        with pytest.raises(InvalidInput):
            GoodSequence.custom(["1/2"], tail_bound="-1/8")

    def test_term_indexing(self):
        seq = GoodSequence.default(3)
        assert seq.term(1) == F(1, 4)
        with pytest.raises(InvalidInput):
            seq.term(0)
        with pytest.raises(InvalidInput):
            seq.term(4)


class TestCodingMap:
    def test_values(self):
        seq = GoodSequence.default(4)
        assert p_map([], seq) == 0
        assert p_map([0, 0, 0], seq) == 0
        assert p_map([1, 1], seq) == F(5, 16)
        assert p_map([0, 1, 0, 1], seq) == F(1, 16) + F(1, 256)

    def test_domain(self):
        seq = GoodSequence.default(2)
        with pytest.raises(InvalidInput):
            p_map([1, 0, 1], seq)
        with pytest.raises(InvalidInput):
            p_map([2], seq)

    @given(st.lists(st.sampled_from([0, 1]), min_size=0, max_size=8))
    def test_additive_over_disjoint_supports(self, bits):
        """p splits across any partition of the support."""
        seq = GoodSequence.default(8)
        evens = [b if i % 2 == 0 else 0 for i, b in enumerate(bits)]
        odds = [b if i % 2 == 1 else 0 for i, b in enumerate(bits)]
        assert p_map(bits, seq) == p_map(evens, seq) + p_map(odds, seq)


class TestGoodness:
    def test_default_is_good(self):
        report = check_good(GoodSequence.default(10))
        assert report.verdict is True
        assert report.half_domination is True
        assert report.distinct is True
        assert report.criterion == "half-domination"

    def test_collision_is_exhibited(self):
        seq = GoodSequence.custom(["1/2", "1/4", "3/16", "1/16"])
        report = check_good(seq)
        assert report.verdict is False
        assert report.half_domination is False
        assert report.collision == ((2,), (3, 4))
        left, right = report.collision
        assert sum(seq.term(i) for i in left) == sum(seq.term(i) for i in right)

    def test_half_domination_settles_it_under_budget(self):
        report = check_good(GoodSequence.default(12), budget=100)
        assert report.verdict is True
        assert report.distinct is None  # enumeration skipped
        assert report.criterion == "half-domination"

    def test_budget_exhausted_without_half_domination(self):
        seq = GoodSequence.custom(["1/2", "1/3", "1/4"])
        with pytest.raises(BudgetExceeded):
            check_good(seq, budget=4)

    def test_enumeration_rescues_non_dominated_sequences(self):
        report = check_good(GoodSequence.custom(["1/2", "1/3", "1/4"]))
        assert report.verdict is True
        assert report.half_domination is False
        assert report.criterion == "enumeration"


class TestFiltrations:
    def test_dyadic_membership(self):
        filt = DyadicFiltration()
        assert filt.contains(4, 2) is True
        assert filt.contains(6, 2) is False
        assert all(filt.contains(i, 0) for i in range(1, 20))

    def test_dyadic_domain(self):
        filt = DyadicFiltration()
        with pytest.raises(InvalidInput):
            filt.contains(0, 1)
        with pytest.raises(InvalidInput):
            filt.contains(3, -1)

    def test_explicit_nesting_enforced(self):
        with pytest.raises(InvalidInput):
            ExplicitFiltration.from_sets([{1, 2, 3}, {2, 4}], horizon=3)
        with pytest.raises(InvalidInput):
            ExplicitFiltration.from_sets([{1, 2}], horizon=3)  # stage 0 short

    def test_explicit_membership(self):
        filt = ExplicitFiltration.from_sets([{1, 2, 3, 4}, {2, 4}, {4}], horizon=4)
        assert filt.contains(2, 1) is True
        assert filt.contains(2, 2) is False
        with pytest.raises(InvalidInput):
            filt.contains(5, 0)
        with pytest.raises(InvalidInput):
            filt.contains(1, 3)


class TestPointCloud:
    def test_sorted_distinct_enforced(self):
        with pytest.raises(InvalidInput):
            PointCloud(points=(F(0), F(0)))
        with pytest.raises(InvalidInput):
            PointCloud(points=(F(1, 2), F(1, 4)))

    def test_shift_and_scale(self):
        cloud = PointCloud(points=(F(0), F(1, 4)))
        assert cloud.shift("1/2").points == (F(1, 2), F(3, 4))
        assert cloud.scale("1/2").points == (F(0), F(1, 8))
        assert cloud.diameter == F(1, 4)
        with pytest.raises(InvalidInput):
            cloud.scale(0)

    @given(st.fractions(max_denominator=64))
    def test_shift_preserves_difference_multiset(self, offset):
        cloud = build_bk_points(GoodSequence.default(4), DyadicFiltration(), 1)
        shifted = cloud.shift(offset)
        diffs = lambda pts: sorted(b - a for a in pts for b in pts)
        assert diffs(cloud.points) == diffs(shifted.points)


class TestTruncatedClouds:
    def test_supports_under_dyadic_filtration(self):
        filt = DyadicFiltration()
        assert bk_support(filt, 1, 4) == [1, 3]
        assert bk_support(filt, 2, 4) == [2, 3]
        assert bk_support(filt, 3, 2) == []

    def test_c1_frozen(self):
        cloud = build_bk_points(GoodSequence.default(4), DyadicFiltration(), 1)
        assert cloud.points == (F(0), F(1, 64), F(1, 4), F(17, 64))
        assert cloud.provenance["support"] == (1, 3)

    def test_c2_frozen(self):
        cloud = build_bk_points(GoodSequence.default(4), DyadicFiltration(), 2)
        assert cloud.points == (F(0), F(1, 64), F(1, 16), F(5, 64))

    def test_cloud_diameter_bounded_by_suffix_mass(self):
        seq = GoodSequence.default(8)
        for k in (1, 2, 3):
            cloud = build_bk_points(seq, DyadicFiltration(), k)
            assert cloud.diameter < seq.suffix_mass(k - 1)

    def test_restricted_frozen(self):
        seq = GoodSequence.default(6)
        restricted = restricted_cloud(seq, DyadicFiltration(), 1, 1)
        assert restricted.u_values == (F(0), F(1, 4))
        assert restricted.d_values == (F(0), F(1, 4096), F(1, 16), F(257, 4096))
        assert restricted.c0.provenance["support"] == (3, 5)

    def test_restriction_must_fit_the_truncation(self):
        seq = GoodSequence.default(2)
        with pytest.raises(CapacityError):
            restricted_cloud(seq, DyadicFiltration(), 2, 2)

    def test_budget_guard(self):
        seq = GoodSequence.default(12)
        with pytest.raises(BudgetExceeded):
            build_bk_points(seq, DyadicFiltration(), 1, budget=8)


class TestDecompositions:
    @pytest.mark.parametrize("k,l", [(1, 1), (1, 2), (2, 1), (2, 2), (3, 1)])
    def test_both_identities_hold(self, k, l):
        seq = GoodSequence.default(8)
        report = decomposition_check(seq, DyadicFiltration(), k, l)
        assert report.identity_u is True
        assert report.identity_d is True
        assert report.verdict is True

    def test_translate_counts(self):
        """|U| and |D| multiply out to the exact cloud sizes."""
        seq = GoodSequence.default(8)
        filt = DyadicFiltration()
        restricted = restricted_cloud(seq, filt, 1, 2)
        ck = build_bk_points(seq, filt, 1)
        ckl = build_bk_points(seq, filt, 3)
        assert len(restricted.c0) * len(restricted.u_values) == len(ck)
        assert len(restricted.c0) * len(restricted.d_values) == len(ckl)


class TestAssembly:
    def test_default_two_blocks(self):
        cloud = assemble_c(DaviesConfig.default(6, 2))
        assert len(cloud) == 33
        assert cloud.points[0] == 0
        config = DaviesConfig.default(6, 2)
        for p in cloud.points[1:]:
            hosts = [
                b for b in config.blocks if abs(p - b.anchor) < b.radius
            ]
            assert len(hosts) == 1

    def test_blocks_pick_deep_enough_stages(self):
        config = DaviesConfig.default(8, 3)
        for block in config.blocks:
            assert F(4, 3) * F(1, 4**block.pick) < block.radius

    def test_truncation_too_shallow(self):
        with pytest.raises(CapacityError):
            DaviesConfig.default(1, 1)

    def test_overlapping_balls_rejected(self):
        config = DaviesConfig(
            sequence=GoodSequence.default(6),
            filtration=DyadicFiltration(),
            blocks=(
                BlockSpec(index=1, anchor=F(1, 2), radius=F(1, 4), pick=2),
                BlockSpec(index=2, anchor=F(1, 4), radius=F(1, 16), pick=2),
            ),
        )
        with pytest.raises(InvalidInput):
            assemble_c(config)

    def test_ball_reaching_zero_rejected(self):
        config = DaviesConfig(
            sequence=GoodSequence.default(6),
            filtration=DyadicFiltration(),
            blocks=(BlockSpec(index=1, anchor=F(1, 8), radius=F(1, 4), pick=2),),
        )
        with pytest.raises(InvalidInput):
            assemble_c(config)

    def test_block_wider_than_its_ball_rejected(self):
        config = DaviesConfig(
            sequence=GoodSequence.default(6),
            filtration=DyadicFiltration(),
            blocks=(BlockSpec(index=1, anchor=F(1, 2), radius=F(1, 100), pick=1),),
        )
        with pytest.raises(CapacityError):
            assemble_c(config)

    def test_budget_guard(self):
        with pytest.raises(BudgetExceeded):
            assemble_c(DaviesConfig.default(12, 1), budget=4)
