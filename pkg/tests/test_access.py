"""
Tests for surjective intervals, accessibility certificates and family witnesses
"""

from fractions import Fraction as Fr

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from contembed.access import (EmbeddingPlan, Side, certificate, consistent_target, default_schedule,
                              family_witness, is_P_eps, nadler_itinerary, nadler_point_stages,
                              nadler_stages, pin_three_points, points_topmost, pullback_interval,
                              right_accessible, surjective_intervals, two_point_topmost,
                              two_point_topmost_restricted)
from contembed.errors import (BadBlocks, BadInterval, NoSurjectiveInterval, NotConstructible, OutOfRange,
                              SizeMismatch, TooFewSurjectiveIntervals, ZigzagObstruction)
from contembed.fixtures import builtin, make_rng, random_plmap
from contembed.permute import is_admissible, parse_permutation
from contembed.plmap import compose, image, iterate, parse_plmap, preimages_in

THIRDS = [(Fr(0), Fr(1, 3)), (Fr(1, 3), Fr(2, 3)), (Fr(2, 3), Fr(1))]


class TestSurjectiveIntervals:
    """Surjective intervals and right accessible sets"""

    def test_minc_thirds(self, minc):
        dec = surjective_intervals(minc)
        assert list(dec.intervals) == THIRDS
        assert dec.increasing == (True, False, True)

    def test_minc_right_accessible_middle(self, minc):
        rset = right_accessible(minc, THIRDS[1])
        assert str(rset) == "[1/3, 3/8) ∪ [7/12, 2/3]"
        assert rset.contains(Fr(1, 3)) and not rset.contains(Fr(3, 8))
        assert not rset.contains(Fr(1, 2))

    def test_right_accessible_of_a_monotone_piece_is_everything(self, minc):
        assert str(right_accessible(minc, THIRDS[0])) == "[0, 1/3]"

    def test_right_accessible_matches_grid_oracle(self, minc):
        lo, hi = THIRDS[1]
        rset = right_accessible(minc, THIRDS[1])
        grid = [lo + (hi - lo) * Fr(i, 96) for i in range(97)]
        for idx, x in enumerate(grid):
            later = [minc(y) for y in grid[idx + 1:]]
            clear = all(v != minc(x) for v in later) and not any(
                min(a, b) <= minc(x) <= max(a, b) for a, b in zip(later, later[1:]))
            assert rset.contains(x) == clear, x

    def test_target_outside_image(self, tent):
        with pytest.raises(NoSurjectiveInterval):
            surjective_intervals(tent, domain=(0, Fr(1, 4)))

    @pytest.mark.property_based
    @given(st.integers(0, 100_000), st.integers(2, 6), st.integers(2, 6))
    @settings(max_examples=60, deadline=None,
              suppress_health_check=[HealthCheck.filter_too_much, HealthCheck.too_slow])
    def test_two_by_two_composes_to_three(self, seed, m, n):
        rng = make_rng(seed)
        f, g = random_plmap(rng, m), random_plmap(rng, n)
        assume(len(surjective_intervals(f)) >= 2 and len(surjective_intervals(g)) >= 2)
        assert len(surjective_intervals(compose(f, g))) >= 3

    @pytest.mark.property_based
    @given(st.integers(0, 100_000), st.integers(1, 5), st.fractions(0, 1))
    @settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    def test_intervals_map_onto_the_target(self, seed, branches, t):
        f = random_plmap(make_rng(seed), branches)
        dec = surjective_intervals(f)
        for A, rset in zip(dec.intervals, dec.right_accessible):
            assert image(f, *A) == (0, 1)
            # nothing right of the last preimage returns to t
            assert rset.contains(max(preimages_in(f, t, *A)))


class TestPullback:
    def test_tent_halves(self, tent):
        J = (Fr(1, 4), Fr(1, 2))
        assert pullback_interval(tent, (0, Fr(1, 2)), J) == (Fr(1, 8), Fr(1, 4))
        assert pullback_interval(tent, (Fr(1, 2), 1), J) == (Fr(3, 4), Fr(7, 8))

    def test_interval_outside_the_image(self, tent):
        with pytest.raises(BadInterval):
            pullback_interval(tent, (0, Fr(1, 4)), (Fr(1, 4), 1))

    def test_empty_interval(self, tent):
        with pytest.raises(BadInterval):
            pullback_interval(tent, (0, Fr(1, 2)), (Fr(1, 2), Fr(1, 4)))


class TestTopmost:
    """Two-point topmost permutations"""

    def test_points_on_the_top_branch(self, minc):
        Ji = (Fr(1, 9), Fr(2, 9))
        p = two_point_topmost(minc, THIRDS[0], Ji)
        assert p[0] == minc.branch_count - 1
        assert is_admissible(minc, p)
        assert points_topmost(minc, p, list(Ji))

    def test_restricted_to_k(self, tent):
        f = iterate(tent, 2)
        alpha, beta, pa, pb = two_point_topmost_restricted(f, (0, 1), (Fr(1, 4), Fr(1, 2)))
        assert (alpha, beta) == (1, 3)
        assert pa.top == 0 and pb.top == 2

    def test_tent_halves_fold_to_their_own_branch(self, tent):
        right = two_point_topmost(tent, (Fr(1, 2), 1), (Fr(3, 4), Fr(7, 8)))
        assert right == parse_permutation("perm 0 1")
        assert points_topmost(tent, right, [Fr(3, 4), Fr(7, 8)])
        left = two_point_topmost(tent, (0, Fr(1, 2)), (Fr(1, 8), Fr(1, 4)))
        assert left == parse_permutation("perm 1 0")

    def test_pullback_must_lie_in_the_interval(self, tent):
        with pytest.raises(BadInterval):
            two_point_topmost(tent, (0, Fr(1, 2)), (Fr(3, 4), Fr(7, 8)))

    def test_restricted_follows_the_escape_direction(self):
        # f leaves f(K) = [0, 1/2] upward right of K, so the increasing intervals 2 and 4 pair up
        f = parse_plmap("pl 0:1/2 1/8:0 1/4:1/2 3/8:0 1:1")
        K, J = (0, Fr(11, 16)), (Fr(1, 8), Fr(1, 4))
        dec = surjective_intervals(f, (0, Fr(1, 2)), K)
        assert dec.increasing == (False, True, False, True)
        alpha, beta, pa, pb = two_point_topmost_restricted(f, K, J)
        assert (alpha, beta) == (2, 4)
        for i, p in ((alpha, pa), (beta, pb)):
            Ji = pullback_interval(f, dec.intervals[i - 1], J)
            assert is_admissible(f, p)
            assert points_topmost(f, p, list(Ji))

    @pytest.mark.property_based
    @pytest.mark.slow
    @given(st.integers(0, 100_000), st.integers(1, 3))
    @settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    def test_random_maps_with_two_surjective_intervals(self, seed, branches):
        f = compose(random_plmap(make_rng(seed), branches), builtin("tent"))
        J = (Fr(1, 4), Fr(1, 2))
        for A in surjective_intervals(f).intervals:
            Ji = pullback_interval(f, A, J)
            try:
                p = two_point_topmost(f, A, Ji)
            except NotConstructible:
                continue
            assert is_admissible(f, p)
            assert points_topmost(f, p, list(Ji))

    def test_restricted_needs_four_intervals(self, tent):
        with pytest.raises(TooFewSurjectiveIntervals):
            two_point_topmost_restricted(tent, (0, 1), (Fr(1, 4), Fr(1, 2)))


class TestPEps:
    def test_verdicts(self, tent, minc, ex67):
        assert is_P_eps(tent, Fr(1, 10))
        assert is_P_eps(minc, Fr(1, 10))
        assert not is_P_eps(ex67, Fr(1, 10))

    def test_pin_three_points(self):
        f = parse_plmap("pl 0:1/20 1/4:19/20 1/2:0 3/4:1 1:1/10")
        pinned, witness = pin_three_points(f, Fr(1, 10))
        assert witness == (0, Fr(1, 4), Fr(1, 2))
        assert pinned.values == (0, 1, 0, 1, Fr(1, 10))
        assert len(surjective_intervals(pinned)) >= 2

    def test_pin_needs_p_eps(self, ex67):
        with pytest.raises(NotConstructible):
            pin_three_points(ex67, Fr(1, 10))


class TestCertificate:
    """Stage-by-stage accessibility certificates"""

    def test_tent_stages(self, tent):
        cert = certificate([tent, tent], [0, 0])
        assert cert.target == (Fr(1, 2), Fr(1, 4), Fr(1, 8))
        assert all(p.top == 0 for p in cert.permutations)
        plan = cert.to_plan()
        assert plan.depth == 2
        assert plan.epsilons == (Fr(1, 8), Fr(1, 32), Fr(1, 128))
        assert plan.marks == ((Fr(1, 8), "x"),)

    def test_consistent_target(self, tent):
        assert consistent_target([tent, tent], [0, 0]) == [(0, Fr(1, 2)), (0, Fr(1, 4))]

    def test_second_iterate_of_ex67(self, ex67):
        f2 = iterate(ex67, 2)
        k = f2.branch_of(Fr(1, 2))
        cert = certificate([f2, f2, f2], [k, k, k])
        assert len(cert.permutations) == 3
        assert all(p[k] == f2.branch_count - 1 for p in cert.permutations)

    def test_zigzag_stage_is_reported(self, ex67, tent):
        with pytest.raises(ZigzagObstruction) as info:
            certificate([tent, ex67], [0, 1])
        assert info.value.stage == 2
        assert str(info.value.witness) == "ZIGZAG witness a=0 e=1"

    def test_inconsistent_branches_give_no_target(self, ex67, caplog):
        # branch 2 of g maps onto [1/2, 1], missing the first stage target [0, 1/4]
        g = parse_plmap("pl 0:0 1/2:1 3/4:1/2 1:1")
        with caplog.at_level("WARNING", logger="contembed.access"):
            cert = certificate([ex67, g], [0, 2])
        assert cert.target == ()
        assert len(cert.permutations) == 2
        assert cert.to_plan().marks == ()
        assert "without a target point" in caplog.text

    def test_one_branch_per_stage(self, tent):
        with pytest.raises(SizeMismatch):
            certificate([tent, tent], [0])


class TestEmbeddingPlan:
    def test_default_schedule(self):
        assert default_schedule(3) == (Fr(1, 8), Fr(1, 32), Fr(1, 128), Fr(1, 512))

    def test_schedule_must_decrease(self, tent):
        with pytest.raises(BadInterval):
            EmbeddingPlan((), (Fr(1, 8), Fr(1, 8)), 0)

    def test_depth_needs_stages(self):
        with pytest.raises(SizeMismatch):
            EmbeddingPlan((), (Fr(1, 8), Fr(1, 32)), 1)


class TestFamilyWitness:
    """Accessible pairs pulled back through chosen surjective intervals"""

    def test_minc_left_then_right(self, minc):
        witness = family_witness([minc, minc], ["LEFT", "RIGHT"], THIRDS[1])
        assert witness.intervals == (THIRDS[1], (Fr(1, 9), Fr(2, 9)), (Fr(19, 27), Fr(20, 27)))
        assert witness.choices == (Side.LEFT, Side.RIGHT)
        assert witness.marks == ((Fr(19, 27), "left end"), (Fr(20, 27), "right end"))
        assert witness.plan.depth == 2

    def test_tent_has_too_few_intervals(self, tent):
        with pytest.raises(TooFewSurjectiveIntervals) as info:
            family_witness([tent], ["LEFT"], (Fr(1, 4), Fr(1, 2)))
        assert info.value.stage == 1


class TestNadler:
    """Block codings for the Nadler map"""

    @pytest.mark.parametrize("blocks, expected", [((2, 1), [1, 3]), ((1, 0, 2), [2, 2]), ((1,), [])])
    def test_stage_exponents(self, blocks, expected):
        assert nadler_stages(blocks) == expected

    @pytest.mark.parametrize("blocks", [(), (0, 1), (1, -1)])
    def test_bad_blocks(self, blocks):
        with pytest.raises(BadBlocks):
            nadler_stages(blocks)

    def test_itinerary(self):
        assert nadler_itinerary(Fr(1, 2), 3) == "111"
        assert nadler_itinerary(Fr(1, 5), 2) == "00"
        with pytest.raises(OutOfRange):
            nadler_itinerary(0, 2)

    def test_point_stages_use_increasing_branches(self):
        stages, chosen = nadler_point_stages((2, 1))
        assert len(stages) == len(chosen) == 2
        for f, k in zip(stages, chosen):
            assert f.branches()[k].increasing
        consistent_target(stages, chosen)


if __name__ == "__main__":
    pytest.main([__file__, "-v", "--tb=short"])
