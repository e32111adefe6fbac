"""
Tests for chain covers, refinement and patterns
"""

from fractions import Fraction as Fr

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from contembed.chains import (Chain1D, Pattern, branch_in_link, graph_pattern, mesh, natural_refinement,
                              parse_chain, pattern, refinement_slack, refines, uniform_chain)
from contembed.errors import BadChain, MapSyntaxError, MeshTooCoarse, NotARefinement
from contembed.fixtures import make_rng, random_plmap
from contembed.plmap import identity


class TestChain1D:
    """Chain condition and literals"""

    def test_uniform_chain_links(self):
        C = uniform_chain(4)
        assert len(C) == 4
        assert C.links[0] == (Fr(-1, 16), Fr(5, 16))
        assert C.links[-1] == (Fr(11, 16), Fr(17, 16))
        assert C.covers_unit
        assert mesh(C) == Fr(3, 8)

    def test_uniform_chain_passes_validation(self):
        assert Chain1D.of(uniform_chain(6).links) == uniform_chain(6)

    def test_link_of_overlap_point(self):
        C = uniform_chain(4)
        assert C.link_of(Fr(1, 4)) == [1, 2]
        assert C.link_of(Fr(1, 8)) == [1]
        assert C.share_link(Fr(0), Fr(1, 4))
        assert not C.share_link(Fr(0), Fr(1, 2))

    def test_consecutive_links_must_meet(self):
        with pytest.raises(BadChain):
            Chain1D.of([(0, 1), (2, 3)])

    def test_distant_links_must_not_meet(self):
        with pytest.raises(BadChain):
            Chain1D.of([(0, 2), (1, 3), (Fr(3, 2), 4)])

    def test_empty_link(self):
        with pytest.raises(BadChain):
            Chain1D.of([(1, 1)])

    def test_parse_and_format(self):
        C = parse_chain("chain (-1/8,1/2) (1/4,9/8)")
        assert C.links == ((Fr(-1, 8), Fr(1, 2)), (Fr(1, 4), Fr(9, 8)))
        assert str(C) == "chain (-1/8,1/2) (1/4,9/8)"
        assert parse_chain(str(C)) == C

    def test_parse_rejects_garbage(self):
        with pytest.raises(MapSyntaxError):
            parse_chain("chain (0,1) oops")


class TestPatterns:
    """Refinement and least-index patterns"""

    def test_halving_pattern(self):
        fine, coarse = uniform_chain(8), uniform_chain(4)
        assert refines(fine, coarse, proper=True)
        assert pattern(fine, coarse) == Pattern((1, 1, 2, 2, 3, 3, 4, 4))

    def test_coarse_does_not_refine_fine(self):
        assert not refines(uniform_chain(4), uniform_chain(8))
        with pytest.raises(NotARefinement):
            pattern(uniform_chain(4), uniform_chain(8))

    def test_pattern_steps_by_at_most_one(self):
        with pytest.raises(NotARefinement):
            Pattern((1, 3))

    def test_pattern_str(self):
        assert str(Pattern((1, 2, 2, 1))) == "(1, 2, 2, 1)"

    def test_graph_pattern_of_identity(self):
        fine, coarse = uniform_chain(8), uniform_chain(4)
        assert graph_pattern(identity(), fine, coarse) == pattern(fine, coarse)


class TestNaturalRefinement:
    """Fine chains following the graph through a coarse chain"""

    def test_tent_refinement(self, tent):
        coarse = uniform_chain(4)
        fine, pat = natural_refinement(tent, coarse, Fr(1, 8))
        assert Chain1D.of(fine.links) == fine
        assert fine.covers_unit
        assert mesh(fine) <= Fr(1, 8)
        assert pat == graph_pattern(tent, fine, coarse)
        assert pat.entries[0] == 1 and pat.entries[-1] == 1
        assert max(pat.entries) == 4
        assert refinement_slack(tent, fine, coarse) > 0

    def test_tent_pattern_is_symmetric(self, tent):
        fine, pat = natural_refinement(tent, uniform_chain(4), Fr(1, 8))
        assert pat.entries == tuple(reversed(pat.entries))

    def test_single_link_coarse_chain_is_too_coarse(self, tent):
        coarse = uniform_chain(1)
        assert branch_in_link(tent, coarse) == 0
        with pytest.raises(MeshTooCoarse) as info:
            natural_refinement(tent, coarse, Fr(1, 8))
        assert info.value.bound == 1

    def test_coarse_chain_must_cover(self, tent):
        with pytest.raises(BadChain):
            natural_refinement(tent, parse_chain("(0,1/2) (1/4,1)"), Fr(1, 8))

    def test_mesh_bound_must_be_positive(self, tent):
        with pytest.raises(ValueError):
            natural_refinement(tent, uniform_chain(4), 0)

    @pytest.mark.property_based
    @given(st.integers(0, 10_000), st.integers(1, 5))
    @settings(max_examples=40, deadline=None)
    def test_random_refinements_are_chains(self, seed, branches):
        f = random_plmap(make_rng(seed), branches, kinks=1)
        coarse = uniform_chain(4)
        assume(branch_in_link(f, coarse) is None)
        fine, pat = natural_refinement(f, coarse, Fr(1, 8))
        assert Chain1D.of(fine.links) == fine
        assert mesh(fine) <= Fr(1, 8)
        assert pat == graph_pattern(f, fine, coarse)
        assert len(pat.entries) == len(fine)


if __name__ == "__main__":
    pytest.main([__file__, "-v", "--tb=short"])
