"""
Tests for exact planar predicates
"""

from fractions import Fraction as Fr

import pytest

from contembed.geometry import (orientation, point_in_polygon, point_segment_distance, polygon_inside,
                                polyline_crossings, segment_distance, segments_intersect,
                                upward_ray_distance, upward_ray_hits)

SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]


class TestPredicates:
    def test_orientation(self):
        assert orientation((0, 0), (1, 0), (0, 1)) == 1
        assert orientation((0, 0), (1, 0), (0, -1)) == -1
        assert orientation((0, 0), (1, 1), (Fr(1, 3), Fr(1, 3))) == 0

    @pytest.mark.parametrize("c,d,expected", [
        ((0, 1), (1, 0), True),                    # proper crossing
        ((1, 0), (2, 5), True),                    # shared endpoint
        ((Fr(1, 2), 0), (Fr(1, 2), 1), True),      # endpoint touching the interior
        ((0, Fr(1, 1000)), (1, Fr(1, 1000)), False),
        ((2, 0), (3, 0), False),                   # collinear, disjoint
    ])
    def test_segments_intersect(self, c, d, expected):
        assert segments_intersect((0, 0), (1, 0), c, d) is expected

    def test_point_in_polygon(self):
        assert point_in_polygon((Fr(1, 2), Fr(1, 2)), SQUARE) == 1
        assert point_in_polygon((1, Fr(1, 2)), SQUARE) == 0
        assert point_in_polygon((2, Fr(1, 2)), SQUARE) == -1

    def test_polygon_inside(self):
        outer = [(-1, -1), (2, -1), (2, 2), (-1, 2)]
        assert polygon_inside(SQUARE, outer)
        assert not polygon_inside(outer, SQUARE)
        assert not polygon_inside(SQUARE, SQUARE)


class TestCrossings:
    def test_simple_polyline(self):
        assert polyline_crossings([(0, 0), (1, 0), (1, 1), (0, 1)]) == []

    def test_self_crossing(self):
        assert polyline_crossings([(0, 0), (1, 1), (1, 0), (0, 1)]) == [(0, 2)]

    def test_fold_back(self):
        assert polyline_crossings([(0, 0), (1, 0), (Fr(1, 2), 0)]) == [(0, 1)]

    def test_closed_square(self):
        assert polyline_crossings(SQUARE, closed=True) == []

    def test_zero_length_segments_skipped(self):
        assert polyline_crossings([(0, 0), (1, 0), (1, 0), (1, 1)]) == []


class TestDistances:
    """Sup-norm distances"""

    def test_point_segment(self):
        assert point_segment_distance((0, 1), (-1, 0), (1, 0)) == 1
        assert point_segment_distance((3, 1), (-1, 0), (1, 0)) == 2

    def test_parallel_segments(self):
        assert segment_distance((0, 0), (1, 0), (0, Fr(1, 2)), (1, Fr(1, 2))) == Fr(1, 2)
        assert segment_distance((0, 0), (1, 1), (0, 1), (1, 0)) == 0

    def test_upward_ray(self):
        assert upward_ray_hits((Fr(1, 2), 0), (0, 1), (1, 1))
        assert not upward_ray_hits((Fr(1, 2), 0), (0, -1), (1, -1))
        assert upward_ray_distance((0, 0), (1, 1), (1, 2)) == 1
        assert upward_ray_distance((0, 0), (-1, -2), (1, -2)) == 2


if __name__ == "__main__":
    pytest.main([__file__, "-v", "--tb=short"])
