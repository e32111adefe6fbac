"""
Exact planar predicates on rational points.

Points are (x, y) tuples of Fraction. Distances are taken in the sup norm so that
every quantity stays rational.
"""

from fractions import Fraction
from typing import List, Sequence, Tuple

Point = Tuple[Fraction, Fraction]


def orient2d(p: Point, q: Point, r: Point) -> Fraction:
    """Twice the signed area of (p, q, r); positive for a left turn."""
    (px, py), (qx, qy), (rx, ry) = p, q, r
    return (qx - px) * (ry - py) - (qy - py) * (rx - px)


def orientation(p: Point, q: Point, r: Point) -> int:
    det = orient2d(p, q, r)
    return 1 if det > 0 else (-1 if det < 0 else 0)


def in_box(p: Point, q: Point, r: Point) -> bool:
    """r lies in the bounding box of segment pq."""
    return (min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1]))


def on_segment(p: Point, q: Point, r: Point) -> bool:
    return orient2d(p, q, r) == 0 and in_box(p, q, r)


def boxes_overlap(a: Point, b: Point, c: Point, d: Point) -> bool:
    return (max(min(a[0], b[0]), min(c[0], d[0])) <= min(max(a[0], b[0]), max(c[0], d[0]))
            and max(min(a[1], b[1]), min(c[1], d[1])) <= min(max(a[1], b[1]), max(c[1], d[1])))


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segments ab and cd share at least one point."""
    if not boxes_overlap(a, b, c, d):
        return False
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    if o1 == 0 and in_box(a, b, c):
        return True
    if o2 == 0 and in_box(a, b, d):
        return True
    if o3 == 0 and in_box(c, d, a):
        return True
    if o4 == 0 and in_box(c, d, b):
        return True
    return False


def consecutive_overlap(a: Point, b: Point, c: Point) -> bool:
    """Segments ab and bc meet in more than their shared vertex b."""
    if orient2d(a, b, c) != 0:
        return False
    # collinear: they overlap iff c folds back toward a
    return (c[0] - b[0]) * (a[0] - b[0]) + (c[1] - b[1]) * (a[1] - b[1]) > 0


def polyline_crossings(points: Sequence[Point], closed: bool = False) -> List[Tuple[int, int]]:
    """Pairs of segment indices that meet where the polyline says they should not.

    Consecutive segments may only share their common vertex; all others must be disjoint.
    Zero-length segments are skipped.
    """
    segs = [(i, points[i], points[i + 1]) for i in range(len(points) - 1) if points[i] != points[i + 1]]
    if closed and len(points) > 2 and points[-1] != points[0]:
        segs.append((len(points) - 1, points[-1], points[0]))
    bad = []
    count = len(segs)
    for u in range(count):
        i, a, b = segs[u]
        for v in range(u + 1, count):
            j, c, d = segs[v]
            adjacent = v == u + 1 or (closed and u == 0 and v == count - 1)
            if adjacent:
                shared = b if b == c else (a if a == d else None)
                if shared is None:
                    if segments_intersect(a, b, c, d):
                        bad.append((i, j))
                    continue
                if shared == b and consecutive_overlap(a, b, d):
                    bad.append((i, j))
                elif shared == a and consecutive_overlap(c, a, b):
                    bad.append((i, j))
                continue
            if segments_intersect(a, b, c, d):
                bad.append((i, j))
    return bad


def point_in_polygon(p: Point, polygon: Sequence[Point]) -> int:
    """1 strictly inside, 0 on the boundary, -1 outside (even-odd rule, exact)."""
    n = len(polygon)
    inside = False
    for i in range(n):
        a = polygon[i]
        b = polygon[(i + 1) % n]
        if on_segment(a, b, p):
            return 0
        if (a[1] > p[1]) != (b[1] > p[1]):
            x_cross = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
            if p[0] < x_cross:
                inside = not inside
    return 1 if inside else -1


def polygon_inside(inner: Sequence[Point], outer: Sequence[Point]) -> bool:
    """Closed inner polygon lies in the open region bounded by outer."""
    if any(point_in_polygon(p, outer) != 1 for p in inner):
        return False
    n, m = len(inner), len(outer)
    for i in range(n):
        a, b = inner[i], inner[(i + 1) % n]
        for j in range(m):
            if segments_intersect(a, b, outer[j], outer[(j + 1) % m]):
                return False
    return True


def linf(v: Point) -> Fraction:
    return max(abs(v[0]), abs(v[1]))


def _convex_pl_minimum(pieces) -> Fraction:
    """Minimum over t in [0,1] of max(|a + b t|) across the affine pieces (a, b).

    The function is convex and piecewise linear; its minimum sits at 0, 1, a root of a
    piece or a crossing of two pieces (with either sign).
    """
    candidates = {Fraction(0), Fraction(1)}
    for a, b in pieces:
        if b != 0:
            candidates.add(-a / b)
    for idx, (a1, b1) in enumerate(pieces):
        for a2, b2 in pieces[idx + 1:]:
            for s in (1, -1):
                denom = b1 - s * b2
                if denom != 0:
                    candidates.add((s * a2 - a1) / denom)
    best = None
    for t in candidates:
        if 0 <= t <= 1:
            value = max(abs(a + b * t) for a, b in pieces)
            if best is None or value < best:
                best = value
    return best


def point_segment_distance(p: Point, a: Point, b: Point) -> Fraction:
    """Sup-norm distance from p to the closed segment ab."""
    pieces = [(a[0] - p[0], b[0] - a[0]), (a[1] - p[1], b[1] - a[1])]
    return _convex_pl_minimum(pieces)


def segment_distance(a: Point, b: Point, c: Point, d: Point) -> Fraction:
    """Sup-norm distance between closed segments (zero if they meet)."""
    if segments_intersect(a, b, c, d):
        return Fraction(0)
    return min(point_segment_distance(a, c, d), point_segment_distance(b, c, d),
               point_segment_distance(c, a, b), point_segment_distance(d, a, b))


def upward_ray_hits(p: Point, a: Point, b: Point) -> bool:
    """The closed vertical ray {p + (0, s) : s >= 0} meets segment ab."""
    if max(a[1], b[1]) < p[1] or not min(a[0], b[0]) <= p[0] <= max(a[0], b[0]):
        return False
    if a[0] == b[0]:
        return max(a[1], b[1]) >= p[1]
    y = a[1] + (p[0] - a[0]) * (b[1] - a[1]) / (b[0] - a[0])
    return y >= p[1]


def upward_ray_distance(p: Point, a: Point, b: Point) -> Fraction:
    """Sup-norm distance from the upward vertical ray at p to segment ab."""
    if upward_ray_hits(p, a, b):
        return Fraction(0)
    # distance to the ray: max(|x - px|, max(0, py - y)) minimized along the segment
    ax, ay = a[0] - p[0], p[1] - a[1]
    bx, by = b[0] - a[0], a[1] - b[1]
    candidates = [Fraction(0), Fraction(1)]
    if bx != 0:
        candidates.append(-ax / bx)
    if by != 0:
        candidates.append(-ay / by)
    for s in (1, -1):
        if bx - s * by != 0:
            candidates.append((s * ay - ax) / (bx - s * by))
    best = None
    for t in candidates:
        if 0 <= t <= 1:
            value = max(abs(ax + bx * t), max(Fraction(0), ay + by * t))
            if best is None or value < best:
                best = value
    return best
