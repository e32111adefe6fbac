"""
Planar layouts of permuted graphs, tube frames, substitution and the star product.

A layout draws branch H_j as a horizontal at height p(j) and connector V_j as a vertical
at the adjusted critical value x~_j. A TubeFrame thickens a nerve polyline; its points are
addressed by (y, d) where y is the nerve parameter (the domain coordinate of the map the
nerve was drawn from) and d the signed offset along the left normal.
"""

import bisect
import logging
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from contembed.chains import Chain1D
from contembed.errors import DoesNotFit, LayoutFailed, NotAdmissible, NotConstructible
from contembed.geometry import Point, linf, on_segment, polyline_crossings, segment_distance
from contembed.permute import STRICT, ChainMode, Permutation, _check_size, is_admissible
from contembed.plmap import ONE, ZERO, PLMap, compose as compose_maps, fmt

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Nerve:
    """Polyline with a nondecreasing parameter per vertex (zero-length runs are connectors)."""

    points: Tuple[Point, ...]
    params: Tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.points)

    def segments(self) -> List[Tuple[Point, Point]]:
        return list(zip(self.points, self.points[1:]))

    def crossings(self) -> List[Tuple[int, int]]:
        return polyline_crossings(self.points)

    def point_at(self, y: Fraction) -> Point:
        """Nerve point with parameter y (the first vertex of a connector run)."""
        y = Fraction(y)
        i = bisect.bisect_left(self.params, y)
        if i < len(self.params) and self.params[i] == y:
            return self.points[i]
        if i == 0 or i == len(self.params):
            raise DoesNotFit(f"parameter {fmt(y)} outside the nerve")
        q0, q1 = self.params[i - 1], self.params[i]
        (x0, y0), (x1, y1) = self.points[i - 1], self.points[i]
        r = (y - q0) / (q1 - q0)
        return (x0 + r * (x1 - x0), y0 + r * (y1 - y0))

    def segment_containing(self, point: Point) -> Optional[int]:
        for i, (a, b) in enumerate(self.segments()):
            if a != b and on_segment(a, b, point):
                return i
        return None


@dataclass(frozen=True)
class PermutedGraph:
    f: PLMap
    p: Permutation
    xs: Tuple[Fraction, ...]
    chain: Optional[Chain1D] = None

    @property
    def horizontals(self) -> List[Tuple[int, int, Tuple[Fraction, Fraction]]]:
        return [(j, self.p[j], (self.xs[j], self.xs[j + 1])) for j in range(len(self.p))]

    @property
    def verticals(self) -> List[Tuple[int, Fraction, Tuple[int, int]]]:
        return [(j, self.xs[j], tuple(sorted((self.p[j - 1], self.p[j])))) for j in range(1, len(self.p))]

    @property
    def endpoint(self) -> Point:
        """Free end E of the height-p(0) horizontal."""
        return (self.xs[0], Fraction(self.p[0]))

    @property
    def top_height(self) -> int:
        return len(self.p) - 1

    def x_of(self, y: Fraction) -> Fraction:
        """Adjusted x of domain point y on its branch horizontal."""
        k = self.f.branch_of(y)
        w = self.f.critical_values
        return self.xs[k] + (self.f(y) - w[k]) * (self.xs[k + 1] - self.xs[k]) / (w[k + 1] - w[k])

    def nerve(self) -> Nerve:
        f, p, xs = self.f, self.p, self.xs
        cps = f.critical_points
        points: List[Point] = [(xs[0], Fraction(p[0]))]
        params: List[Fraction] = [ZERO]
        for k in range(len(p)):
            h = Fraction(p[k])
            for b in f.breakpoints:
                if cps[k] < b < cps[k + 1]:
                    points.append((self.x_of(b), h))
                    params.append(b)
            points.append((xs[k + 1], h))
            params.append(cps[k + 1])
            if k + 1 < len(p):
                points.append((xs[k + 1], Fraction(p[k + 1])))
                params.append(cps[k + 1])
        return Nerve(tuple(points), tuple(params))


def _effective_values(f: PLMap, p: Permutation, C: ChainMode) -> List[Fraction]:
    """Critical values, with chain-mode conflicts snapped onto the link-sharing endpoint."""
    w = list(f.critical_values)
    eff = list(w)
    if C == STRICT:
        return eff
    size = len(p)
    for _ in range((size + 1) ** 2):
        changed = False
        for j in range(1, size):
            low, high = sorted((p[j - 1], p[j]))
            for k in range(size):
                if not low < p[k] < high:
                    continue
                lo, hi = sorted((eff[k], eff[k + 1]))
                if lo < eff[j] < hi:
                    ends = [e for e in (k, k + 1) if C.share_link(w[j], eff[e])]
                    if not ends:
                        raise NotAdmissible(f"connector {j} crosses branch {k}")
                    eff[j] = eff[min(ends, key=lambda e: abs(eff[e] - w[j]))]
                    changed = True
        if not changed:
            return eff
    raise LayoutFailed("connector snapping did not settle")


def _order_constraints(p: Permutation, eff: Sequence[Fraction]) -> List[Tuple[int, int]]:
    """Pairs (a, b) requiring x~_a < x~_b among points of equal effective value."""
    size = len(p)
    pairs = []
    for j in range(1, size):
        low, high = sorted((p[j - 1], p[j]))
        for k in range(size):
            if not low < p[k] < high:
                continue
            lo_end, hi_end = (k, k + 1) if eff[k] < eff[k + 1] else (k + 1, k)
            if eff[j] == eff[lo_end]:
                pairs.append((j, lo_end))
            elif eff[j] == eff[hi_end]:
                pairs.append((hi_end, j))
            elif eff[lo_end] < eff[j] < eff[hi_end]:
                raise LayoutFailed(f"connector {j} runs through branch {k}")
    return pairs


def _ranks(members: List[int], pairs: List[Tuple[int, int]]) -> Dict[int, int]:
    """Deterministic topological ranks of one equal-value group."""
    inside = set(members)
    succ = {a: [] for a in members}
    indeg = {a: 0 for a in members}
    for a, b in pairs:
        if a in inside and b in inside:
            succ[a].append(b)
            indeg[b] += 1
    ready = sorted(a for a in members if indeg[a] == 0)
    ranks = {}
    while ready:
        a = ready.pop(0)
        ranks[a] = len(ranks)
        for b in succ[a]:
            indeg[b] -= 1
            if indeg[b] == 0:
                bisect.insort(ready, b)
    if len(ranks) != len(members):
        raise LayoutFailed("interleaved connectors with equal critical values cannot be separated")
    return ranks


def _link_slack(C: ChainMode, raw: Fraction, eff: Fraction) -> Fraction:
    if C == STRICT:
        return Fraction(1, 4)
    best = None
    for lo, hi in C.links:
        if lo < raw < hi and lo < eff < hi:
            slack = min(eff - lo, hi - eff)
            best = slack if best is None else max(best, slack)
    if best is None:
        raise LayoutFailed(f"no link holds both {fmt(raw)} and {fmt(eff)}")
    return best


def layout(f: PLMap, p: Permutation, C: ChainMode = STRICT, max_shift=None) -> PermutedGraph:
    """Concrete drawing of the permuted graph with exactly separated junctions.

    Junctions sharing a critical value are spread by multiples of a unit small enough to
    stay inside the shared links (and below max_shift when given)."""
    _check_size(f, p)
    if not is_admissible(f, p, C):
        raise NotAdmissible(f"{p} is not admissible for the map")
    w = list(f.critical_values)
    eff = _effective_values(f, p, C)
    pairs = _order_constraints(p, eff)

    groups: Dict[Fraction, List[int]] = {}
    for j, v in enumerate(eff):
        groups.setdefault(v, []).append(j)
    distinct = sorted(groups)
    gap = min((b - a for a, b in zip(distinct, distinct[1:])), default=ONE)
    slack = min(_link_slack(C, w[j], eff[j]) for j in range(len(eff)))
    delta = min(gap / 4, slack / 2)
    if max_shift is not None:
        delta = min(delta, Fraction(max_shift))
    unit = delta / (max(len(g) for g in groups.values()) + 1)

    xs = [ZERO] * len(eff)
    for value, members in groups.items():
        ranks = _ranks(members, pairs)
        top = len(members) - 1
        for j, r in ranks.items():
            # stay inside [0,1]: the group at 1 moves left, every other group moves right
            xs[j] = value + ((r - top) if value == ONE else r) * unit

    for k in range(len(p)):
        if (xs[k + 1] - xs[k]) * (w[k + 1] - w[k]) <= 0:
            raise LayoutFailed(f"branch {k} collapses after junction adjustment")

    graph = PermutedGraph(f, p, tuple(xs), None if C == STRICT else C)
    bad = graph.nerve().crossings()
    if bad:
        raise LayoutFailed(f"layout of {p} self-intersects at segments {bad[:3]}")
    logger.debug("layout %s: junction offsets unit %s", p, fmt(unit))
    return graph


def _cross(a: Point, b: Point) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def _box_gap(a: Point, b: Point, c: Point, d: Point) -> Fraction:
    dx = max(min(c[0], d[0]) - max(a[0], b[0]), min(a[0], b[0]) - max(c[0], d[0]), ZERO)
    dy = max(min(c[1], d[1]) - max(a[1], b[1]), min(a[1], b[1]) - max(c[1], d[1]), ZERO)
    return max(dx, dy)


@dataclass(frozen=True)
class TubeFrame:
    """Nerve thickened by half_width, with miter corners so offsets stay linear in d."""

    nerve: Nerve
    half_width: Fraction

    @classmethod
    def around(cls, nerve: Nerve, cap=Fraction(1, 8)) -> "TubeFrame":
        frame = cls(nerve, Fraction(cap))
        return cls(nerve, min(Fraction(cap), frame.capacity()))

    @cached_property
    def directions(self) -> List[Point]:
        pts = self.nerve.points
        return [(b[0] - a[0], b[1] - a[1]) for a, b in zip(pts, pts[1:])]

    @cached_property
    def normals(self) -> List[Point]:
        out = []
        for dx, dy in self.directions:
            scale = max(abs(dx), abs(dy))
            if scale == 0:
                raise LayoutFailed("nerve has a zero-length segment")
            out.append((-dy / scale, dx / scale))
        return out

    @cached_property
    def miters(self) -> List[Point]:
        """Corner displacement per unit offset at every vertex."""
        dirs, normals = self.directions, self.normals
        out = [normals[0]]
        for i in range(1, len(dirs)):
            a, b = dirs[i - 1], dirs[i]
            n0, n1 = normals[i - 1], normals[i]
            turn = _cross(a, b)
            if turn == 0:
                if a[0] * b[0] + a[1] * b[1] < 0:
                    raise LayoutFailed(f"nerve folds back on itself at vertex {i}")
                out.append(n1)
                continue
            r = (n1[0] - n0[0], n1[1] - n0[1])
            s = _cross(r, b) / turn
            out.append((n0[0] + s * a[0], n0[1] + s * a[1]))
        out.append(normals[-1])
        return out

    @cached_property
    def kappa(self) -> Fraction:
        return max([ONE] + [linf(k) for k in self.miters])

    def corner(self, i: int, d: Fraction) -> Point:
        v, k = self.nerve.points[i], self.miters[i]
        return (v[0] + d * k[0], v[1] + d * k[1])

    def point(self, y, d=ZERO) -> Point:
        y, d = Fraction(y), Fraction(d)
        q = self.nerve.params
        if y < q[0] or y > q[-1]:
            first = y < q[0]
            dx, dy = self.directions[0] if first else self.directions[-1]
            scale = max(abs(dx), abs(dy))
            base = self.corner(0 if first else len(q) - 1, d)
            t = (y - q[0]) if first else (y - q[-1])
            return (base[0] + t * dx / scale, base[1] + t * dy / scale)
        i = bisect.bisect_left(q, y)
        if q[i] == y:
            return self.corner(i, d)
        a, b = self.corner(i - 1, d), self.corner(i, d)
        r = (y - q[i - 1]) / (q[i] - q[i - 1])
        return (a[0] + r * (b[0] - a[0]), a[1] + r * (b[1] - a[1]))

    def path(self, ya, yb, d=ZERO) -> List[Tuple[Point, Fraction]]:
        """Offset curve at d from parameter ya to yb as (point, parameter) pairs."""
        ya, yb, d = Fraction(ya), Fraction(yb), Fraction(d)
        if ya > yb:
            return list(reversed(self.path(yb, ya, d)))
        q = self.nerve.params
        out = [(self.point(ya, d), ya)]
        if ya == yb:
            return out
        start = bisect.bisect_left(q, ya)
        after = bisect.bisect_right(q, ya)
        for i in range(start + 1, after):
            out.append((self.corner(i, d), ya))
        for i in range(after, bisect.bisect_left(q, yb)):
            out.append((self.corner(i, d), q[i]))
        out.append((self.point(yb, d), yb))
        deduped = [out[0]]
        for pt, y in out[1:]:
            if pt != deduped[-1][0]:
                deduped.append((pt, y))
        return deduped

    def band(self, lo, hi, width=None) -> List[Point]:
        """Closed polygon of offsets |d| <= width over the parameter range [lo, hi]."""
        w = self.half_width if width is None else Fraction(width)
        upper = [pt for pt, _ in self.path(lo, hi, w)]
        lower = [pt for pt, _ in self.path(lo, hi, -w)]
        ring = upper + list(reversed(lower))
        out = [ring[0]]
        for pt in ring[1:]:
            if pt != out[-1]:
                out.append(pt)
        if len(out) > 1 and out[-1] == out[0]:
            out.pop()
        return out

    def separation(self) -> Fraction:
        """Smallest sup-norm distance between non-adjacent segments or along one segment."""
        segs = self.nerve.segments()
        best = min(linf((b[0] - a[0], b[1] - a[1])) for a, b in segs)
        for i in range(len(segs)):
            a, b = segs[i]
            for j in range(i + 2, len(segs)):
                c, d = segs[j]
                if _box_gap(a, b, c, d) >= best:
                    continue
                best = min(best, segment_distance(a, b, c, d))
        return best

    def capacity(self) -> Fraction:
        return self.separation() / (4 * self.kappa)

    def min_speed(self) -> Fraction:
        pts, q = self.nerve.points, self.nerve.params
        speeds = [linf((pts[i + 1][0] - pts[i][0], pts[i + 1][1] - pts[i][1])) / (q[i + 1] - q[i])
                  for i in range(len(q) - 1) if q[i + 1] > q[i]]
        return min(speeds)


def cross_section(h: int, n: int) -> Fraction:
    """Signed offset fraction for inner height h of an n+1 branch graph."""
    return Fraction(2 * h + 1 - n, n + 3)


def substitute(outer: TubeFrame, inner: PermutedGraph, side: int = 1) -> Nerve:
    """Draw the inner layout inside the outer tube: x becomes the outer parameter and the
    height a cross-section offset; side=-1 swaps which side of the nerve is up."""
    n = inner.top_height
    src = inner.nerve()
    for x, _ in src.points:
        if not ZERO <= x <= ONE:
            raise DoesNotFit(f"inner layout reaches x={fmt(x)} outside the tube")

    def offset(h: Fraction) -> Fraction:
        return side * cross_section(int(h), n) * outer.half_width

    points: List[Point] = [outer.point(src.points[0][0], offset(src.points[0][1]))]
    params: List[Fraction] = [src.params[0]]
    for (x1, h1), (x2, h2), p1, p2 in zip(src.points, src.points[1:], src.params, src.params[1:]):
        if h1 == h2:
            for pt, y in outer.path(x1, x2, offset(h1))[1:]:
                points.append(pt)
                params.append(p1 + (y - x1) * (p2 - p1) / (x2 - x1))
        else:
            points.append(outer.point(x1, offset(h2)))
            params.append(p2)
    kept_pts, kept_params = [points[0]], [params[0]]
    for pt, y in zip(points[1:], params[1:]):
        if pt != kept_pts[-1]:
            kept_pts.append(pt)
            kept_params.append(y)
    nerve = Nerve(tuple(kept_pts), tuple(kept_params))
    bad = nerve.crossings()
    if bad:
        raise LayoutFailed(f"substituted nerve self-intersects at segments {bad[:3]}")
    return nerve


@dataclass(frozen=True)
class StarProduct:
    permutation: Permutation
    labels: Tuple[Tuple[int, int], ...]
    nerve: Nerve

    @property
    def top_label(self) -> Tuple[int, int]:
        return self.labels[self.permutation.top]


def star_labels(f: PLMap, g: PLMap) -> List[Tuple[int, int]]:
    """(g-branch i, f-branch j) for every branch A_ij of f after g, in domain order."""
    labels = []
    for b in compose_maps(f, g).branches():
        y = (b.lo + b.hi) / 2
        labels.append((g.branch_of(y), f.branch_of(g(y))))
    return labels


def star_product(p1: Permutation, p2: Permutation, f: PLMap, g: PLMap,
                 C1: ChainMode = STRICT, C2: ChainMode = STRICT) -> StarProduct:
    outer_graph = layout(f, p1, C1)
    frame = TubeFrame.around(outer_graph.nerve())
    side = 1 if f.branches()[p1.top].increasing else -1
    nerve = substitute(frame, layout(g, p2, C2), side)
    fg = compose_maps(f, g)
    labels = star_labels(f, g)
    levels = [nerve.point_at((b.lo + b.hi) / 2)[1] for b in fg.branches()]
    ordered = sorted(range(len(levels)), key=lambda i: levels[i])
    heights = [0] * len(levels)
    for rank, i in enumerate(ordered):
        heights[i] = rank
    return StarProduct(Permutation(tuple(heights)), tuple(labels), nerve)


def star(p1: Permutation, p2: Permutation, f: PLMap, g: PLMap,
         C1: ChainMode = STRICT, C2: ChainMode = STRICT) -> Permutation:
    """Branch order of f after g drawn inside the tube around the layout of f."""
    return star_product(p1, p2, f, g, C1, C2).permutation


def top_branch(f: PLMap, g: PLMap, p1: Permutation, p2: Permutation,
               C1: ChainMode = STRICT, C2: ChainMode = STRICT) -> Tuple[int, int]:
    pair = (p2.top, p1.top)
    if pair not in star_labels(f, g):
        raise NotConstructible(f"f after g has no branch A_{pair[0]}{pair[1]}")
    computed = star_product(p1, p2, f, g, C1, C2).top_label
    if computed != pair:
        raise LayoutFailed(f"star ranking puts {computed} on top, expected {pair}")
    return pair
