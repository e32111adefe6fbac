"""
Nested tubular chains built stage by stage, their audits, and SVG output.

Level 0 is the horizontal segment from (0,0) to (1,0). Level i is the layout of stage i
drawn inside the tube of level i-1 with half-width clamped so the new tube nests.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import drawsvg as draw

from contembed.access import EmbeddingPlan, _ray_clear
from contembed.chains import (Chain1D, Pattern, natural_refinement, refinement_slack,
                              shortest_branch_image, uniform_chain)
from contembed.compose import Nerve, TubeFrame, cross_section, layout, substitute
from contembed.errors import DoesNotFit, MarkNotOnNerve, SizeMismatch
from contembed.geometry import (Point, polygon_inside, polyline_crossings, upward_ray_distance,
                                upward_ray_hits)
from contembed.plmap import ONE, ZERO, evaluate, fmt

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SceneLevel:
    frame: TubeFrame
    chain: Chain1D
    pattern: Optional[Pattern] = None
    clamped: bool = False

    @property
    def nerve(self) -> Nerve:
        return self.frame.nerve

    @property
    def half_width(self) -> Fraction:
        return self.frame.half_width

    def link_polygon(self, lo, hi, clip: bool = True) -> List[Point]:
        if clip:
            lo, hi = max(lo, ZERO), min(hi, ONE)
        return self.frame.band(lo, hi)


@dataclass(frozen=True)
class Mark:
    point: Point
    label: str
    params: Tuple[Fraction, ...]


@dataclass(frozen=True)
class SceneGraph:
    levels: Tuple[SceneLevel, ...]
    marks: Tuple[Mark, ...]
    plan: EmbeddingPlan

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


def _mark_params(plan: EmbeddingPlan) -> List[List[Fraction]]:
    paths = []
    for x, _ in plan.marks:
        coords = [Fraction(x)]
        for f, _ in reversed(plan.stages[:plan.depth]):
            coords.append(evaluate(f, coords[-1]))
        paths.append(list(reversed(coords)))
    return paths


def _side(frame: TubeFrame, y: Fraction) -> int:
    """Sign making the left normal point up at parameter y of the frame."""
    q = frame.nerve.params
    for i in range(len(q) - 1):
        if q[i] <= y <= q[i + 1] and q[i] < q[i + 1]:
            return 1 if frame.normals[i][1] >= 0 else -1
    return 1


def _ray_margin(nerve: Nerve, point: Point) -> Optional[Fraction]:
    best = None
    for a, b in nerve.segments():
        dist = upward_ray_distance(point, a, b)
        if dist > 0:
            best = dist if best is None else min(best, dist)
    return best


def plan_scene(plan: EmbeddingPlan, chain_sizes: Sequence[int]) -> SceneGraph:
    """Build the nested tubes of the plan; half-widths are clamped and the clamps logged."""
    depth = plan.depth
    if len(chain_sizes) < depth + 1:
        raise SizeMismatch(f"need {depth + 1} chain sizes, got {len(chain_sizes)}")
    paths = _mark_params(plan)

    nerve0 = Nerve(((ZERO, ZERO), (ONE, ZERO)), (ZERO, ONE))
    w0 = min(plan.epsilons[0], TubeFrame(nerve0, plan.epsilons[0]).capacity())
    n0 = chain_sizes[0]
    if depth:
        # uniform links are 3/(2n) long
        n0 = max(n0, math.ceil(Fraction(3, 2) / shortest_branch_image(plan.stages[0][0])))
        if n0 > chain_sizes[0]:
            logger.info("level 0 chain grown from %d to %d links", chain_sizes[0], n0)
    levels = [SceneLevel(TubeFrame(nerve0, w0), uniform_chain(n0), None, w0 < plan.epsilons[0])]

    for i in range(1, depth + 1):
        f, p = plan.stages[i - 1]
        outer = levels[-1]
        bound = Fraction(1, chain_sizes[i])
        if i < depth:
            bound = min(bound, shortest_branch_image(plan.stages[i][0]))
        chain, pat = natural_refinement(f, outer.chain, bound)
        margin = refinement_slack(f, chain, outer.chain)
        graph = layout(f, p, outer.chain, max_shift=margin / 4)
        side = _side(outer.frame, paths[0][i - 1]) if paths else 1
        nerve = substitute(outer.frame, graph, side)

        probe = TubeFrame(nerve, plan.epsilons[i])
        kappa = probe.kappa
        n = graph.top_height
        c_max = Fraction(n + 1, n + 3)
        bounds = [probe.separation() / (4 * kappa),
                  (1 - c_max) * outer.half_width / (8 * kappa),
                  margin * outer.frame.min_speed() / (16 * kappa)]
        for path in paths:
            ray = _ray_margin(nerve, nerve.point_at(path[i]))
            if ray is not None:
                bounds.append(ray / (4 * kappa))
        width = min([plan.epsilons[i]] + bounds)
        if width <= 0:
            raise DoesNotFit(f"level {i} leaves no room for a tube")
        clamped = width < plan.epsilons[i]
        if clamped:
            logger.warning("level %d half-width clamped from %s to %s", i, fmt(plan.epsilons[i]), fmt(width))
        levels.append(SceneLevel(TubeFrame(nerve, width), chain, pat, clamped))

    marks = tuple(Mark(levels[-1].nerve.point_at(path[-1]), label, tuple(path))
                  for path, (_, label) in zip(paths, plan.marks))
    logger.info("scene with %d levels and %d marks", len(levels), len(marks))
    return SceneGraph(tuple(levels), marks, plan)


def _bbox(poly: Sequence[Point]):
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    return min(xs), min(ys), max(xs), max(ys)


def _box_inside(inner, outer) -> bool:
    return outer[0] < inner[0] and outer[1] < inner[1] and inner[2] < outer[2] and inner[3] < outer[3]


def planar_pattern(scene: SceneGraph, level: int) -> Optional[Pattern]:
    """Least coarse tube link containing each fine tube link, or None if one fits nowhere."""
    fine, coarse = scene.levels[level], scene.levels[level - 1]
    coarse_polys = [coarse.link_polygon(lo, hi, clip=False) for lo, hi in coarse.chain.links]
    coarse_boxes = [_bbox(poly) for poly in coarse_polys]
    entries = []
    for lo, hi in fine.chain.links:
        poly = fine.link_polygon(lo, hi)
        box = _bbox(poly)
        owner = next((a + 1 for a, (cpoly, cbox) in enumerate(zip(coarse_polys, coarse_boxes))
                      if _box_inside(box, cbox) and polygon_inside(poly, cpoly)), None)
        if owner is None:
            return None
        entries.append(owner)
    return Pattern(tuple(entries))


def _diameter(poly: Sequence[Point]) -> Fraction:
    x0, y0, x1, y1 = _bbox(poly)
    return max(x1 - x0, y1 - y0)


def verify_nesting(scene: SceneGraph) -> bool:
    widths = [level.half_width for level in scene.levels]
    if any(b >= a for a, b in zip(widths, widths[1:])):
        return False
    for level in scene.levels:
        if level.nerve.crossings():
            return False
        if polyline_crossings(level.frame.band(ZERO, ONE), closed=True):
            return False
    for i in range(1, len(scene.levels)):
        planar = planar_pattern(scene, i)
        if planar is None or planar != scene.levels[i].pattern:
            return False
        fine, coarse = scene.levels[i], scene.levels[i - 1]
        fine_diam = max(_diameter(fine.link_polygon(lo, hi)) for lo, hi in fine.chain.links)
        coarse_diam = max(_diameter(coarse.link_polygon(lo, hi)) for lo, hi in coarse.chain.links)
        if fine_diam >= coarse_diam:
            return False
    return True


def accessibility_probe(scene: SceneGraph, mark: Point) -> bool:
    """Upward ray from the mark meets the deepest nerve only there and no shallower nerve."""
    mark = (Fraction(mark[0]), Fraction(mark[1]))
    deepest = scene.levels[-1].nerve
    if mark not in deepest.points and deepest.segment_containing(mark) is None:
        raise MarkNotOnNerve(f"({fmt(mark[0])}, {fmt(mark[1])}) is not on the deepest nerve")
    if not _ray_clear(deepest, mark):
        return False
    for level in scene.levels[:-1]:
        if any(upward_ray_hits(mark, a, b) for a, b in level.nerve.segments()):
            return False
    return True


@dataclass(frozen=True)
class RenderOptions:
    width: int = 800
    margin: int = 24
    precision: int = 12
    band_colors: Tuple[str, ...] = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b")
    band_opacity: float = 0.25
    nerve_color: str = "#111111"
    mark_color: str = "#c00000"


def render_svg(scene: Optional[SceneGraph], options: RenderOptions = RenderOptions()) -> draw.Drawing:
    """SVG of the scene: bands per level, the deepest nerve, and labelled marks."""
    if scene is None or not scene.levels:
        return draw.Drawing(options.width, options.width)
    outline = scene.levels[0].frame.band(ZERO, ONE)
    x0, y0, x1, y1 = _bbox(outline)
    scale = Fraction(options.width - 2 * options.margin) / max(x1 - x0, y1 - y0)
    height = int((y1 - y0) * scale) + 2 * options.margin

    def sx(x) -> float:
        return round(float((x - x0) * scale + options.margin), options.precision)

    def sy(y) -> float:
        return round(float((y1 - y) * scale + options.margin), options.precision)

    d = draw.Drawing(options.width, height)
    for i, level in enumerate(scene.levels):
        path = draw.Path(fill=options.band_colors[i % len(options.band_colors)],
                         fill_opacity=options.band_opacity, stroke="none")
        ring = level.frame.band(ZERO, ONE)
        path.M(sx(ring[0][0]), sy(ring[0][1]))
        for x, y in ring[1:]:
            path.L(sx(x), sy(y))
        path.Z()
        d.append(path)
    nerve = scene.levels[-1].nerve
    line = draw.Path(stroke=options.nerve_color, stroke_width=1, fill="none")
    line.M(sx(nerve.points[0][0]), sy(nerve.points[0][1]))
    for x, y in nerve.points[1:]:
        line.L(sx(x), sy(y))
    d.append(line)
    for mark in scene.marks:
        cx, cy = sx(mark.point[0]), sy(mark.point[1])
        d.append(draw.Circle(cx, cy, 3, fill=options.mark_color))
        d.append(draw.Text(mark.label, 11, cx + 5, cy - 5, fill=options.mark_color))
    return d
