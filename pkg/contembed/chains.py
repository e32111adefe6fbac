"""
Chain covers of the unit interval, refinement, mesh and patterns.

Links are open rational intervals. Patterns are 1-based tuples of coarse link indices,
with the least index taken whenever a fine link fits in two coarse links.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from contembed.errors import BadChain, MapSyntaxError, MeshTooCoarse, NotARefinement
from contembed.plmap import (ONE, ZERO, PLMap, as_fraction, critical_value_gap, fmt, image,
                             preimages)

logger = logging.getLogger(__name__)

Link = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Chain1D:
    links: Tuple[Link, ...]

    @classmethod
    def of(cls, links: Sequence) -> "Chain1D":
        """Validate the chain condition: links meet iff their indices differ by at most one."""
        parsed = tuple((Fraction(lo), Fraction(hi)) for lo, hi in links)
        if not parsed:
            raise BadChain("a chain needs at least one link")
        for lo, hi in parsed:
            if not lo < hi:
                raise BadChain(f"empty link ({fmt(lo)}, {fmt(hi)})")
        for i in range(len(parsed)):
            for j in range(i + 1, len(parsed)):
                meet = max(parsed[i][0], parsed[j][0]) < min(parsed[i][1], parsed[j][1])
                if meet != (j - i == 1):
                    raise BadChain(f"links {i + 1} and {j + 1} violate the chain condition")
        return cls(parsed)

    def __len__(self) -> int:
        return len(self.links)

    def __str__(self) -> str:
        return "chain " + " ".join(f"({fmt(lo)},{fmt(hi)})" for lo, hi in self.links)

    @property
    def covers_unit(self) -> bool:
        return self.links[0][0] < ZERO and self.links[-1][1] > ONE

    def link_of(self, x: Fraction) -> List[int]:
        """1-based indices of the links containing x."""
        return [i + 1 for i, (lo, hi) in enumerate(self.links) if lo < x < hi]

    def share_link(self, x: Fraction, y: Fraction) -> bool:
        return any(lo < x < hi and lo < y < hi for lo, hi in self.links)

    def overlaps(self) -> List[Link]:
        return [(self.links[i + 1][0], self.links[i][1]) for i in range(len(self.links) - 1)]


@dataclass(frozen=True)
class Pattern:
    entries: Tuple[int, ...]

    def __post_init__(self):
        for a, b in zip(self.entries, self.entries[1:]):
            if abs(a - b) > 1:
                raise NotARefinement(f"pattern jumps from {a} to {b}")

    def __str__(self) -> str:
        return "(" + ", ".join(str(e) for e in self.entries) + ")"


_LINK = re.compile(r"\(\s*([^,()\s]+)\s*,\s*([^,()\s]+)\s*\)")


def parse_chain(text: str) -> Chain1D:
    body = str(text).strip()
    if body.startswith("chain"):
        body = body[len("chain"):]
    links = _LINK.findall(body)
    if not links or _LINK.sub("", body).strip():
        raise MapSyntaxError(f"bad chain literal {text!r}")
    return Chain1D.of([(as_fraction(lo), as_fraction(hi)) for lo, hi in links])


def uniform_chain(n: int) -> Chain1D:
    if n < 1:
        raise BadChain("uniform_chain needs n >= 1")
    pad = Fraction(1, 4 * n)
    return Chain1D(tuple((Fraction(i - 1, n) - pad, Fraction(i, n) + pad) for i in range(1, n + 1)))


def mesh(C: Chain1D) -> Fraction:
    return max(hi - lo for lo, hi in C.links)


def _inside(fine: Link, coarse: Link, proper: bool) -> bool:
    if proper:
        return coarse[0] < fine[0] and fine[1] < coarse[1]
    return coarse[0] <= fine[0] and fine[1] <= coarse[1]


def refines(Cf: Chain1D, Cc: Chain1D, proper: bool = False) -> bool:
    """Every fine link lies in a coarse link (its closure does, when proper)."""
    return all(any(_inside(link, c, proper) for c in Cc.links) for link in Cf.links)


def pattern(Cf: Chain1D, Cc: Chain1D) -> Pattern:
    entries = []
    for j, link in enumerate(Cf.links):
        owner = next((i + 1 for i, c in enumerate(Cc.links) if _inside(link, c, False)), None)
        if owner is None:
            raise NotARefinement(f"fine link {j + 1} lies in no coarse link")
        entries.append(owner)
    return Pattern(tuple(entries))


def _closed_image(f: PLMap, link: Link) -> Tuple[Fraction, Fraction]:
    return image(f, max(link[0], ZERO), min(link[1], ONE))


def graph_pattern(f: PLMap, Cf: Chain1D, Cc: Chain1D) -> Pattern:
    """Pattern read along the graph: least coarse link holding f(closure of each fine link)."""
    entries = []
    for j, link in enumerate(Cf.links):
        lo, hi = _closed_image(f, link)
        owner = next((i + 1 for i, c in enumerate(Cc.links) if c[0] < lo and hi < c[1]), None)
        if owner is None:
            raise NotARefinement(f"image of fine link {j + 1} lies in no coarse link")
        entries.append(owner)
    return Pattern(tuple(entries))


def refinement_slack(f: PLMap, Cf: Chain1D, Cc: Chain1D) -> Fraction:
    """How far the fine-link images may move before the graph pattern changes.

    That is the distance from every image endpoint to every coarse link boundary; when an
    endpoint sits exactly on a boundary the margin to the pattern link is used instead.
    """
    pat = graph_pattern(f, Cf, Cc)
    slack = None
    fallback = None
    for link, a in zip(Cf.links, pat.entries):
        lo, hi = _closed_image(f, link)
        c_lo, c_hi = Cc.links[a - 1]
        own = min(lo - c_lo, c_hi - hi)
        fallback = own if fallback is None else min(fallback, own)
        for b_lo, b_hi in Cc.links:
            margin = min(abs(lo - b_lo), abs(hi - b_hi))
            if margin > 0:
                slack = margin if slack is None else min(slack, margin)
    return min(slack, fallback) if slack is not None else fallback


def shortest_branch_image(f: PLMap) -> Fraction:
    """Length of the shortest branch image; chains of mesh at most this keep every branch
    image out of the inside of a single link."""
    return min(hi - lo for lo, hi in (b.image for b in f.branches()))


def branch_in_link(f: PLMap, Cc: Chain1D) -> Optional[int]:
    """Index of a branch whose closed image sits inside one coarse link, if any."""
    for branch in f.branches():
        lo, hi = branch.image
        if any(c_lo < lo and hi < c_hi for c_lo, c_hi in Cc.links):
            return branch.index
    return None


def natural_refinement(f: PLMap, Cc: Chain1D, mesh_bound, padding=None) -> Tuple[Chain1D, Pattern]:
    """Fine chain following the graph of f through Cc.

    The domain is cut at the f-preimages of the coarse overlap midlines and at the
    breakpoints of f, then subdivided to half the mesh bound; each piece is padded by
    the same amount on both sides.
    """
    mesh_bound = Fraction(mesh_bound)
    if mesh_bound <= 0:
        raise ValueError("mesh_bound must be positive")
    if not Cc.covers_unit:
        raise BadChain("coarse chain must cover [0,1] with room at both ends")
    stuck = branch_in_link(f, Cc)
    if stuck is not None:
        bound = critical_value_gap(f)
        raise MeshTooCoarse(f"branch {stuck} maps inside a single coarse link; "
                            f"use a chain of mesh below {fmt(bound) if bound else 'the branch images'}",
                            bound)

    midlines = [(lo + hi) / 2 for lo, hi in Cc.overlaps()]
    cuts = set(f.breakpoints)
    for m in midlines:
        if ZERO <= m <= ONE:
            cuts.update(preimages(f, m))
    cuts = sorted(cuts)
    half = mesh_bound / 2
    points = [cuts[0]]
    for a, b in zip(cuts, cuts[1:]):
        pieces = -(-(b - a) // half)
        pieces = max(int(pieces), 1)
        points.extend(a + (b - a) * Fraction(k, pieces) for k in range(1, pieces + 1))

    if padding is None:
        min_piece = min(b - a for a, b in zip(points, points[1:]))
        overlap = min((hi - lo for lo, hi in Cc.overlaps()), default=mesh(Cc))
        margins = [(hi - lo) / 2 for lo, hi in Cc.overlaps()]
        margins += [-Cc.links[0][0], Cc.links[-1][1] - ONE]
        slack = min(margins)
        steep = max(abs((v1 - v0) / (b1 - b0)) for b0, b1, v0, v1 in
                    zip(f.breakpoints, f.breakpoints[1:], f.values, f.values[1:]))
        padding = min(min_piece / 4, mesh_bound / 4, slack / (2 * steep), overlap / 8)
    padding = Fraction(padding)

    links = [(a - padding, b + padding) for a, b in zip(points, points[1:])]
    Cf = Chain1D(tuple(links))
    pat = graph_pattern(f, Cf, Cc)
    logger.debug("natural refinement: %d fine links, padding %s", len(Cf), fmt(padding))
    return Cf, pat
