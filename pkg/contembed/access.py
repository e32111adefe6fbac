"""
Accessibility machinery: surjective intervals, right accessible sets, interval pullbacks,
two-point topmost permutations, the P_eps test, certificates and family witnesses.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from contembed.compose import layout
from contembed.errors import (BadBlocks, BadInterval, ContEmbedError, NoSurjectiveInterval,
                              NotConstructible, OutOfRange, SizeMismatch,
                              TooFewSurjectiveIntervals, ZigzagObstruction)
from contembed.geometry import on_segment, upward_ray_hits
from contembed.permute import (STRICT, Permutation, _conflict, enumerate_admissible,
                               is_inside_zigzag, topmost_permutation)
from contembed.plmap import (ONE, ZERO, IntervalSet, PLMap, as_fraction, evaluate, fmt,
                             from_points, image, iterate, parse_plmap, preimages_in)

logger = logging.getLogger(__name__)

Interval = Tuple[Fraction, Fraction]


class Side(str, Enum):
    LEFT = "LEFT"
    RIGHT = "RIGHT"


@dataclass(frozen=True)
class SurjectiveDecomposition:
    intervals: Tuple[Interval, ...]
    increasing: Tuple[bool, ...]
    right_accessible: Tuple[IntervalSet, ...]
    target: Interval
    domain: Interval = (ZERO, ONE)

    def __len__(self) -> int:
        return len(self.intervals)


def _interval(pair) -> Interval:
    lo, hi = (as_fraction(v) if not isinstance(v, Fraction) else v for v in pair)
    if lo > hi:
        raise BadInterval(f"[{fmt(lo)}, {fmt(hi)}] is empty")
    return lo, hi


def surjective_intervals(f: PLMap, target=(ZERO, ONE), domain=(ZERO, ONE)) -> SurjectiveDecomposition:
    """Minimal closed subintervals of the domain mapped onto the target, left to right."""
    t_lo, t_hi = _interval(target)
    d_lo, d_hi = _interval(domain)
    i_lo, i_hi = image(f, d_lo, d_hi)
    if t_lo < i_lo or t_hi > i_hi or t_lo == t_hi:
        raise NoSurjectiveInterval(f"[{fmt(t_lo)}, {fmt(t_hi)}] is not inside f([{fmt(d_lo)}, {fmt(d_hi)}])")
    marks = sorted([(x, 0) for x in preimages_in(f, t_lo, d_lo, d_hi)]
                   + [(x, 1) for x in preimages_in(f, t_hi, d_lo, d_hi)])
    intervals, increasing = [], []
    for (x, kx), (y, ky) in zip(marks, marks[1:]):
        if kx != ky and image(f, x, y) == (t_lo, t_hi):
            intervals.append((x, y))
            increasing.append(kx == 0)
    if not intervals:
        raise NoSurjectiveInterval("no subinterval maps onto the target")
    rsets = tuple(right_accessible(f, a) for a in intervals)
    return SurjectiveDecomposition(tuple(intervals), tuple(increasing), rsets, (t_lo, t_hi), (d_lo, d_hi))


def right_accessible(f: PLMap, A) -> IntervalSet:
    """Points of A whose value never recurs to their right inside A."""
    lo, hi = _interval(A)
    cuts = [lo] + [b for b in f.breakpoints if lo < b < hi] + [hi]
    parts = [(hi, hi, True, True)]
    for s0, s1 in zip(cuts, cuts[1:]):
        v0, v1 = evaluate(f, s0), evaluate(f, s1)
        rest_lo, rest_hi = image(f, s1, hi)
        if v1 > v0:
            bound = rest_lo
            if v0 < bound:
                x_star = s0 + (bound - v0) * (s1 - s0) / (v1 - v0)
                parts.append((s0, min(x_star, s1), True, False))
        else:
            bound = rest_hi
            if v0 > bound:
                x_star = s0 + (bound - v0) * (s1 - s0) / (v1 - v0)
                parts.append((s0, min(x_star, s1), True, False))
    return IntervalSet.of(parts)


def pullback_interval(f: PLMap, A, J) -> Interval:
    """Closed J^i inside A with f(J^i) = J and endpoints mapped to endpoints."""
    lo, hi = _interval(A)
    a, b = _interval(J)
    t_lo, t_hi = image(f, lo, hi)
    if a < t_lo or b > t_hi:
        raise BadInterval(f"[{fmt(a)}, {fmt(b)}] is not inside f(A)")
    a_i = preimages_in(f, a, lo, hi)[-1]
    b_i = preimages_in(f, b, lo, hi)[-1]
    if b_i < a_i:
        a_tilde = min(x for x in preimages_in(f, a, lo, hi) if x > b_i)
        result = (b_i, a_tilde)
    elif a_i < b_i:
        b_tilde = min(x for x in preimages_in(f, b, lo, hi) if x > a_i)
        result = (a_i, b_tilde)
    else:
        result = (a_i, a_i)
    if image(f, *result) != (a, b):
        raise BadInterval("pulled back interval does not map onto J")
    return result


def _ray_clear(nerve, point) -> bool:
    """Upward vertical ray from a nerve point meets the nerve only at that point."""
    for a, b in nerve.segments():
        if on_segment(a, b, point):
            if max(a[1], b[1]) > point[1]:
                return False
        elif upward_ray_hits(point, a, b):
            return False
    return True


def points_topmost(f: PLMap, p: Permutation, points: Sequence[Fraction]) -> bool:
    """Both (all) domain points sit on clear upward rays in the layout of p."""
    try:
        graph = layout(f, p, STRICT)
    except ContEmbedError:
        return False
    nerve = graph.nerve()
    for x in points:
        # at a critical point the upper end of the connector is the visible one
        k = max({f.branch_of(x), f.branch_of(x, prefer_right=True)}, key=lambda b: p[b])
        spot = (graph.x_of(x), Fraction(p[k]))
        if not _ray_clear(nerve, spot):
            return False
    return True


def _grow(f: PLMap, block: Sequence[int]) -> Iterator[Permutation]:
    """Admissible completions placing the block on top, then growing outward one side at a time."""
    size = f.branch_count
    values = f.critical_values
    images = [b.image for b in f.branches()]
    heights: List[Optional[int]] = [None] * size
    for rank, branch in enumerate(block):
        heights[branch] = size - 1 - rank

    def ok(branch: int) -> bool:
        for j in range(1, size):
            a, b = heights[j - 1], heights[j]
            if a is None or b is None:
                continue
            low, high = sorted((a, b))
            for kk in range(size):
                hk = heights[kk]
                if hk is not None and low < hk < high and branch in (j - 1, j, kk) \
                        and _conflict(values, images, j, kk, STRICT):
                    return False
        return True

    if not all(ok(b) for b in block):
        return

    def extend(L: int, R: int, h: int):
        if L < 0 and R >= size:
            yield Permutation(tuple(heights))
            return
        for branch, nxt in ((L, (L - 1, R)), (R, (L, R + 1))):
            if 0 <= branch < size:
                heights[branch] = h
                if ok(branch):
                    yield from extend(nxt[0], nxt[1], h - 1)
                heights[branch] = None

    yield from extend(min(block) - 1, max(block) + 1, size - 1 - len(block))


def _fold_block(f: PLMap, u: Fraction, v: Fraction) -> List[int]:
    """Top block of the fold making both ends of [u, v] topmost, highest first.

    Branches from u up to the first critical point m at or right of v keep their order on
    top; whatever lies right of m, and the tail beyond the surjective interval, is folded
    underneath by the completion.
    """
    m = min(c for c in f.critical_points if c >= v)
    j_m = f.branch_of(m)
    j_lo = min(f.branch_of(u, prefer_right=True), j_m)
    return list(range(j_m, j_lo - 1, -1))


def two_point_topmost(f: PLMap, A, Ji, max_tries: int = 5000) -> Permutation:
    """STRICT-admissible permutation putting both endpoints of J^i on top.

    The fold about the first critical point beyond J^i is tried first; growth around the
    spanned branches and brute force back it up.
    """
    lo, hi = _interval(A)
    u, v = _interval(Ji)
    if u < lo or v > hi:
        raise BadInterval(f"[{fmt(u)}, {fmt(v)}] is not inside [{fmt(lo)}, {fmt(hi)}]")
    ends = [u, v]
    for p in itertools.islice(_grow(f, _fold_block(f, u, v)), 64):
        if points_topmost(f, p, ends):
            logger.debug("two-point topmost by folding: %s", p)
            return p

    j1, j2 = sorted((f.branch_of(u), f.branch_of(v)))
    span = list(range(j1, j2 + 1))
    if len(span) <= 6:
        orders = itertools.permutations(span)
    else:
        orders = iter([tuple(span), tuple(reversed(span))])
    tries = 0
    for order in orders:
        for p in _grow(f, order):
            tries += 1
            if points_topmost(f, p, ends):
                logger.debug("two-point topmost by growth: %s", p)
                return p
            if tries >= max_tries:
                break
    if f.branch_count <= 8:
        for p in enumerate_admissible(f, STRICT):
            if points_topmost(f, p, ends):
                logger.debug("two-point topmost by search: %s", p)
                return p
    raise NotConstructible(f"no permutation puts both {fmt(u)} and {fmt(v)} on top")


def _escaping_value(f: PLMap, K: Interval, target: Interval) -> Optional[Fraction]:
    """Value at the first critical point right of K that leaves f(K), if any."""
    for c, value in zip(f.critical_points, f.critical_values):
        if c > K[1] and not target[0] <= value <= target[1]:
            return value
    return None


def two_point_topmost_restricted(f: PLMap, K, J) -> Tuple[int, int, Permutation, Permutation]:
    """Indices alpha, beta (1-based, at least two apart) of surjective intervals of f on K
    whose pulled-back J has both endpoints topmost, with the permutations doing it.

    When f leaves f(K) above right of K the increasing intervals are used, when it leaves
    below the decreasing ones; any separated pair is tried after that.
    """
    K = _interval(K)
    target = image(f, *K)
    dec = surjective_intervals(f, target, K)
    n = len(dec)
    if n < 4:
        raise TooFewSurjectiveIntervals(f"f restricted to K has {n} surjective intervals, need 4")
    found = {}

    def attempt(i: int) -> Optional[Permutation]:
        if i not in found:
            try:
                Ji = pullback_interval(f, dec.intervals[i - 1], J)
                found[i] = two_point_topmost(f, dec.intervals[i - 1], Ji)
            except NotConstructible:
                found[i] = None
        return found[i]

    pools = []
    escape = _escaping_value(f, K, target)
    if escape is not None:
        upward = escape > target[1]
        pools.append([i for i in range(1, n + 1) if dec.increasing[i - 1] == upward])
    pools.append(list(range(1, n + 1)))
    for pool in pools:
        for alpha, beta in itertools.combinations(pool, 2):
            if beta - alpha >= 2 and attempt(alpha) is not None and attempt(beta) is not None:
                logger.debug("restricted two-point pair (%d, %d)", alpha, beta)
                return alpha, beta, found[alpha], found[beta]
    raise NotConstructible("no pair of surjective intervals admits two-point topmost permutations")


def is_P_eps(f: PLMap, eps) -> bool:
    """Some x1 < x2 < x3 take values eps-close to (0, 1, 0) or to (1, 0, 1)."""
    eps = Fraction(eps)
    return _three_point_witness(f, eps) is not None


def _three_point_witness(f: PLMap, eps: Fraction) -> Optional[Tuple[Fraction, Fraction, Fraction]]:
    cps, vals = f.critical_points, f.critical_values
    for near_zero_first in (True, False):
        def outer(v):
            return v < eps if near_zero_first else 1 - v < eps

        def middle(v):
            return 1 - v < eps if near_zero_first else v < eps

        stage, picked = 0, []
        for c, v in zip(cps, vals):
            if stage in (0, 2) and outer(v):
                picked.append(c)
                stage += 1
            elif stage == 1 and middle(v):
                picked.append(c)
                stage += 1
            if stage == 3:
                return tuple(picked)
    return None


def pin_three_points(f: PLMap, eps) -> Tuple[PLMap, Tuple[Fraction, Fraction, Fraction]]:
    """Move the three witnessing critical values of a P_eps map exactly to 0,1,0 (or 1,0,1)."""
    eps = Fraction(eps)
    witness = _three_point_witness(f, eps)
    if witness is None:
        raise NotConstructible(f"map is not P_{fmt(eps)}")
    x1, x2, x3 = witness
    low_first = evaluate(f, x1) < Fraction(1, 2)
    pinned = {x1: ZERO if low_first else ONE, x2: ONE if low_first else ZERO, x3: ZERO if low_first else ONE}
    values = [pinned.get(b, v) for b, v in zip(f.breakpoints, f.values)]
    return from_points(f.breakpoints, values), witness


@dataclass(frozen=True)
class EmbeddingPlan:
    stages: Tuple[Tuple[PLMap, Permutation], ...]
    epsilons: Tuple[Fraction, ...]
    depth: int
    marks: Tuple[Tuple[Fraction, str], ...] = ()

    def __post_init__(self):
        if self.depth < 0 or self.depth > len(self.stages):
            raise SizeMismatch(f"depth {self.depth} needs that many stages, have {len(self.stages)}")
        if len(self.epsilons) < self.depth + 1:
            raise SizeMismatch("epsilon schedule shorter than depth + 1")
        if any(e <= 0 for e in self.epsilons) or any(b >= a for a, b in zip(self.epsilons, self.epsilons[1:])):
            raise BadInterval("epsilon schedule must be positive and strictly decreasing")


def default_schedule(depth: int, eps0=Fraction(1, 8)) -> Tuple[Fraction, ...]:
    return tuple(Fraction(eps0) / 4 ** i for i in range(depth + 1))


def consistent_target(stages: Sequence[PLMap], branch_indices: Sequence[int]) -> List[Interval]:
    """Nested coordinate intervals S_i of points x_i in the designated branches with
    f_i(x_i) in S_(i-1)."""
    out: List[Interval] = []
    for f, k in zip(stages, branch_indices):
        b = f.branches()[k]
        if not out:
            out.append((b.lo, b.hi))
            continue
        s_lo, s_hi = out[-1]
        i_lo, i_hi = b.image
        c, d = max(s_lo, i_lo), min(s_hi, i_hi)
        if c > d:
            raise NotConstructible(f"branch {k} of stage {len(out) + 1} misses the previous target")
        ends = sorted(preimages_in(f, c, b.lo, b.hi)[:1] + preimages_in(f, d, b.lo, b.hi)[:1])
        out.append((ends[0], ends[-1]))
    return out


@dataclass(frozen=True)
class AccessCertificate:
    stages: Tuple[PLMap, ...]
    branches: Tuple[int, ...]
    permutations: Tuple[Permutation, ...]
    target: Tuple[Fraction, ...] = field(default=())

    def to_plan(self, epsilons=None, eps0=Fraction(1, 8)) -> EmbeddingPlan:
        depth = len(self.stages)
        marks = ((self.target[-1], "x"),) if self.target else ()
        return EmbeddingPlan(tuple(zip(self.stages, self.permutations)),
                             tuple(epsilons) if epsilons else default_schedule(depth, eps0), depth, marks)


def certificate(stages: Sequence[PLMap], branch_indices: Sequence[int]) -> AccessCertificate:
    """Per-stage topmost permutations, or the first stage trapped in a zigzag."""
    if len(stages) != len(branch_indices):
        raise SizeMismatch("one branch index per stage is required")
    perms = []
    for stage, (f, k) in enumerate(zip(stages, branch_indices), start=1):
        witness = is_inside_zigzag(f, k)
        if witness is not None:
            raise ZigzagObstruction(stage, witness)
        perms.append(topmost_permutation(f, k))
    target: Tuple[Fraction, ...] = ()
    try:
        chain = consistent_target(stages, branch_indices) if stages else []
    except NotConstructible as exc:
        logger.warning("certificate without a target point: %s", exc)
        chain = []
    if chain:
        s_lo, s_hi = chain[-1]
        coords = [(s_lo + s_hi) / 2]
        for f in reversed(stages):
            coords.append(evaluate(f, coords[-1]))
        target = tuple(reversed(coords))
    logger.info("certificate with %d stages", len(perms))
    return AccessCertificate(tuple(stages), tuple(branch_indices), tuple(perms), target)


@dataclass(frozen=True)
class FamilyWitness:
    plan: EmbeddingPlan
    intervals: Tuple[Interval, ...]
    choices: Tuple[Side, ...]

    @property
    def marks(self) -> Tuple[Tuple[Fraction, str], ...]:
        return self.plan.marks


def family_witness(stages: Sequence[PLMap], choices: Sequence, J, eps0=Fraction(1, 8)) -> FamilyWitness:
    """Pull J back along the chosen surjective intervals and make both ends topmost per stage."""
    if len(stages) != len(choices):
        raise SizeMismatch("one choice per stage is required")
    current = _interval(J)
    intervals = [current]
    picks = []
    for stage, (f, choice) in enumerate(zip(stages, choices), start=1):
        choice = Side(choice)
        dec = surjective_intervals(f)
        if len(dec) < 3:
            raise TooFewSurjectiveIntervals(f"stage {stage} has {len(dec)} surjective intervals, need 3",
                                            stage=stage)
        index = 0 if choice == Side.LEFT else 2
        A = dec.intervals[index]
        current = pullback_interval(f, A, current)
        intervals.append(current)
        picks.append((f, two_point_topmost(f, A, current)))
    depth = len(stages)
    lo, hi = intervals[-1]
    plan = EmbeddingPlan(tuple(picks), default_schedule(depth, eps0), depth,
                         ((lo, "left end"), (hi, "right end")))
    return FamilyWitness(plan, tuple(intervals), tuple(Side(c) for c in choices))


def nadler_stages(blocks: Sequence[int]) -> List[int]:
    """Iterate exponents for the stages coding a point with the given block lengths."""
    blocks = list(blocks)
    if not blocks or any(not isinstance(n, int) or n < 0 for n in blocks):
        raise BadBlocks("blocks must be a nonempty list of nonnegative integers")
    if blocks[0] == 0:
        raise BadBlocks("the first block must be positive")
    exponents = [blocks[0] - 1]
    for i, n in enumerate(blocks[1:], start=2):
        exponents.append(n + 2 if i % 2 == 0 else n)
    return [e for e in exponents if e > 0]


NADLER = "pl 0:0 1/5:1/5 2/5:4/5 3/5:1/5 4/5:4/5 1:1"
_THIRDS = (Fraction(1, 5), Fraction(2, 5), Fraction(3, 5), Fraction(4, 5))


def nadler_itinerary(y, length: int) -> str:
    """Symbols 0, 1, 2 for the thirds of [1/5, 4/5] visited by the orbit of y (lower on ties)."""
    f = parse_plmap(NADLER)
    y = as_fraction(y) if not isinstance(y, Fraction) else y
    if not _THIRDS[0] <= y <= _THIRDS[-1]:
        raise OutOfRange(f"{fmt(y)} is outside [1/5, 4/5]")
    symbols = []
    for _ in range(length):
        symbols.append("0" if y <= _THIRDS[1] else ("1" if y <= _THIRDS[2] else "2"))
        y = evaluate(f, y)
    return "".join(symbols)


def nadler_point_stages(blocks: Sequence[int]) -> Tuple[List[PLMap], List[int]]:
    """Stage maps for the block coding with a consistent increasing branch designated per stage."""
    base = parse_plmap(NADLER)
    stages = [iterate(base, e) for e in nadler_stages(blocks)]
    chosen: List[int] = []
    for f in stages:
        for b in f.branches():
            if not b.increasing:
                continue
            try:
                consistent_target(stages[:len(chosen) + 1], chosen + [b.index])
            except NotConstructible:
                continue
            chosen.append(b.index)
            break
        else:
            raise NotConstructible("no increasing branch continues the coded orbit")
    return stages, chosen
