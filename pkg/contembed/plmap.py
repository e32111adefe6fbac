"""
Exact piecewise-linear surjections of the unit interval.

A PLMap keeps every slope change, so it is always the exact function it was built from.
Critical points are the monotonicity changes plus 0 and 1; branches are the maximal
monotone pieces between consecutive critical points.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, List, Optional, Sequence, Tuple

from contembed.errors import (MapSyntaxError, NotAFunction, NotSurjective, OutOfDomain,
                              OutOfRange, Plateau)

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)

_PAIR = re.compile(r"^([+-]?\d+(?:/\d+)?):([+-]?\d+(?:/\d+)?)$")


def as_fraction(token) -> Fraction:
    """Parse an integer or a/b token (or pass a number through) as an exact rational."""
    if isinstance(token, Fraction):
        return token
    if isinstance(token, int):
        return Fraction(token)
    text = str(token).strip()
    if not re.fullmatch(r"[+-]?\d+(?:/\d+)?", text):
        raise MapSyntaxError(f"not a rational: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise MapSyntaxError(f"zero denominator in {text!r}")


def fmt(q: Fraction) -> str:
    """Exact rational text: integers bare, otherwise a/b."""
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Branch:
    index: int
    lo: Fraction
    hi: Fraction
    start_value: Fraction
    end_value: Fraction

    @property
    def increasing(self) -> bool:
        return self.end_value > self.start_value

    @property
    def image(self) -> Tuple[Fraction, Fraction]:
        return (min(self.start_value, self.end_value), max(self.start_value, self.end_value))

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class PLMap:
    breakpoints: Tuple[Fraction, ...]
    values: Tuple[Fraction, ...]

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def __str__(self) -> str:
        return "pl " + " ".join(f"{fmt(b)}:{fmt(v)}" for b, v in zip(self.breakpoints, self.values))

    @property
    def critical_points(self) -> Tuple[Fraction, ...]:
        return tuple(self.breakpoints[i] for i in _critical_indices(self.values))

    @property
    def critical_values(self) -> Tuple[Fraction, ...]:
        return tuple(self.values[i] for i in _critical_indices(self.values))

    @property
    def branch_count(self) -> int:
        return len(_critical_indices(self.values)) - 1

    def branches(self) -> List[Branch]:
        idx = _critical_indices(self.values)
        return [Branch(k, self.breakpoints[idx[k]], self.breakpoints[idx[k + 1]],
                       self.values[idx[k]], self.values[idx[k + 1]])
                for k in range(len(idx) - 1)]

    def branch_of(self, x: Fraction, prefer_right: bool = False) -> int:
        """Index of a branch containing x (the left one at a shared critical point)."""
        x = Fraction(x)
        found = [b.index for b in self.branches() if b.lo <= x <= b.hi]
        if not found:
            raise OutOfDomain(f"{fmt(x)} is outside [0,1]")
        return found[-1] if prefer_right else found[0]


def _critical_indices(values: Sequence[Fraction]) -> List[int]:
    idx = [0]
    for i in range(1, len(values) - 1):
        if (values[i] - values[i - 1]) * (values[i + 1] - values[i]) < 0:
            idx.append(i)
    idx.append(len(values) - 1)
    return idx


def _collinear(b0, v0, b1, v1, b2, v2) -> bool:
    return (v1 - v0) * (b2 - b1) == (v2 - v1) * (b1 - b0)


def from_points(breakpoints: Iterable, values: Iterable) -> PLMap:
    """Build a normalized PLMap, validating domain, plateaus and surjectivity."""
    bps = [as_fraction(b) for b in breakpoints]
    vals = [as_fraction(v) for v in values]
    if len(bps) != len(vals) or len(bps) < 2:
        raise MapSyntaxError("a map needs at least two breakpoint:value pairs")
    if len(set(bps)) != len(bps):
        raise NotAFunction("duplicate breakpoint")
    pairs = sorted(zip(bps, vals))
    bps = [b for b, _ in pairs]
    vals = [v for _, v in pairs]
    if bps[0] != ZERO or bps[-1] != ONE:
        raise OutOfDomain("breakpoints must start at 0 and end at 1")
    if any(v < 0 or v > 1 for v in vals):
        raise OutOfRange("values must lie in [0,1]")
    for i in range(len(vals) - 1):
        if vals[i] == vals[i + 1]:
            raise Plateau(f"constant piece on [{fmt(bps[i])}, {fmt(bps[i + 1])}]")
    if min(vals) != ZERO or max(vals) != ONE:
        raise NotSurjective("map must attain both 0 and 1")
    keep_b, keep_v = [bps[0]], [vals[0]]
    for i in range(1, len(bps) - 1):
        if _collinear(keep_b[-1], keep_v[-1], bps[i], vals[i], bps[i + 1], vals[i + 1]):
            continue
        keep_b.append(bps[i])
        keep_v.append(vals[i])
    keep_b.append(bps[-1])
    keep_v.append(vals[-1])
    return PLMap(tuple(keep_b), tuple(keep_v))


def parse_plmap(text: str) -> PLMap:
    """Parse `pl <bp>:<val> ...`; the leading `pl` is optional and `#` starts a comment."""
    body = " ".join(line.split("#", 1)[0] for line in str(text).splitlines())
    tokens = body.split()
    if tokens and tokens[0] == "pl":
        tokens = tokens[1:]
    if not tokens:
        raise MapSyntaxError("empty map literal")
    bps, vals = [], []
    for token in tokens:
        match = _PAIR.match(token)
        if not match:
            raise MapSyntaxError(f"bad token {token!r}, expected <bp>:<val>")
        bps.append(as_fraction(match.group(1)))
        vals.append(as_fraction(match.group(2)))
    return from_points(bps, vals)


def evaluate(f: PLMap, x) -> Fraction:
    x = as_fraction(x) if not isinstance(x, Fraction) else x
    if x < 0 or x > 1:
        raise OutOfDomain(f"{fmt(x)} is outside [0,1]")
    bps, vals = f.breakpoints, f.values
    lo, hi = 0, len(bps) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if bps[mid] <= x:
            lo = mid
        else:
            hi = mid
    if x == bps[lo]:
        return vals[lo]
    if x == bps[hi]:
        return vals[hi]
    return vals[lo] + (x - bps[lo]) * (vals[hi] - vals[lo]) / (bps[hi] - bps[lo])


def preimages(f: PLMap, y) -> List[Fraction]:
    """All x with f(x) = y, sorted; isolated points since maps have no plateaus."""
    y = as_fraction(y) if not isinstance(y, Fraction) else y
    if y < 0 or y > 1:
        raise OutOfRange(f"{fmt(y)} is outside [0,1]")
    return _solve(f.breakpoints, f.values, y)


def _solve(bps, vals, y) -> List[Fraction]:
    found = set()
    for i in range(len(bps) - 1):
        v0, v1 = vals[i], vals[i + 1]
        if min(v0, v1) <= y <= max(v0, v1):
            found.add(bps[i] + (y - v0) * (bps[i + 1] - bps[i]) / (v1 - v0))
    return sorted(found)


def preimages_in(f: PLMap, y: Fraction, lo: Fraction, hi: Fraction) -> List[Fraction]:
    return [x for x in _solve(f.breakpoints, f.values, y) if lo <= x <= hi]


def compose(f: PLMap, g: PLMap) -> PLMap:
    """f after g."""
    points = set(g.breakpoints)
    for c in f.breakpoints:
        points.update(_solve(g.breakpoints, g.values, c))
    xs = sorted(points)
    return from_points(xs, [evaluate(f, evaluate(g, x)) for x in xs])


def iterate(f: PLMap, k: int) -> PLMap:
    if k < 1:
        raise ValueError("iterate needs k >= 1")
    return reduce(lambda acc, _: compose(f, acc), range(k - 1), f)


def equals(f: PLMap, g: PLMap) -> bool:
    points = sorted(set(f.breakpoints) | set(g.breakpoints))
    return all(evaluate(f, x) == evaluate(g, x) for x in points)


def image(f: PLMap, lo, hi) -> Tuple[Fraction, Fraction]:
    """f([lo, hi]) as (min, max)."""
    lo, hi = Fraction(lo), Fraction(hi)
    lo, hi = max(lo, ZERO), min(hi, ONE)
    if lo > hi:
        raise OutOfDomain("empty interval")
    vals = [evaluate(f, lo), evaluate(f, hi)]
    vals.extend(v for b, v in zip(f.breakpoints, f.values) if lo < b < hi)
    return min(vals), max(vals)


def critical_value_gap(f: PLMap) -> Optional[Fraction]:
    """Smallest positive difference between critical values; None when all coincide."""
    vals = sorted(set(f.critical_values))
    gaps = [b - a for a, b in zip(vals, vals[1:])]
    return min(gaps) if gaps else None


def identity() -> PLMap:
    return PLMap((ZERO, ONE), (ZERO, ONE))


@dataclass(frozen=True)
class IntervalSet:
    """Finite union of rational intervals; components are (lo, hi, lo_closed, hi_closed)."""

    components: Tuple[Tuple[Fraction, Fraction, bool, bool], ...] = ()

    @classmethod
    def of(cls, components) -> "IntervalSet":
        parts = []
        for lo, hi, lc, hc in sorted(components, key=lambda c: (c[0], not c[2])):
            lo, hi = Fraction(lo), Fraction(hi)
            if lo > hi or (lo == hi and not (lc and hc)):
                continue
            if parts:
                plo, phi, plc, phc = parts[-1]
                if lo < phi or (lo == phi and (phc or lc)):
                    if hi > phi or (hi == phi and hc):
                        parts[-1] = (plo, hi, plc, hc if hi > phi else (phc or hc))
                    continue
            parts.append((lo, hi, lc, hc))
        return cls(tuple(parts))

    @classmethod
    def closed(cls, lo, hi) -> "IntervalSet":
        return cls.of([(lo, hi, True, True)])

    def contains(self, x) -> bool:
        x = Fraction(x)
        for lo, hi, lc, hc in self.components:
            if (lo < x or (lc and lo == x)) and (x < hi or (hc and x == hi)):
                return True
        return False

    @property
    def is_empty(self) -> bool:
        return not self.components

    def __str__(self) -> str:
        if not self.components:
            return "∅"
        pieces = []
        for lo, hi, lc, hc in self.components:
            if lo == hi:
                pieces.append("{" + fmt(lo) + "}")
            else:
                pieces.append(f"{'[' if lc else '('}{fmt(lo)}, {fmt(hi)}{']' if hc else ')'}")
        return " ∪ ".join(pieces)
