"""
Flattened graphs, admissible permutations, zigzags and topmost placement.

Branch H_j of a map sits at height p(j); connector V_j joins H_{j-1} and H_j at the
critical value f(t_j). A permutation is admissible when no connector has to pass through
a branch drawn between the two branches it joins.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple, Union

from contembed.chains import Chain1D
from contembed.errors import (BadIndex, BadPermutation, MapSyntaxError, NotConstructible,
                              SizeMismatch, TooManyBranches)
from contembed.plmap import PLMap, fmt

logger = logging.getLogger(__name__)

STRICT = "STRICT"
ENUM_LIMIT = 9

ChainMode = Union[Chain1D, str]


@dataclass(frozen=True)
class FlatBranch:
    index: int
    image: Tuple[Fraction, Fraction]
    increasing: bool
    domain: Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Connector:
    junction: int
    value: Fraction
    side: str  # "left" at a local minimum, "right" at a local maximum


@dataclass(frozen=True)
class FlatGraph:
    branches: Tuple[FlatBranch, ...]
    connectors: Tuple[Connector, ...]


@dataclass(frozen=True)
class Permutation:
    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise BadPermutation(f"not a bijection on 0..{len(self.images) - 1}: {list(self.images)}")

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(tuple(range(size)))

    def __len__(self) -> int:
        return len(self.images)

    def __getitem__(self, j: int) -> int:
        return self.images[j]

    def __str__(self) -> str:
        return "perm " + " ".join(str(h) for h in self.images)

    @property
    def top(self) -> int:
        return self.images.index(len(self.images) - 1)

    def at_height(self, h: int) -> int:
        return self.images.index(h)


@dataclass(frozen=True)
class ZigzagWitness:
    a: Fraction
    e: Fraction
    increasing: bool

    def __str__(self) -> str:
        return f"ZIGZAG witness a={fmt(self.a)} e={fmt(self.e)}"


def parse_permutation(text: str) -> Permutation:
    tokens = str(text).replace(",", " ").split()
    if tokens and tokens[0] == "perm":
        tokens = tokens[1:]
    try:
        return Permutation(tuple(int(t) for t in tokens))
    except ValueError:
        raise MapSyntaxError(f"bad permutation literal {text!r}")


def flatten(f: PLMap) -> FlatGraph:
    branches = tuple(FlatBranch(b.index, b.image, b.increasing, (b.lo, b.hi)) for b in f.branches())
    values = f.critical_values
    connectors = tuple(Connector(j, values[j], "left" if values[j] < values[j - 1] else "right")
                       for j in range(1, len(values) - 1))
    return FlatGraph(branches, connectors)


def _conflict(values, images, junction: int, k: int, C: ChainMode) -> bool:
    """Branch k blocks connector `junction` (heights are assumed to be between)."""
    v = values[junction]
    lo, hi = images[k]
    if C == STRICT:
        return lo < v < hi
    if not lo <= v <= hi:
        return False
    return not (C.share_link(v, values[k]) or C.share_link(v, values[k + 1]))


def _check_size(f: PLMap, p: Permutation):
    if len(p) != f.branch_count:
        raise SizeMismatch(f"permutation has {len(p)} entries, map has {f.branch_count} branches")


def is_admissible(f: PLMap, p: Permutation, C: ChainMode = STRICT) -> bool:
    _check_size(f, p)
    values = f.critical_values
    images = [b.image for b in f.branches()]
    for j in range(1, len(p)):
        low, high = sorted((p[j - 1], p[j]))
        for k in range(len(p)):
            if low < p[k] < high and _conflict(values, images, j, k, C):
                return False
    return True


def is_inside_zigzag(f: PLMap, k: int) -> Optional[ZigzagWitness]:
    """Witness of critical points a < t_k, e > t_{k+1} trapping branch k, if any."""
    m = f.branch_count - 1
    if not 0 <= k <= m:
        raise BadIndex(f"branch {k} out of range 0..{m}")
    cps = f.critical_points
    vals = f.critical_values
    down = vals[k] > vals[k + 1]
    for ia in range(k):
        for ie in range(k + 2, len(cps)):
            window = vals[ia:ie + 1]
            if down:
                if vals[ia] < vals[k + 1] and vals[ie] > vals[k] \
                        and vals[ia] == min(window) and vals[ie] == max(window):
                    return ZigzagWitness(cps[ia], cps[ie], False)
            elif vals[ia] > vals[k + 1] and vals[ie] < vals[k] \
                    and vals[ia] == max(window) and vals[ie] == min(window):
                return ZigzagWitness(cps[ia], cps[ie], True)
    return None


def _blocked(values, images, junction: int, ks) -> bool:
    return any(images[i][0] < values[junction] < images[i][1] for i in ks)


def _fold_cascade(values, images, k: int, m: int) -> Optional[List[int]]:
    """Fold outward from H_k in alternating maximal runs, right side first, without
    backtracking. None when both sides stall."""
    order = [k]
    L, R, rmark, lmark = k - 1, k + 1, k + 1, k - 1
    right = True
    stalled = 0
    while L >= 0 or R <= m:
        moved = False
        if right:
            while R <= m and not _blocked(values, images, R, range(L + 1, lmark + 1)):
                order.append(R)
                lmark, R, moved = L, R + 1, True
        else:
            while L >= 0 and not _blocked(values, images, L + 1, range(rmark, R)):
                order.append(L)
                rmark, L, moved = R, L - 1, True
        stalled = 0 if moved else stalled + 1
        if stalled == 2:
            return None
        right = not right
    return order


def _extension_order(values, images, k: int, m: int) -> Optional[List[int]]:
    """Place branches top-down around H_k, always growing the placed block by one side.

    State is (L, R, rmark, lmark): the next free branch on each side, the first right
    branch placed after the latest left one, and the last left branch placed after the
    latest right one.
    """
    failed = set()
    order: List[int] = []

    def extend(L: int, R: int, rmark: int, lmark: int) -> bool:
        if L < 0 and R > m:
            return True
        state = (L, R, rmark, lmark)
        if state in failed:
            return False
        if L >= 0 and not _blocked(values, images, L + 1, range(rmark, R)):
            order.append(L)
            if extend(L - 1, R, R, lmark):
                return True
            order.pop()
        if R <= m and not _blocked(values, images, R, range(L + 1, lmark + 1)):
            order.append(R)
            if extend(L, R + 1, rmark, L):
                return True
            order.pop()
        failed.add(state)
        return False

    if extend(k - 1, k + 1, k + 1, k - 1):
        return [k] + order
    return None


def topmost_permutation(f: PLMap, k: int, limit: int = ENUM_LIMIT) -> Optional[Permutation]:
    """STRICT-admissible permutation with branch k on top, or None inside a zigzag."""
    if is_inside_zigzag(f, k) is not None:
        return None
    m = f.branch_count - 1
    values = f.critical_values
    images = [b.image for b in f.branches()]
    for how, build in (('folding', _fold_cascade), ('extension', _extension_order)):
        order = build(values, images, k, m)
        if order is None:
            continue
        heights = [0] * (m + 1)
        for rank, branch in enumerate(order):
            heights[branch] = m - rank
        p = Permutation(tuple(heights))
        if is_admissible(f, p, STRICT):
            logger.debug("topmost for branch %d by %s: %s", k, how, p)
            return p
    if m + 1 > limit:
        raise NotConstructible(f"no extension order puts branch {k} on top "
                               f"and {m + 1} branches exceed the search limit")
    for p in enumerate_admissible(f, STRICT, fixed={k: m}):
        logger.debug("topmost for branch %d by search: %s", k, p)
        return p
    raise NotConstructible(f"branch {k} is not inside a zigzag but no permutation puts it on top")


def enumerate_admissible(f: PLMap, C: ChainMode = STRICT, limit: Optional[int] = None,
                         fixed: Optional[Dict[int, int]] = None) -> Iterator[Permutation]:
    """All admissible permutations in lexicographic order (at most `limit` of them)."""
    size = f.branch_count
    if limit is None and size > ENUM_LIMIT:
        raise TooManyBranches(f"{size} branches; pass a limit to enumerate")
    fixed = dict(fixed or {})
    values = f.critical_values
    images = [b.image for b in f.branches()]
    heights: List[Optional[int]] = [None] * size
    used = [False] * size
    for branch, h in fixed.items():
        heights[branch] = h
        used[h] = True
    emitted = 0

    def ok(branch: int) -> bool:
        # every triple whose three heights are now known and that involves this branch
        for j in range(1, size):
            a, b = heights[j - 1], heights[j]
            if a is None or b is None:
                continue
            low, high = sorted((a, b))
            for kk in range(size):
                hk = heights[kk]
                if hk is None or not low < hk < high:
                    continue
                if branch in (j - 1, j, kk) and _conflict(values, images, j, kk, C):
                    return False
        return True

    def assign(i: int):
        nonlocal emitted
        if limit is not None and emitted >= limit:
            return
        if i == size:
            emitted += 1
            yield Permutation(tuple(heights))
            return
        if i in fixed:
            if ok(i):
                yield from assign(i + 1)
            return
        for h in range(size):
            if used[h]:
                continue
            heights[i], used[h] = h, True
            if ok(i):
                yield from assign(i + 1)
            heights[i], used[h] = None, False
            if limit is not None and emitted >= limit:
                return

    yield from assign(0)


def admissible_with_top(f: PLMap, k: int, C: ChainMode = STRICT) -> Optional[Permutation]:
    """Brute-force oracle: first admissible permutation with branch k on top."""
    m = f.branch_count - 1
    return next(iter(enumerate_admissible(f, C, limit=1, fixed={k: m})), None)

