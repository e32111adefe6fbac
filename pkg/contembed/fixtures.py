"""
Built-in maps and seeded random map generation.
"""

from fractions import Fraction
from typing import Dict, Optional

import numpy as np

from contembed.errors import MapSyntaxError
from contembed.permute import Permutation
from contembed.plmap import PLMap, from_points, iterate, parse_plmap

BUILTIN: Dict[str, str] = {
    "id": "pl 0:0 1:1",
    "tent": "pl 0:0 1/2:1 1:0",
    "ex67": "pl 0:0 1/4:3/4 3/4:1/4 1:1",
    "ex68": "pl 0:0 3/8:3/4 5/8:1/4 1:1",
    "nadler": "pl 0:0 1/5:1/5 2/5:4/5 3/5:1/5 4/5:4/5 1:1",
    "minc": "pl 0:0 1/3:1 5/12:1/3 7/12:2/3 2/3:0 1:1",
    "fig1": "pl 0:0 1/4:1 1/2:3/10 3/4:1 1:3/10",
    "fig5f": "pl 0:0 1/5:1 2/5:1/4 3/5:3/4 4/5:1/2 1:1",
    "fig3f": "pl 0:0 1/4:5/12 1/2:0 3/4:1 1:0",
    "fig3g": "pl 0:1/3 1/2:1 1:0",
}


def builtin(name: str) -> PLMap:
    try:
        return parse_plmap(BUILTIN[name])
    except KeyError:
        raise MapSyntaxError(f"unknown map {name!r}; built-ins: {', '.join(sorted(BUILTIN))}")


def resolve_map(text: str) -> PLMap:
    """A built-in name, optionally iterated as name^k, or a map literal."""
    text = str(text).strip()
    if ":" in text:
        return parse_plmap(text)
    name, _, power = text.partition("^")
    f = builtin(name)
    if power:
        if not power.isdigit() or int(power) < 1:
            raise MapSyntaxError(f"bad iterate exponent in {text!r}")
        f = iterate(f, int(power))
    return f


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(seed)


def _alternating(values) -> bool:
    signs = [np.sign(b - a) for a, b in zip(values, values[1:])]
    return all(s != 0 for s in signs) and all(s != t for s, t in zip(signs, signs[1:]))


def random_plmap(rng: np.random.Generator, branches: int, kinks: int = 0, grid: int = 97) -> PLMap:
    """Random map with the given branch count and pairwise distinct breakpoint values.

    Critical values alternate and are rescaled onto [0,1]; `kinks` extra monotone-through
    breakpoints are inserted at random positions.
    """
    if branches < 1:
        raise ValueError("branches must be positive")
    count = branches + 1
    while True:
        raw = [int(v) for v in rng.choice(np.arange(4 * grid), size=count, replace=False)]
        if count == 2 or _alternating(raw):
            break
    low, high = min(raw), max(raw)
    values = [Fraction(v - low, high - low) for v in raw]
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, grid), size=branches - 1, replace=False))
    points = [Fraction(0)] + [Fraction(c, grid) for c in cuts] + [Fraction(1)]
    bps, vals = list(points), list(values)
    for _ in range(kinks):
        i = int(rng.integers(0, len(bps) - 1))
        x = (bps[i] + bps[i + 1]) / 2
        t = Fraction(int(rng.integers(1, 8)), 8)
        bps.insert(i + 1, x)
        vals.insert(i + 1, vals[i] + t * (vals[i + 1] - vals[i]))
    return from_points(bps, vals)


def random_permutation(rng: np.random.Generator, size: int) -> Permutation:
    return Permutation(tuple(int(v) for v in rng.permutation(size)))
