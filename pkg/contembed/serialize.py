"""
JSON documents for plans, certificates, permuted graphs and scenes.

Rationals are written as [numerator, denominator] pairs so documents stay exact.
Maps use the "pl" grammar and permutations the "perm" grammar.
"""

import json
import logging
import os
from fractions import Fraction
from typing import Any, Dict, List

from contembed.access import AccessCertificate, EmbeddingPlan
from contembed.compose import PermutedGraph
from contembed.errors import MapSyntaxError
from contembed.permute import parse_permutation
from contembed.plmap import parse_plmap
from contembed.render import SceneGraph

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def rational(q) -> List[int]:
    q = Fraction(q)
    return [q.numerator, q.denominator]


def from_rational(pair) -> Fraction:
    try:
        num, den = pair
        return Fraction(int(num), int(den))
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise MapSyntaxError(f"bad rational {pair!r}") from e


def point(p) -> List[List[int]]:
    return [rational(p[0]), rational(p[1])]


def plan_document(plan: EmbeddingPlan) -> Dict[str, Any]:
    return {
        "kind": "plan",
        "version": FORMAT_VERSION,
        "depth": plan.depth,
        "stages": [{"map": str(f), "permutation": str(p)} for f, p in plan.stages],
        "epsilons": [rational(e) for e in plan.epsilons],
        "marks": [{"x": rational(x), "label": label} for x, label in plan.marks],
    }


def plan_from_document(doc: Dict[str, Any]) -> EmbeddingPlan:
    if doc.get("kind") != "plan":
        raise MapSyntaxError(f"expected a plan document, got kind={doc.get('kind')!r}")
    stages = tuple((parse_plmap(s["map"]), parse_permutation(s["permutation"])) for s in doc["stages"])
    epsilons = tuple(from_rational(e) for e in doc["epsilons"])
    marks = tuple((from_rational(m["x"]), m["label"]) for m in doc.get("marks", []))
    return EmbeddingPlan(stages, epsilons, int(doc.get("depth", len(stages))), marks)


def certificate_document(cert: AccessCertificate) -> Dict[str, Any]:
    return {
        "kind": "certificate",
        "version": FORMAT_VERSION,
        "stages": [str(f) for f in cert.stages],
        "branches": list(cert.branches),
        "permutations": [str(p) for p in cert.permutations],
        "target": [rational(x) for x in cert.target],
    }


def graph_document(graph: PermutedGraph) -> Dict[str, Any]:
    horizontals = [{"branch": j, "height": h, "from": rational(x0), "to": rational(x1)}
                   for j, h, (x0, x1) in graph.horizontals]
    verticals = [{"junction": j, "x": rational(x), "heights": list(hs)}
                 for j, x, hs in graph.verticals]
    nerve = graph.nerve()
    return {
        "kind": "graph",
        "version": FORMAT_VERSION,
        "map": str(graph.f),
        "permutation": str(graph.p),
        "horizontals": horizontals,
        "verticals": verticals,
        "nerve": [point(p) for p in nerve.points],
    }


def scene_document(scene: SceneGraph) -> Dict[str, Any]:
    levels = []
    for level in scene.levels:
        levels.append({
            "half_width": rational(level.half_width),
            "clamped": level.clamped,
            "chain": [[rational(lo), rational(hi)] for lo, hi in level.chain.links],
            "pattern": list(level.pattern.entries) if level.pattern is not None else None,
            "nerve": {"points": [point(p) for p in level.nerve.points],
                      "params": [rational(q) for q in level.nerve.params]},
        })
    return {
        "kind": "scene",
        "version": FORMAT_VERSION,
        "levels": levels,
        "marks": [{"point": point(m.point), "label": m.label, "params": [rational(q) for q in m.params]}
                  for m in scene.marks],
        "plan": plan_document(scene.plan),
    }


def dumps(doc: Dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


def save_document(doc: Dict[str, Any], path: str) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=2, ensure_ascii=False)
    logger.info("wrote %s document to %s", doc.get("kind"), path)
    return path


def load_document(path: str) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)
