"""
Command-line surface for contembed.

Every number printed is an exact rational. Domain errors exit with 2, usage errors with 1.
"""

import logging
import os
import sys
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import click

from contembed import access, chains, compose, permute, plmap, render, serialize
from contembed.config import EmbedConfig, load_config
from contembed.errors import ContEmbedError
from contembed.fixtures import BUILTIN, builtin, resolve_map
from contembed.logs import configure_logging
from contembed.plmap import fmt

logger = logging.getLogger(__name__)


class MapType(click.ParamType):
    """Built-in name (optionally name^k) or a "pl" literal."""

    name = "map"

    def convert(self, value, param, ctx):
        if isinstance(value, plmap.PLMap):
            return value
        return resolve_map(value)


class RationalType(click.ParamType):
    name = "rational"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        return plmap.as_fraction(value)


MAP = MapType()
RATIONAL = RationalType()


def _split(text: str) -> List[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _int_list(text: str) -> List[int]:
    try:
        return [int(t) for t in _split(text)]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got {text!r}")


def _interval_arg(text: str) -> Tuple[Fraction, Fraction]:
    parts = _split(text)
    if len(parts) != 2:
        raise click.BadParameter(f"expected an interval lo,hi, got {text!r}")
    return plmap.as_fraction(parts[0]), plmap.as_fraction(parts[1])


def _chain_mode(chain: Optional[int], strict: bool):
    if strict or chain is None:
        return permute.STRICT
    return chains.uniform_chain(chain)


def _interval_text(iv) -> str:
    return f"[{fmt(iv[0])}, {fmt(iv[1])}]"


def _emit_json(doc) -> None:
    click.echo(serialize.dumps(doc))


class DomainGroup(click.Group):
    """Reports domain errors on stderr and exits with 2."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except ContEmbedError as e:
            click.echo(f"error: {type(e).__name__}: {e}", err=True)
            ctx.exit(2)


@click.group(cls=DomainGroup)
@click.option("--log-level", default=None, help="Logging level (default from CONTEMBED_LOG_LEVEL)")
@click.pass_context
def cli(ctx, log_level):
    """Exact planar embeddings of chainable continua."""
    try:
        config = load_config()
    except ValueError as e:
        raise click.UsageError(str(e))
    configure_logging(log_level or config.log_level)
    ctx.obj = config


# ---------------------------------------------------------------- map


@cli.group("map")
def map_group():
    """Parse, compose, iterate and evaluate PL maps."""


@map_group.command("parse")
@click.argument("f", type=MAP)
def map_parse(f):
    click.echo(str(f))
    for b in f.branches():
        direction = "up" if b.increasing else "down"
        click.echo(f"branch {b.index}: {_interval_text((b.lo, b.hi))} {direction} onto {_interval_text(b.image)}")


@map_group.command("compose")
@click.argument("f", type=MAP)
@click.argument("g", type=MAP)
def map_compose(f, g):
    """Print f after g."""
    click.echo(str(plmap.compose(f, g)))


@map_group.command("iterate")
@click.argument("f", type=MAP)
@click.argument("k", type=click.IntRange(min=1))
@click.option("--emit", is_flag=True, help="Print the breakpoint table one point per line")
def map_iterate(f, k, emit):
    g = plmap.iterate(f, k)
    if not emit:
        click.echo(str(g))
        return
    for x, y in zip(g.breakpoints, g.values):
        click.echo(f"{fmt(x)}\t{fmt(y)}")


@map_group.command("eval")
@click.argument("f", type=MAP)
@click.argument("x", type=RATIONAL)
def map_eval(f, x):
    click.echo(fmt(plmap.evaluate(f, x)))


@map_group.command("preimages")
@click.argument("f", type=MAP)
@click.argument("y", type=RATIONAL)
def map_preimages(f, y):
    click.echo(" ".join(fmt(x) for x in plmap.preimages(f, y)))


@map_group.command("list")
def map_list():
    """Built-in maps."""
    for name in sorted(BUILTIN):
        click.echo(f"{name}\t{builtin(name)}")


# ---------------------------------------------------------------- chain


@cli.group("chain")
def chain_group():
    """Chain covers, natural refinements and patterns."""


@chain_group.command("uniform")
@click.argument("n", type=click.IntRange(min=1))
def chain_uniform(n):
    C = chains.uniform_chain(n)
    click.echo(str(C))
    click.echo(f"mesh {fmt(chains.mesh(C))}")


@chain_group.command("natural")
@click.argument("f", type=MAP)
@click.option("--chain", "chain_size", type=click.IntRange(min=1), default=None,
              help="Uniform coarse chain size (default CONTEMBED_CHAIN)")
@click.option("--mesh", "mesh_bound", type=RATIONAL, default=None, help="Mesh bound of the fine chain")
@click.pass_obj
def chain_natural(config: EmbedConfig, f, chain_size, mesh_bound):
    if mesh_bound is not None and mesh_bound <= 0:
        raise click.BadParameter("mesh bound must be positive", param_hint="--mesh")
    coarse = chains.uniform_chain(chain_size or config.chain)
    bound = mesh_bound if mesh_bound is not None else chains.mesh(coarse) / 2
    fine, pat = chains.natural_refinement(f, coarse, bound)
    click.echo(str(fine))
    click.echo(f"pattern {pat}")


@chain_group.command("pattern")
@click.argument("fine")
@click.argument("coarse")
def chain_pattern(fine, coarse):
    """Pattern of FINE in COARSE (chain literals)."""
    click.echo(str(chains.pattern(chains.parse_chain(fine), chains.parse_chain(coarse))))


# ---------------------------------------------------------------- zigzag / permute / star


@cli.command("zigzag")
@click.argument("f", type=MAP)
@click.option("--branch", "k", type=click.IntRange(min=0), required=True, help="0-based branch index")
def zigzag_cmd(f, k):
    """Report whether branch K sits inside a zigzag."""
    if k >= f.branch_count:
        raise click.BadParameter(f"map has {f.branch_count} branches", param_hint="--branch")
    witness = permute.is_inside_zigzag(f, k)
    click.echo(str(witness) if witness is not None else "NON-ZIGZAG")


@cli.group("permute")
def permute_group():
    """Admissible permutations of flattened graphs."""


@permute_group.command("topmost")
@click.argument("f", type=MAP)
@click.option("--branch", "k", type=click.IntRange(min=0), required=True)
@click.option("--json", "as_json", is_flag=True, help="Emit the permuted graph drawing as JSON")
@click.pass_obj
def permute_topmost(config: EmbedConfig, f, k, as_json):
    if k >= f.branch_count:
        raise click.BadParameter(f"map has {f.branch_count} branches", param_hint="--branch")
    p = permute.topmost_permutation(f, k, limit=config.enum_limit)
    if p is None:
        click.echo(str(permute.is_inside_zigzag(f, k)))
        return
    if as_json:
        _emit_json(serialize.graph_document(compose.layout(f, p)))
        return
    click.echo(str(p))


@permute_group.command("enumerate")
@click.argument("f", type=MAP)
@click.option("--chain", "chain_size", type=click.IntRange(min=1), default=None)
@click.option("--strict", is_flag=True, help="Chain-free admissibility")
@click.option("--limit", type=click.IntRange(min=1), default=None)
def permute_enumerate(f, chain_size, strict, limit):
    count = 0
    for p in permute.enumerate_admissible(f, _chain_mode(chain_size, strict), limit=limit):
        click.echo(str(p))
        count += 1
    click.echo(f"{count} admissible")


@permute_group.command("admissible")
@click.argument("f", type=MAP)
@click.argument("perm")
@click.option("--chain", "chain_size", type=click.IntRange(min=1), default=None)
@click.option("--strict", is_flag=True)
def permute_admissible(f, perm, chain_size, strict):
    p = permute.parse_permutation(perm)
    ok = permute.is_admissible(f, p, _chain_mode(chain_size, strict))
    click.echo("ADMISSIBLE" if ok else "NOT ADMISSIBLE")


@cli.command("star")
@click.argument("f", type=MAP)
@click.argument("g", type=MAP)
@click.argument("p1")
@click.argument("p2")
def star_cmd(f, g, p1, p2):
    """Branch order of f after g drawn inside the tube of f, and its top branch."""
    result = compose.star_product(permute.parse_permutation(p1), permute.parse_permutation(p2), f, g)
    click.echo(str(result.permutation))
    i, j = result.top_label
    click.echo(f"top H_{i}{j}")


# ---------------------------------------------------------------- access


@cli.group("access")
def access_group():
    """Surjective intervals, certificates and accessible families."""


@access_group.command("surjective")
@click.argument("f", type=MAP)
@click.option("--target", default="0,1", help="Target interval lo,hi")
def access_surjective(f, target):
    dec = access.surjective_intervals(f, _interval_arg(target))
    for iv, up, rset in zip(dec.intervals, dec.increasing, dec.right_accessible):
        click.echo(f"{_interval_text(iv)} {'up' if up else 'down'} R={rset}")


@access_group.command("rset")
@click.argument("f", type=MAP)
@click.argument("interval")
def access_rset(f, interval):
    click.echo(str(access.right_accessible(f, _interval_arg(interval))))


@access_group.command("pullback")
@click.argument("f", type=MAP)
@click.argument("a")
@click.argument("j")
def access_pullback(f, a, j):
    """J^i inside A mapped onto J."""
    click.echo(_interval_text(access.pullback_interval(f, _interval_arg(a), _interval_arg(j))))


@access_group.command("certificate")
@click.option("--stages", required=True, help="Comma-separated stage maps")
@click.option("--branches", required=True, help="Comma-separated 0-based branch indices")
@click.option("--json", "as_json", is_flag=True)
def access_certificate(stages, branches, as_json):
    maps = [resolve_map(s) for s in _split(stages)]
    cert = access.certificate(maps, _int_list(branches))
    if as_json:
        _emit_json(serialize.certificate_document(cert))
        return
    for stage, (k, p) in enumerate(zip(cert.branches, cert.permutations), start=1):
        click.echo(f"stage {stage}: branch {k} {p}")
    if cert.target:
        click.echo("target " + " ".join(fmt(x) for x in cert.target))


@access_group.command("family")
@click.argument("f", type=MAP)
@click.option("--choices", required=True, help="Comma-separated LEFT/RIGHT per stage")
@click.option("--interval", "J", default=None, help="Starting interval lo,hi (default the middle surjective interval)")
@click.option("--json", "as_json", is_flag=True)
@click.pass_obj
def access_family(config: EmbedConfig, f, choices, J, as_json):
    sides = [c.upper() for c in _split(choices)]
    if any(s not in ("LEFT", "RIGHT") for s in sides):
        raise click.BadParameter("choices must be LEFT or RIGHT", param_hint="--choices")
    start = _interval_arg(J) if J else access.surjective_intervals(f).intervals[1]
    witness = access.family_witness([f] * len(sides), sides, start, config.eps0)
    if as_json:
        _emit_json(serialize.plan_document(witness.plan))
        return
    for i, iv in enumerate(witness.intervals):
        click.echo(f"J^{i} {_interval_text(iv)}")
    for (_, p), side in zip(witness.plan.stages, witness.choices):
        click.echo(f"{side.value} {p}")


@access_group.command("peps")
@click.argument("f", type=MAP)
@click.argument("eps", type=RATIONAL)
def access_peps(f, eps):
    click.echo("P_eps" if access.is_P_eps(f, eps) else "NOT P_eps")


@access_group.command("nadler")
@click.argument("blocks")
def access_nadler(blocks):
    """Stage exponents and designated branches for a block coding."""
    exponents = access.nadler_stages(_int_list(blocks))
    click.echo("exponents " + " ".join(str(e) for e in exponents))
    if exponents:
        _, chosen = access.nadler_point_stages(_int_list(blocks))
        click.echo("branches " + " ".join(str(k) for k in chosen))


# ---------------------------------------------------------------- embed


def _build_scene(config: EmbedConfig, plan) -> render.SceneGraph:
    return render.plan_scene(plan, config.sizes_for_depth(plan.depth))


def _audit(scene: render.SceneGraph) -> bool:
    nested = render.verify_nesting(scene)
    click.echo(f"{'✅' if nested else '❌'} nesting {'PASS' if nested else 'FAIL'}")
    ok = nested
    for mark in scene.marks:
        clear = render.accessibility_probe(scene, mark.point)
        click.echo(f"{'✅' if clear else '❌'} probe {mark.label} "
                   f"({fmt(mark.point[0])}, {fmt(mark.point[1])}) {'PASS' if clear else 'FAIL'}")
        ok = ok and clear
    return ok


def _write_outputs(config: EmbedConfig, scene: render.SceneGraph, out: Optional[str], json_out: Optional[str]):
    if out:
        options = render.RenderOptions(precision=config.precision)
        directory = os.path.dirname(out)
        if directory:
            os.makedirs(directory, exist_ok=True)
        render.render_svg(scene, options).save_svg(out)
        click.echo(f"SVG written to {out}")
    if json_out:
        serialize.save_document(serialize.scene_document(scene), json_out)
        click.echo(f"scene written to {json_out}")


@cli.group("embed")
def embed_group():
    """Plan, render and probe nested tube embeddings."""


@embed_group.command("plan")
@click.option("--stages", required=True, help="Comma-separated stage maps")
@click.option("--topmost", "branches", required=True, help="Comma-separated 0-based branch index per stage")
@click.option("--depth", type=click.IntRange(min=0), default=None)
@click.option("--eps", type=RATIONAL, default=None, help="First half-width (default CONTEMBED_EPS0)")
@click.option("--out", default=None, help="SVG output path")
@click.option("--json", "json_out", default=None, help="Scene JSON output path")
@click.option("--plan-out", default=None, help="Plan JSON output path")
@click.pass_obj
def embed_plan(config: EmbedConfig, stages, branches, depth, eps, out, json_out, plan_out):
    """Certify the designated branches, build the nested tubes and probe the mark."""
    maps = [resolve_map(s) for s in _split(stages)]
    indices = _int_list(branches)
    if depth is not None:
        if depth > len(maps):
            raise click.BadParameter(f"only {len(maps)} stages given", param_hint="--depth")
        maps, indices = maps[:depth], indices[:depth]
    cert = access.certificate(maps, indices)
    plan = cert.to_plan(eps0=eps if eps is not None else config.eps0)
    if plan_out:
        serialize.save_document(serialize.plan_document(plan), plan_out)
    scene = _build_scene(config, plan)
    _write_outputs(config, scene, out, json_out)
    if not _audit(scene):
        click.get_current_context().exit(1)


@embed_group.command("render")
@click.argument("plan_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, help="SVG output path")
@click.option("--json", "json_out", default=None, help="Scene JSON output path")
@click.pass_obj
def embed_render(config: EmbedConfig, plan_path, out, json_out):
    plan = serialize.plan_from_document(serialize.load_document(plan_path))
    scene = _build_scene(config, plan)
    _write_outputs(config, scene, out, json_out)


@embed_group.command("probe")
@click.argument("plan_path", type=click.Path(exists=True, dir_okay=False))
@click.pass_obj
def embed_probe(config: EmbedConfig, plan_path):
    """Verify nesting and probe every mark of a saved plan."""
    plan = serialize.plan_from_document(serialize.load_document(plan_path))
    if not _audit(_build_scene(config, plan)):
        click.get_current_context().exit(1)


# ---------------------------------------------------------------- figures


def _same_map(f, breakpoints: Sequence[str], values: Sequence[str]) -> bool:
    expected = plmap.from_points([plmap.as_fraction(b) for b in breakpoints],
                                 [plmap.as_fraction(v) for v in values])
    return plmap.equals(f, expected)


def _fig1() -> bool:
    f, C = builtin("fig1"), chains.uniform_chain(4)
    p = permute.parse_permutation("3 0 1 2")
    graph = compose.layout(f, p, C)
    return permute.is_admissible(f, p, C) and not graph.nerve().crossings() and p.top == 0


def _fig4() -> bool:
    p1, p2 = permute.parse_permutation("2 1 0 3"), permute.parse_permutation("1 0")
    return compose.top_branch(builtin("fig3f"), builtin("fig3g"), p1, p2) == (0, 3)


def _fig8() -> bool:
    minc = builtin("minc")
    dec = access.surjective_intervals(minc)
    thirds = [(Fraction(0), Fraction(1, 3)), (Fraction(1, 3), Fraction(2, 3)), (Fraction(2, 3), Fraction(1))]
    rset = str(access.right_accessible(minc, thirds[1]))
    return list(dec.intervals) == thirds and rset == "[1/3, 3/8) ∪ [7/12, 2/3]" \
        and plmap.evaluate(minc, Fraction(1, 2)) == Fraction(1, 2)


def _fig9() -> bool:
    ex67 = builtin("ex67")
    witness = permute.is_inside_zigzag(ex67, 1)
    f2 = plmap.iterate(ex67, 2)
    return str(witness) == "ZIGZAG witness a=0 e=1" \
        and permute.is_inside_zigzag(f2, f2.branch_of(Fraction(1, 2))) is None


def _fig10() -> bool:
    return _same_map(plmap.iterate(builtin("ex67"), 2),
                     ["0", "1/12", "1/4", "3/4", "11/12", "1"], ["0", "3/4", "1/4", "3/4", "1/4", "1"])


def _fig11() -> bool:
    return _same_map(plmap.iterate(builtin("ex68"), 2),
                     ["0", "3/16", "5/16", "3/8", "7/16", "9/16", "5/8", "11/16", "3/4", "13/16", "1"],
                     ["0", "3/4", "1/4", "1/2", "1/4", "3/4", "1/2", "3/4", "1/2", "1/4", "1"])


def _fig12() -> bool:
    return _same_map(plmap.iterate(builtin("nadler"), 2),
                     ["0", "1/5", "4/15", "1/3", "2/5", "7/15", "8/15", "3/5", "2/3", "11/15", "4/5", "1"],
                     ["0", "1/5", "4/5", "1/5", "4/5", "1/5", "4/5", "1/5", "4/5", "1/5", "4/5", "1"])


def _nadler_branches() -> bool:
    base = builtin("nadler")
    for n in (1, 2, 3):
        f = plmap.iterate(base, n)
        if any(permute.is_inside_zigzag(f, b.index) is not None for b in f.branches() if b.increasing):
            return False
    return True


def _fig5() -> bool:
    f = builtin("fig5f")
    return permute.is_inside_zigzag(f, f.branch_of(Fraction(7, 10))) is not None


def _tent_pullbacks() -> bool:
    tent = builtin("tent")
    J = (Fraction(1, 4), Fraction(1, 2))
    left = access.pullback_interval(tent, (Fraction(0), Fraction(1, 2)), J)
    right = access.pullback_interval(tent, (Fraction(1, 2), Fraction(1)), J)
    return left == (Fraction(1, 8), Fraction(1, 4)) and right == (Fraction(3, 4), Fraction(7, 8))


FIGURE_CHECKS: List[Tuple[str, str, Callable[[], bool]]] = [
    ("fig1", "admissible permutation puts H_0 on top", _fig1),
    ("fig4", "top branch of the star product is H_03", _fig4),
    ("fig5", "branch over [3/5, 4/5] is inside a zigzag", _fig5),
    ("fig8", "Minc surjective intervals and right accessible set", _fig8),
    ("fig9", "middle branch zigzag for f, not for f^2", _fig9),
    ("fig10", "second iterate of ex67", _fig10),
    ("fig11", "second iterate of ex68", _fig11),
    ("fig12", "second iterate of the Nadler map", _fig12),
    ("nadler", "increasing branches of Nadler iterates are not zigzag", _nadler_branches),
    ("pullback", "tent pullbacks of [1/4, 1/2]", _tent_pullbacks),
]


def _run_check(check: Callable[[], bool]) -> Tuple[bool, Optional[str]]:
    try:
        return bool(check()), None
    except ContEmbedError as e:
        return False, f"{type(e).__name__}: {e}"


@cli.command("figures")
@click.option("--out-dir", default=None, help="Report directory (default CONTEMBED_RESULTS_DIR)")
@click.pass_obj
def figures_cmd(config: EmbedConfig, out_dir):
    """Recompute every fixture and compare exactly."""
    click.echo("=" * 70)
    click.echo("FIXTURE REPRODUCTION")
    click.echo("=" * 70)

    results = []
    for name, description, check in FIGURE_CHECKS:
        passed, error = _run_check(check)
        marker = "✅" if passed else "❌"
        click.echo(f"{marker} {name}: {description}")
        if error:
            click.echo(f"   {error}")
        results.append({"name": name, "description": description, "passed": passed, "error": error})

    passed = sum(1 for r in results if r["passed"])
    total = len(results)
    click.echo("=" * 70)
    click.echo(f"Results: {passed}/{total} passed")
    click.echo("=" * 70)

    report = {"kind": "figures", "passed": passed, "total": total, "checks": results}
    path = os.path.join(out_dir or config.results_dir, "figures_report.json")
    serialize.save_document(report, path)
    click.echo(f"Report saved to {path}")
    if passed != total:
        click.get_current_context().exit(1)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Entry point returning the process exit code."""
    try:
        code = cli.main(args=list(argv) if argv is not None else None, prog_name="contembed",
                        standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return code if isinstance(code, int) else 0


def main():
    sys.exit(run())
