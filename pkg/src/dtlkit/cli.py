"""Command-line interface.

Every command prints deterministic JSON (``--format json``, the default) or a
human-readable rendering (``--format text``).  Commands that run checks exit
with status 1 when any check fails; malformed input exits with status 2.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import click

from .algebra import LaurentPoly
from .dtl import DTLMorphism, Layer, ParseError, format_morphism, parse_morphism, word_to_morphism
from .suites import KDTL_SUITES, SUITES, Report, run_suite

# ---------------------------------------------------------------------------
# output helpers


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def _emit(ctx: click.Context, obj, text: Optional[str] = None) -> None:
    if ctx.obj["format"] == "text" and text is not None:
        click.echo(text)
    else:
        click.echo(_dump(obj))


def _emit_reports(ctx: click.Context, reports: Sequence[Report]) -> None:
    ok = all(r.ok for r in reports)
    if ctx.obj["format"] == "text":
        click.echo("\n".join(r.to_text() for r in reports))
    elif len(reports) == 1:
        click.echo(_dump(reports[0].to_json()))
    else:
        click.echo(_dump({"status": "pass" if ok else "fail", "reports": [r.to_json() for r in reports]}))
    ctx.exit(0 if ok else 1)


def _table_json(table: Dict[int, LaurentPoly]) -> Dict[str, Dict[str, str]]:
    return {str(h): table[h].to_json() for h in sorted(table)}


def _table_text(table: Dict[int, LaurentPoly]) -> str:
    if not table:
        return "0"
    return "\n".join(f"h={h}: {table[h]}" for h in sorted(table))


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _check_cap(name: str, value: int, limit: int) -> None:
    if value > limit:
        _fail(f"{name}={value} exceeds the configured limit {name}<={limit} (raise it with --max-n)")


# ---------------------------------------------------------------------------
# morphism input


def _parse_word(text: str) -> List[Layer]:
    """``"cup1 dot2 cap1"``: layers applied bottom to top."""
    out: List[Layer] = []
    for pos, token in enumerate(text.replace(",", " ").split()):
        kind = token.rstrip("0123456789")
        index = token[len(kind):]
        if kind not in ("cup", "cap", "dot") or not index:
            raise ParseError(f"bad layer {token!r}; expected cup<i>, cap<i> or dot<i>", 1, pos + 1)
        out.append((kind, int(index)))
    return out


def _read_morphism(source: Optional[str], word: Optional[str], bottom: Optional[int]) -> DTLMorphism:
    try:
        if word is not None:
            if bottom is None:
                raise click.UsageError("--word needs --from (the number of bottom points)")
            try:
                return word_to_morphism(bottom, _parse_word(word))
            except IndexError as e:
                raise ParseError(str(e), 1, 1) from None
        if source is None:
            raise click.UsageError("give a morphism file ('-' for stdin) or --word")
        text = sys.stdin.read() if source == "-" else Path(source).read_text()
        return parse_morphism(text)
    except ParseError as e:
        _fail(f"parse error: {e}")
    except OSError as e:
        _fail(str(e))
    raise AssertionError("unreachable")


def _morphism_json(f: DTLMorphism) -> dict:
    lines = format_morphism(f).splitlines() if f.terms else []
    return {"m": f.m, "n": f.n, "degrees": f.degrees(), "terms": lines}


# ---------------------------------------------------------------------------
# the command group


def _set_root(key: str):
    def callback(ctx: click.Context, param: click.Parameter, value) -> None:
        if value is not None:
            ctx.find_root().obj[key] = value

    return callback


def _common_options(f):
    """``--format`` and ``--seed`` are accepted after the subcommand as well."""
    f = click.option("--seed", type=int, default=None, expose_value=False, callback=_set_root("seed"),
                     help="Seed for randomized checks.")(f)
    f = click.option("--format", type=click.Choice(["json", "text"]), default=None, expose_value=False,
                     callback=_set_root("format"), help="Output format.")(f)
    return f


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True,
              help="Output format.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized checks.")
@click.version_option(package_name="artifact")
@click.pass_context
def main(ctx: click.Context, fmt: str, seed: int) -> None:
    """Exact computations with dotted Temperley-Lieb diagrams, Kirby objects and Khovanov homology."""
    ctx.ensure_object(dict)
    ctx.obj.update(format=fmt, seed=seed)


_word_options = [
    click.argument("source", required=False),
    click.option("--word", help="Generator word such as 'cup1 dot2 cap1', applied bottom to top."),
    click.option("--from", "bottom", type=int, help="Bottom points of the word."),
]


def _with_word_options(f):
    for opt in reversed(_word_options):
        f = opt(f)
    return f


@main.command()
@_common_options
@_with_word_options
@click.pass_context
def reduce(ctx, source, word, bottom):
    """Normal form of a morphism (file, '-' for stdin, or --word)."""
    f = _read_morphism(source, word, bottom)
    _emit(ctx, _morphism_json(f), format_morphism(f))


@main.command("pol")
@_common_options
@_with_word_options
@click.pass_context
def pol_cmd(ctx, source, word, bottom):
    """Matrix of a morphism in the polynomial representation."""
    from .polyrep import pol

    f = _read_morphism(source, word, bottom)
    mat = pol(f)
    text = "\n".join(
        f"{mat.codomain.label(i)} <- {mat.domain.label(j)} : {v}" for i, j, v in mat.sorted_entries()
    ) or "0"
    _emit(ctx, mat.to_json(), text)


@main.command()
@_common_options
@click.argument("n", type=int)
@click.option("--method", type=click.Choice(["recursion", "symmetrizer"]), default="recursion", show_default=True)
@click.option("--max-n", type=int, default=8, show_default=True, help="Largest projector allowed.")
@click.pass_context
def jw(ctx, n, method, max_n):
    """The Jones-Wenzl projector on N strands, with its Pol graded rank."""
    from .karoubi import jones_wenzl, pol_jw_graded_rank

    _check_cap("n", n, max_n)
    f = jones_wenzl(n, method)
    out = _morphism_json(f)
    out["pol_graded_rank"] = pol_jw_graded_rank(n).to_json()
    _emit(ctx, out, format_morphism(f))


@main.command()
@_common_options
@click.argument("m", type=int)
@click.argument("n", type=int)
@click.pass_context
def homdim(ctx, m, n):
    """Graded dimension of Hom(P_M, P_N)."""
    from .karoubi import hom_dimension

    d = hom_dimension(m, n)
    _emit(ctx, d.to_json(), str(d))


@main.command()
@_common_options
@click.argument("suite", type=click.Choice(["oracle", "pairing", "jwrels", "karrels", "homtables", "poljw"]))
@click.option("--max-n", type=int, help="Size cap for the suite.")
@click.pass_context
def verify(ctx, suite, max_n):
    """Run one of the diagram-level verification suites."""
    if suite == "karrels":
        from .karoubi import verify_kar_relations

        n_max = 6 if max_n is None else max_n
        checks = [c for n in range(n_max + 1) for c in verify_kar_relations(n)]
        report = Report("karrels", checks, options={"max_n": n_max})
    else:
        report = run_suite(suite, max_n=max_n, seed=ctx.obj["seed"])
    _emit_reports(ctx, [report])


@main.command("kirby-pol")
@_common_options
@click.argument("k", type=click.IntRange(0, 1))
@click.argument("N", type=click.IntRange(0))
@click.option("--report", is_flag=True, help="Print the full report with the stable range.")
@click.pass_context
def kirby_pol(ctx, k, n, report):
    """Graded dimension of Pol of the Kirby object of winding K through level N."""
    from .kirby import kirby_pol_report

    rep = kirby_pol_report(k, n)
    if not report:
        _emit(ctx, rep.value.to_json(), str(rep.value))
        return
    out = rep.to_json()
    # later levels only add classes below this degree
    out["stable_range"] = {"min_degree": -(k + 2 * n), "max_degree": 0}
    _emit(ctx, out)
    ctx.exit(0 if all(rep.transitions_full_rank) else 1)


@main.command("kirby-square")
@_common_options
@click.argument("i", type=click.IntRange(0, 1))
@click.argument("j", type=click.IntRange(0, 1))
@click.argument("M", type=click.IntRange(0))
@click.pass_context
def kirby_square_cmd(ctx, i, j, m):
    """Orthogonal idempotent decomposition of a tensor square of Kirby objects."""
    from .kirby import kirby_square

    sq = kirby_square(i, j, m)
    levels = [{"levels": list(lv), **info} for lv, info in sorted(sq["levels"].items())]
    ortho = [{"n": a, "m": b, "ok": ok} for (a, b), ok in sorted(sq["orthogonality"].items())]
    ok = all(x["identity"] for x in levels) and all(x["ok"] for x in ortho)
    out = {"i": i, "j": j, "M": m, "status": "pass" if ok else "fail", "levels": levels,
           "orthogonality": ortho, "stable_range": {"max_inclusion_level": [m, m]}}
    text = f"kirby-square {i} {j} {m}: {'PASS' if ok else 'FAIL'}\n" + "\n".join(
        f"  levels {x['levels']}: terms {x['terms']} identity {'ok' if x['identity'] else 'FAIL'}" for x in levels
    )
    _emit(ctx, out, text)
    ctx.exit(0 if ok else 1)


@main.command("kirby-end")
@_common_options
@click.argument("k", type=click.IntRange(0, 1))
@click.argument("N", type=click.IntRange(0))
@click.option("--max-degree", type=int, help="Largest degree computed (default 2N+1).")
@click.pass_context
def kirby_end(ctx, k, n, max_degree):
    """Graded dimension of the endomorphisms of the Kirby object through level N."""
    from .kirby import end_kirby_dimensions

    top = 2 * n + 1 if max_degree is None else max_degree
    dims = end_kirby_dimensions(k, n, top)
    expected = LaurentPoly({d: 1 for d in range(0, min(top, 2 * n) + 1, 2)})
    ok = dims == expected
    out = {"k": k, "N": n, "max_degree": top, "dims": dims.to_json(), "status": "pass" if ok else "fail",
           "stable_range": {"min_degree": 0, "max_degree": 2 * n}}
    _emit(ctx, out, str(dims))
    ctx.exit(0 if ok else 1)


@main.command("handle-slide")
@_common_options
@click.argument("k", type=click.IntRange(0))
@click.argument("Z", type=click.Choice(["L", "R"]))
@click.argument("N", type=click.IntRange(0))
@click.pass_context
def handle_slide_cmd(ctx, k, z, n):
    """Certificate for the handle slide of winding K on side Z through level N."""
    from .tpc import handle_slide

    report = Report("handle-slide", handle_slide(k, z, n), options={"k": k, "side": z, "level": n})
    _emit_reports(ctx, [report])


@main.group()
def kdtl():
    """Diagrams with Kirby strands."""


@kdtl.command("verify")
@_common_options
@click.option("--suite", "suites", type=click.Choice(list(KDTL_SUITES) + ["square", "all"]), multiple=True,
              default=["all"], show_default=True)
@click.option("--level", type=click.IntRange(0), default=4, show_default=True, help="Largest inclusion level.")
@click.pass_context
def kdtl_verify(ctx, suites, level):
    """Check relation suites at every inclusion level up to --level."""
    from .kdtl import verify_suite

    names = list(KDTL_SUITES) + ["square"] if "all" in suites else list(dict.fromkeys(suites))
    reports = []
    for name in names:
        if name == "square":
            from .suites import kdtl as kdtl_suite

            full = kdtl_suite(level, suites=())
            reports.append(Report("square", full.checks, options={"level": level}))
        else:
            reports.append(Report(name, verify_suite(name, level), options={"level": level}))
    _emit_reports(ctx, reports)


# ---------------------------------------------------------------------------
# Khovanov homology


def _load_diagram(spec: str):
    from .khovanov import PDError, builtin, builtin_names, load_pd

    path = Path(spec)
    try:
        if path.exists():
            return load_pd(path)
        name = path.stem if path.suffix == ".pd" else spec
        if name in builtin_names():
            return builtin(name)
    except PDError as e:
        _fail(f"parse error in {spec}: {e}")
    _fail(f"no such file or bundled diagram: {spec} (bundled: {', '.join(builtin_names())})")


@main.command()
@_common_options
@click.argument("diagram")
@click.option("--route", type=click.Choice(["scan", "cube"]), default="scan", show_default=True)
@click.pass_context
def kh(ctx, diagram, route):
    """Khovanov homology of a PD code file or bundled diagram name."""
    from .khovanov import khovanov_homology, scan_homology

    d = _load_diagram(diagram)
    table = scan_homology(d) if route == "scan" else khovanov_homology(d)
    _emit(ctx, _table_json(table), _table_text(table))


@main.command("colored-kh")
@_common_options
@click.argument("diagram")
@click.option("--color", "colors", multiple=True, required=True,
              help="One per component: c:<n>, jw:<n>, kirby:<k> or kirby (both Kirby colors).")
@click.option("--level", type=click.IntRange(0), default=3, show_default=True, help="Level for Kirby colors.")
@click.pass_context
def colored_kh_cmd(ctx, diagram, colors, level):
    """Colored Khovanov homology.

    The total Kirby color is reported as its two summands, one table each.
    """
    from .khovanov import colored_kh, parse_color

    d = _load_diagram(diagram)
    try:
        parsed = [parse_color(c, level) for c in colors]
    except ValueError as e:
        _fail(str(e))
    totals = [i for i, c in enumerate(parsed) if c.kind == "omega_total"]
    try:
        if not totals:
            table = colored_kh(d, parsed)
            _emit(ctx, _table_json(table), _table_text(table))
            return
        # one table per choice of summand
        out, text = {}, []
        for choice in _summand_choices(len(totals)):
            cols = list(parsed)
            for pos, k in zip(totals, choice):
                cols[pos] = type(cols[pos])("omega", k, cols[pos].level)
            key = ",".join(str(c) for c in cols)
            table = colored_kh(d, cols)
            out[key] = _table_json(table)
            text.append(f"[{key}]\n{_table_text(table)}")
        _emit(ctx, out, "\n".join(text))
    except ValueError as e:
        _fail(str(e))


def _summand_choices(count: int) -> Iterable[Tuple[int, ...]]:
    from itertools import product

    return product((0, 1), repeat=count)


# ---------------------------------------------------------------------------
# everything


@main.command("verify-all")
@_common_options
@click.option("--max-n", type=int, help="Size cap passed to the diagram suites.")
@click.option("--level", type=int, help="Level cap passed to the Kirby suites.")
@click.option("--suite", "only", type=click.Choice(list(SUITES)), multiple=True, help="Restrict to these suites.")
@click.pass_context
def verify_all(ctx, max_n, level, only):
    """Run every verification suite with conservative default caps."""
    names = list(only) if only else list(SUITES)
    reports = [run_suite(name, max_n=max_n, level=level, seed=ctx.obj["seed"]) for name in names]
    _emit_reports(ctx, reports)


if __name__ == "__main__":  # pragma: no cover
    main()
