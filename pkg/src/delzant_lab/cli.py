"""Command-line front end.

Every command prints JSON (default) or text.  Exit status is 0 on success,
1 on a domain error (with a JSON error object on stderr) and 2 on a usage
error.  ``DELZANT_LAB_FORMAT`` overrides the default output format.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import io
from .delzant import (
    ChopError,
    DelzantPolygon,
    PolygonError,
    UnchopError,
    canonical_form,
    corner_chop,
    corner_unchop,
    edge_sizes,
    is_delzant,
    quotient_data,
    subcircle_graph,
    subcircle_pushforward,
)
from .graph import (
    BlowDownError,
    BlowUpError,
    Center,
    DecoratedGraph,
    ExtendError,
    GraphError,
    Locus,
    cp2_graph,
    dh,
    exceptional_loci,
    extend,
    graph_blow_down,
    graph_blow_up,
    validate,
)
from .lattice import format_rational
from .render import render
from .search import (
    SearchConfig,
    format_table,
    max_equal_circle_blowups,
    max_equal_toric_blowups,
    replay_circle,
    theorem_table,
)

FORMATS = ("json", "text")


class CliError(Exception):
    def __init__(self, code: str, message: str, **extra):
        super().__init__(message)
        self.code = code
        self.message = message
        self.extra = extra


# --- argument types (failures here are usage errors) ---------------------------


def rational_arg(text: str) -> Fraction:
    try:
        if "." in text or "e" in text.lower():
            raise ValueError
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r} (use p/q)") from None


def positive_rational(text: str) -> Fraction:
    q = rational_arg(text)
    if q <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text}")
    return q


def rational_list(text: str) -> List[Fraction]:
    return [positive_rational(t) for t in text.split(",") if t.strip()]


def int_pair(text: str) -> Tuple[int, int]:
    try:
        a, b = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'a,b', got {text!r}") from None
    return a, b


def center_arg(text: str) -> Center:
    try:
        return Center.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"center must look like isolated:0 or surface:1, got {text!r}") from None


def locus_arg(text: str) -> Locus:
    try:
        return Locus.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"locus must look like pair:0,1, surface:0 or vertex:2,0, got {text!r}") from None


# --- loading ------------------------------------------------------------------------


def _load(path: str):
    try:
        return io.load_json(path)
    except FileNotFoundError:
        raise CliError("file_not_found", f"no such file: {path}") from None
    except IsADirectoryError:
        raise CliError("file_not_found", f"is a directory: {path}") from None
    except json.JSONDecodeError as exc:
        raise CliError("malformed_json", f"{path}: {exc}") from None
    except UnicodeDecodeError as exc:
        raise CliError("malformed_json", f"{path}: {exc}") from None


def _polygon(path: str) -> DelzantPolygon:
    obj = _load(path)
    try:
        return io.polygon_from_json(obj)
    except PolygonError as exc:
        raise CliError("invalid_polygon", str(exc)) from None


def _graph(path: str, check: bool = True) -> DecoratedGraph:
    obj = _load(path)
    try:
        g = io.graph_from_json(obj)
    except GraphError as exc:
        raise CliError("invalid_graph", str(exc)) from None
    if check:
        problems = validate(g)
        if problems:
            raise CliError("invalid_graph", "graph fails validation", violations=problems)
    return g


def _index(i: int, n: int, what: str) -> int:
    if not 0 <= i < n:
        raise CliError("index_out_of_range", f"{what} {i} out of range 0..{n - 1}")
    return i


# --- commands -------------------------------------------------------------------------
# Each returns (json_obj, text).


def cmd_check_delzant(a):
    obj = _load(a.inp)
    verts = io.polygon_vertices_from_json(obj)
    try:
        res = is_delzant(verts)
    except PolygonError as exc:
        raise CliError("invalid_polygon", str(exc)) from None
    out = {"delzant": res.ok, "vertex": res.vertex, "reason": res.reason or None}
    text = "Delzant" if res.ok else f"not Delzant at vertex {res.vertex}: {res.reason}"
    return out, text


def _poly_out(p: DelzantPolygon):
    return io.polygon_to_json(p), "\n".join(f"{format_rational(x)} {format_rational(y)}" for x, y in p.vertices)


def cmd_chop(a):
    p = _polygon(a.inp)
    _index(a.vertex, len(p), "vertex")
    return _poly_out(corner_chop(p, a.vertex, a.eps))


def cmd_unchop(a):
    p = _polygon(a.inp)
    _index(a.edge, len(p), "edge")
    return _poly_out(corner_unchop(p, a.edge))


def cmd_edge_sizes(a):
    sizes = [format_rational(s) for s in edge_sizes(_polygon(a.inp))]
    return {"edge_sizes": sizes}, " ".join(sizes)


def cmd_canon(a):
    cf = canonical_form(_polygon(a.inp))
    return _poly_out(DelzantPolygon(cf))


def cmd_quotient_data(a):
    q = quotient_data(_polygon(a.inp))
    out = io.quotient_to_json(q)
    lines = [f"facet {i}: normal {n}, offset {format_rational(c)}"
             for i, (n, c) in enumerate(zip(q.facet_normals, q.offsets))]
    lines += [f"kernel: {k}" for k in q.kernel_basis]
    return out, "\n".join(lines)


def _graph_text(g: DecoratedGraph) -> str:
    lines = [f"isolated {i}: phi={format_rational(v.phi)} weights={v.weights}" for i, v in enumerate(g.isolated)]
    lines += [
        f"surface {s}: phi={format_rational(f.phi)} size={format_rational(f.size)} genus={f.genus} e={f.self_intersection}"
        for s, f in enumerate(g.surfaces)
    ]
    lines += [f"edge {e.bottom}-{e.top}: k={e.k} size={format_rational(e.size)}" for e in g.edges]
    if g.volume is not None:
        lines.append(f"volume {format_rational(g.volume)}")
    return "\n".join(lines)


def _graph_source(a) -> DecoratedGraph:
    if a.cp2 is not None:
        m, n = a.cp2
        g = cp2_graph(m, n)
    elif a.polygon is not None:
        if a.xi is None:
            raise CliError("missing_argument", "--polygon needs --xi")
        g = subcircle_graph(_polygon(a.polygon), a.xi)
    elif a.graph is not None:
        g = _graph(a.graph, check=False)
    else:
        raise CliError("missing_argument", "give one of --cp2, --graph or --polygon")
    return g.reversed() if a.reverse else g


def cmd_graph(a):
    g = _graph_source(a)
    if a.validate:
        problems = validate(g)
        out = {"valid": not problems, "violations": problems}
        return out, "valid" if not problems else "\n".join(problems)
    if a.loci:
        loci = [str(l) for l in exceptional_loci(g)]
        return {"loci": loci}, "\n".join(loci)
    if a.extend:
        x = extend(g)
        text = _graph_text(g) + "\n" + "\n".join(f"free {s}-{t}" for s, t in x.free_edges)
        return io.extended_to_json(x), text
    return io.graph_to_json(g), _graph_text(g)


def cmd_blowup(a):
    g = _graph(a.graph)
    if a.replay:
        steps = io.replay_from_json(_load(a.replay))
        g = replay_circle(steps, g)[-1]
    elif a.center is not None and a.eps is not None:
        g = graph_blow_up(g, a.center, a.eps)
    else:
        raise CliError("missing_argument", "give --center and --eps, or --replay")
    return io.graph_to_json(g), _graph_text(g)


def cmd_blowdown(a):
    g = graph_blow_down(_graph(a.graph), a.locus)
    return io.graph_to_json(g), _graph_text(g)


def _pl_out(f, at):
    if at is not None:
        v = format_rational(f(at))
        return v, v
    text = "\n".join(f"{format_rational(x)} {format_rational(y)}" for x, y in f.knots)
    return io.pl_to_json(f), text


def cmd_dh(a):
    return _pl_out(dh(_graph(a.graph)), a.at)


def cmd_pushforward(a):
    try:
        f = subcircle_pushforward(_polygon(a.inp), a.xi)
    except ValueError as exc:
        raise CliError("invalid_direction", str(exc)) from None
    return _pl_out(f, a.at)


def _cert_text(c) -> str:
    steps = ", ".join(f"{d}@{format_rational(e)}" for d, e in c.witness) or "(none)"
    text = f"{c.model} eps={format_rational(c.eps)}: k_max={c.k_max} ({c.frontier_count} states)\nwitness: {steps}"
    if c.start is not None:
        text += f"\nstart: {c.start}"
    return text


def cmd_search_toric(a):
    c = max_equal_toric_blowups(a.eps, SearchConfig(a.eps, a.max_depth, dedup=not a.no_dedup))
    return c.to_json(), _cert_text(c)


def cmd_search_circle(a):
    if a.weight_bound < 2:
        raise CliError("invalid_argument", "weight bound must be at least 2")
    c = max_equal_circle_blowups(a.eps, SearchConfig(a.eps, a.max_depth, a.weight_bound, not a.no_dedup))
    return c.to_json(), _cert_text(c)


def cmd_theorem_table(a):
    if a.weight_bound < 2:
        raise CliError("invalid_argument", "weight bound must be at least 2")
    rows = theorem_table(a.eps, a.weight_bound)
    return {"rows": [r.to_json() for r in rows]}, format_table(rows)


def cmd_render(a):
    obj = _load(a.inp)
    kind = a.kind
    if kind == "auto":
        kind = io.detect_kind(obj)
    if kind == "polygon":
        target = _polygon(a.inp)
    elif kind in ("graph", "dh", "extended"):
        g = _graph(a.inp)
        if kind == "dh":
            target = dh(g)
        elif kind == "extended":
            target = io.extended_from_json(obj) if "free_edges" in obj else extend(g)
        else:
            target = g
    else:
        target = io.pl_from_json(obj)
    svg = render(target)
    try:
        io.atomic_write(a.out, svg)
    except OSError as exc:
        raise CliError("unwritable_path", f"cannot write {a.out}: {exc.strerror or exc}") from None
    return {"written": a.out, "kind": kind, "bytes": len(svg.encode())}, f"wrote {a.out}"


# --- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS, help="output format")
    fmt.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    ap = argparse.ArgumentParser(prog="delzant-lab", parents=[fmt],
                                 description="Exact toric and circle-action blow-up calculus.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[fmt], help=help_)
        p.set_defaults(func=fn)
        return p

    for name, fn, help_ in [
        ("check-delzant", cmd_check_delzant, "check the Delzant condition"),
        ("edge-sizes", cmd_edge_sizes, "rational lengths of the edges"),
        ("canon", cmd_canon, "canonical form up to unimodular affine maps"),
        ("quotient-data", cmd_quotient_data, "facet normals, offsets and kernel basis"),
    ]:
        add(name, fn, help_).add_argument("--in", dest="inp", required=True, metavar="POLYGON.json")

    p = add("chop", cmd_chop, "toric blow-up: chop a corner")
    p.add_argument("--in", dest="inp", required=True, metavar="POLYGON.json")
    p.add_argument("--vertex", type=int, required=True)
    p.add_argument("--eps", type=positive_rational, required=True)

    p = add("unchop", cmd_unchop, "toric blow-down of an exceptional edge")
    p.add_argument("--in", dest="inp", required=True, metavar="POLYGON.json")
    p.add_argument("--edge", type=int, required=True)

    p = add("graph", cmd_graph, "build, validate or extend a decorated graph")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--cp2", type=int_pair, metavar="M,N", help="standard circle action with weights M,N")
    src.add_argument("--graph", metavar="GRAPH.json")
    src.add_argument("--polygon", metavar="POLYGON.json", help="restrict a toric action to a subcircle")
    p.add_argument("--xi", type=int_pair, metavar="A,B")
    p.add_argument("--reverse", action="store_true", help="replace the moment map by its negative")
    what = p.add_mutually_exclusive_group()
    what.add_argument("--validate", action="store_true")
    what.add_argument("--extend", action="store_true")
    what.add_argument("--loci", action="store_true", help="list exceptional spheres")

    p = add("blowup", cmd_blowup, "equivariant blow-up of a decorated graph")
    p.add_argument("--graph", required=True, metavar="GRAPH.json")
    p.add_argument("--center", type=center_arg)
    p.add_argument("--eps", type=positive_rational)
    p.add_argument("--replay", metavar="REPLAY.json", help="list of [center, eps] steps or a certificate")

    p = add("blowdown", cmd_blowdown, "blow down an exceptional sphere")
    p.add_argument("--graph", required=True, metavar="GRAPH.json")
    p.add_argument("--locus", type=locus_arg, required=True)

    p = add("dh", cmd_dh, "Duistermaat-Heckman function of a graph")
    p.add_argument("--graph", required=True, metavar="GRAPH.json")
    p.add_argument("--at", type=rational_arg)

    p = add("pushforward", cmd_pushforward, "fiber-length function of a polygon along a subcircle")
    p.add_argument("--in", dest="inp", required=True, metavar="POLYGON.json")
    p.add_argument("--xi", type=int_pair, required=True, metavar="A,B")
    p.add_argument("--at", type=rational_arg)

    for name, fn, help_ in [
        ("search-toric", cmd_search_toric, "largest number of equal toric blow-ups"),
        ("search-circle", cmd_search_circle, "largest number of equal circle-equivariant blow-ups"),
    ]:
        p = add(name, fn, help_)
        p.add_argument("--eps", type=positive_rational, required=True)
        p.add_argument("--max-depth", type=int)
        p.add_argument("--no-dedup", action="store_true")
        if name == "search-circle":
            p.add_argument("--weight-bound", type=int, default=8)

    p = add("theorem-table", cmd_theorem_table, "compare both searches with the closed-form bounds")
    p.add_argument("--eps", type=rational_list, required=True, metavar="E1,E2,...")
    p.add_argument("--weight-bound", type=int, default=8)

    p = add("render", cmd_render, "write an SVG figure")
    p.add_argument("--in", dest="inp", required=True, metavar="FILE.json")
    p.add_argument("--out", required=True, metavar="OUT.svg")
    p.add_argument("--kind", choices=("auto", "polygon", "graph", "extended", "dh", "pl"), default="auto")
    return ap


_DOMAIN_ERRORS: Sequence[Tuple[type, str]] = (
    (io.FormatError, "bad_format"),
    (PolygonError, "invalid_polygon"),
    (ChopError, "illegal_chop"),
    (UnchopError, "not_exceptional_edge"),
    (BlowUpError, "illegal_blowup"),
    (BlowDownError, "not_exceptional_locus"),
    (ExtendError, "extend_failed"),
    (GraphError, "invalid_graph"),
    (ValueError, "invalid_value"),
)


def _error_obj(exc: BaseException):
    if isinstance(exc, CliError):
        return {"code": exc.code, "message": exc.message, **exc.extra}
    for cls, code in _DOMAIN_ERRORS:
        if isinstance(exc, cls):
            out = {"code": code, "message": str(exc)}
            if isinstance(exc, BlowUpError) and exc.condition is not None:
                out["condition"] = exc.condition
            return out
    return None


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    env_fmt = os.environ.get("DELZANT_LAB_FORMAT")
    if env_fmt is not None and env_fmt not in FORMATS:
        print(f"delzant-lab: DELZANT_LAB_FORMAT must be one of {', '.join(FORMATS)}", file=stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = getattr(args, "format", None) or env_fmt or "json"
    if getattr(args, "verbose", False):
        logging.basicConfig(level=logging.INFO, stream=stderr)

    try:
        out, text = args.func(args)
    except (CliError, ValueError, IndexError) as exc:
        err = _error_obj(exc) or {"code": "index_out_of_range", "message": str(exc)}
        print(json.dumps({"error": err}), file=stderr)
        return 1
    if fmt == "json":
        print(io.dumps(out), file=stdout)
    else:
        print(text, file=stdout)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
