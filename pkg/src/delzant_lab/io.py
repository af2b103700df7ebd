"""JSON interchange.  Rationals are always strings ``"p/q"`` (or ``"p"``)."""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Tuple

from .delzant import DelzantPolygon, QuotientData
from .graph import Center, DecoratedGraph, ExtendedGraph, IsolatedVertex, SurfaceVertex
from .lattice import format_rational
from .piecewise import PiecewiseLinear


class FormatError(ValueError):
    """Input parsed as JSON but does not match the expected schema."""


def parse_rational(value: Any) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        raise FormatError(f"expected a rational string like '1/4', got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"not a rational: {value!r}") from None
    raise FormatError(f"expected a rational string, got {type(value).__name__}")


def _int(value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"expected an integer, got {value!r}")
    return value


def _get(obj: Dict, key: str):
    if not isinstance(obj, dict):
        raise FormatError(f"expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise FormatError(f"missing field {key!r}")
    return obj[key]


# --- polygons -------------------------------------------------------------


def polygon_to_json(p: DelzantPolygon) -> Dict:
    return {"vertices": [[format_rational(x), format_rational(y)] for x, y in p.vertices]}


def polygon_vertices_from_json(obj: Dict) -> List[Tuple[Fraction, Fraction]]:
    verts = _get(obj, "vertices")
    if not isinstance(verts, list):
        raise FormatError("'vertices' must be a list")
    out = []
    for v in verts:
        if not isinstance(v, list) or len(v) != 2:
            raise FormatError(f"vertex must be a pair, got {v!r}")
        out.append((parse_rational(v[0]), parse_rational(v[1])))
    return out


def polygon_from_json(obj: Dict) -> DelzantPolygon:
    return DelzantPolygon(tuple(polygon_vertices_from_json(obj)))


def quotient_to_json(q: QuotientData) -> Dict:
    return {
        "facet_normals": [list(n) for n in q.facet_normals],
        "offsets": [format_rational(c) for c in q.offsets],
        "kernel_basis": [list(k) for k in q.kernel_basis],
    }


# --- graphs -----------------------------------------------------------------


def graph_to_json(g: DecoratedGraph) -> Dict:
    out = {
        "isolated": [{"phi": format_rational(v.phi), "weights": list(v.weights)} for v in g.isolated],
        "surfaces": [
            {
                "phi": format_rational(s.phi),
                "size": format_rational(s.size),
                "genus": s.genus,
                "e": s.self_intersection,
            }
            for s in g.surfaces
        ],
        "edges": [
            {"from": e.bottom, "to": e.top, "k": e.k, "size": format_rational(e.size)} for e in g.edges
        ],
    }
    if g.volume is not None:
        out["volume"] = format_rational(g.volume)
    return out


def graph_from_json(obj: Dict) -> DecoratedGraph:
    iso_raw = obj.get("isolated", []) if isinstance(obj, dict) else _get(obj, "isolated")
    iso = []
    for v in iso_raw:
        w = _get(v, "weights")
        if not isinstance(w, list) or len(w) != 2:
            raise FormatError(f"weights must be a pair of integers, got {w!r}")
        iso.append(IsolatedVertex(parse_rational(_get(v, "phi")), (_int(w[0]), _int(w[1]))))
    surf = [
        SurfaceVertex(
            parse_rational(_get(s, "phi")),
            parse_rational(_get(s, "size")),
            _int(s.get("genus", 0)),
            _int(s.get("e", 0)),
        )
        for s in obj.get("surfaces", [])
    ]
    edges, sizes = [], []
    for e in obj.get("edges", []):
        a, b = _int(_get(e, "from")), _int(_get(e, "to"))
        if not (0 <= a < len(iso) and 0 <= b < len(iso)) or a == b:
            raise FormatError(f"edge {e!r} does not join two distinct isolated vertices")
        edges.append((a, b, _int(_get(e, "k"))))
        sizes.append(parse_rational(e["size"]) if "size" in e else None)
    if not iso and not surf:
        raise FormatError("graph has no fixed points")
    vol = parse_rational(obj["volume"]) if obj.get("volume") is not None else None
    return DecoratedGraph.build(iso, surf, edges, vol, sizes)


def extended_to_json(x: ExtendedGraph) -> Dict:
    out = graph_to_json(x.graph)
    out["free_edges"] = [{"from": str(a), "to": str(b), "k": 1} for a, b in x.free_edges]
    return out


def extended_from_json(obj: Dict) -> ExtendedGraph:
    g = graph_from_json(obj)
    free = tuple(
        (Center.parse(_get(e, "from")), Center.parse(_get(e, "to"))) for e in obj.get("free_edges", [])
    )
    return ExtendedGraph(g, free)


# --- piecewise-linear functions ----------------------------------------------


def pl_to_json(f: PiecewiseLinear) -> Dict:
    return {
        "knots": [[format_rational(x), format_rational(y)] for x, y in f.knots],
        "pieces": [
            {"from": format_rational(a), "to": format_rational(b), "slope": format_rational(s),
             "intercept": format_rational(c)}
            for (a, b), (s, c) in zip(zip(f.breakpoints, f.breakpoints[1:]), f.pieces)
        ],
    }


def pl_from_json(obj: Dict) -> PiecewiseLinear:
    knots = _get(obj, "knots")
    return PiecewiseLinear(tuple((parse_rational(x), parse_rational(y)) for x, y in knots))


# --- files ------------------------------------------------------------------------


def load_json(path: str | os.PathLike) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file so failures leave nothing behind."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def detect_kind(obj: Dict) -> str:
    if not isinstance(obj, dict):
        raise FormatError("expected a JSON object")
    if "vertices" in obj:
        return "polygon"
    if "free_edges" in obj:
        return "extended"
    if "isolated" in obj or "surfaces" in obj:
        return "graph"
    if "knots" in obj:
        return "pl"
    raise FormatError("cannot tell what kind of object this JSON describes")


# --- replay files -------------------------------------------------------------


def replay_to_json(steps) -> List[List[str]]:
    """A replay file is an ordered list of ``[center descriptor, eps]`` pairs."""
    return [[str(c), format_rational(Fraction(e))] for c, e in steps]


def replay_from_json(obj) -> List[Tuple[str, Fraction]]:
    """Accepts a bare replay list or a certificate carrying a ``witness``."""
    if isinstance(obj, dict):
        obj = [[s.get("center"), s.get("eps")] for s in _get(obj, "witness")]
    if not isinstance(obj, list):
        raise FormatError("replay file must be a list of [center, eps] pairs")
    out = []
    for step in obj:
        if not isinstance(step, list) or len(step) != 2 or not isinstance(step[0], str):
            raise FormatError(f"replay step must be [center, eps], got {step!r}")
        out.append((step[0], parse_rational(step[1])))
    return out
