"""Deterministic SVG figures for polygons, decorated graphs and PL functions.

One lattice unit is 100 px and the y-axis points up.  Coordinates are
computed exactly and rounded to hundredths of a pixel with integer
arithmetic, so identical input always yields byte-identical output.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple
from xml.sax.saxutils import escape

from .delzant import DelzantPolygon, edge_sizes
from .graph import Center, DecoratedGraph, ExtendedGraph
from .lattice import format_rational, rational_direction, sub
from .piecewise import PiecewiseLinear

UNIT = 100
MARGIN = 40
LABEL_OFFSET = 14
COLUMN = 70


def px(q) -> str:
    """Exact rational to a decimal string with two places."""
    n = round(Fraction(q) * 100)
    sign = "-" if n < 0 else ""
    n = abs(n)
    whole, frac = divmod(n, 100)
    return f"{sign}{whole}" if frac == 0 else f"{sign}{whole}.{frac:02d}".rstrip("0")


class _Canvas:
    def __init__(self, xmin, xmax, ymin, ymax):
        self.xmin, self.ymax = Fraction(xmin), Fraction(ymax)
        self.width = (Fraction(xmax) - self.xmin) * UNIT + 2 * MARGIN
        self.height = (self.ymax - Fraction(ymin)) * UNIT + 2 * MARGIN
        self.items: List[str] = []

    def to_px(self, x, y) -> Tuple[Fraction, Fraction]:
        return (Fraction(x) - self.xmin) * UNIT + MARGIN, (self.ymax - Fraction(y)) * UNIT + MARGIN

    def add(self, item: str):
        self.items.append(item)

    def text(self, x, y, s: str, cls: str = "label", anchor: str = "middle"):
        self.add(
            f'<text class="{cls}" x="{px(x)}" y="{px(y)}" text-anchor="{anchor}" '
            f'dominant-baseline="middle">{escape(s)}</text>'
        )

    def svg(self, kind: str) -> str:
        head = (
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{px(self.width)}" '
            f'height="{px(self.height)}" viewBox="0 0 {px(self.width)} {px(self.height)}" '
            f'data-kind="{kind}">'
        )
        style = (
            "<style>.label{font:12px sans-serif}.small{font:10px sans-serif;fill:#555}"
            ".shape{stroke:#000;stroke-width:1.5;fill:#eef}.edge{stroke:#000;stroke-width:1.5;fill:none}.free{stroke:#888;stroke-width:1;"
            "stroke-dasharray:4 3;fill:none}.axis{stroke:#999;stroke-width:1}</style>"
        )
        return "\n".join([head, style, *self.items, "</svg>"]) + "\n"


def render_polygon(p: DelzantPolygon) -> str:
    xs = [v[0] for v in p.vertices]
    ys = [v[1] for v in p.vertices]
    c = _Canvas(min(xs), max(xs), min(ys), max(ys))
    pts = " ".join(f"{px(x)},{px(y)}" for x, y in (c.to_px(*v) for v in p.vertices))
    data = " ".join(f"{format_rational(x)},{format_rational(y)}" for x, y in p.vertices)
    c.add(f'<polygon class="shape" points="{pts}" data-vertices="{data}"/>')
    for j, size in enumerate(edge_sizes(p)):
        a, b = p.edge(j)
        (w0, w1), _ = rational_direction(sub(b, a))
        mx, my = c.to_px((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
        # outward normal of a counterclockwise edge is (w1, -w0); screen y is flipped
        nx, ny = Fraction(w1), Fraction(w0)
        norm = max(abs(nx), abs(ny))
        c.text(mx + LABEL_OFFSET * nx / norm, my + LABEL_OFFSET * ny / norm, format_rational(size))
    return c.svg("polygon")


def _graph_layout(g: DecoratedGraph) -> Dict[Center, Fraction]:
    """Horizontal position (in units) of every fixed component.

    Extremal components sit on the centre column.  An interior vertex joined
    by a Z_k-sphere to an interior vertex already placed shares its side, so
    those spheres are drawn upright; other interior vertices alternate left
    and right.  Vertices sharing a moment value are pushed outwards.
    """
    pos: Dict[Center, Fraction] = {}
    sides: Dict[int, int] = {}
    used: Dict[Tuple[Fraction, int], int] = {}
    side = -1
    step = Fraction(COLUMN, UNIT)
    for i, v in enumerate(g.isolated):
        if g.is_extremal(i):
            col = 0
        else:
            partners = [e.bottom + e.top - i for e in g.incident(i)]
            placed = [sides[j] for j in partners if j in sides]
            if placed:
                col = placed[0]
            else:
                col = side
                side = -side
            sides[i] = col
        while (v.phi, col) in used:
            col += 1 if col >= 0 else -1
        used[(v.phi, col)] = i
        pos[Center("isolated", i)] = col * step
    for s in range(len(g.surfaces)):
        pos[Center("surface", s)] = Fraction(0)
    return pos


def _graph_canvas(g: DecoratedGraph, free=()) -> _Canvas:
    pos = _graph_layout(g)
    lo, hi = g.phi_min, g.phi_max
    xs = list(pos.values()) + [Fraction(-1), Fraction(1)]
    c = _Canvas(min(xs) - Fraction(1, 2), max(xs) + Fraction(3, 2), lo, hi)
    c.add(
        f'<line class="axis" x1="{px(c.to_px(max(xs) + 1, 0)[0])}" y1="{px(c.to_px(0, hi)[1])}" '
        f'x2="{px(c.to_px(max(xs) + 1, 0)[0])}" y2="{px(c.to_px(0, lo)[1])}"/>'
    )

    def at(center: Center):
        phi = g.isolated[center.index].phi if center.kind == "isolated" else g.surfaces[center.index].phi
        return c.to_px(pos[center], phi)

    for e in g.edges:
        (x1, y1), (x2, y2) = at(Center("isolated", e.bottom)), at(Center("isolated", e.top))
        c.add(f'<line class="edge" x1="{px(x1)}" y1="{px(y1)}" x2="{px(x2)}" y2="{px(y2)}" data-k="{e.k}"/>')
        c.text((x1 + x2) / 2 + 10, (y1 + y2) / 2, str(e.k), anchor="start")
    for a, b in free:
        (x1, y1), (x2, y2) = at(a), at(b)
        c.add(f'<line class="free" x1="{px(x1)}" y1="{px(y1)}" x2="{px(x2)}" y2="{px(y2)}" data-k="1"/>')
    for s, f in enumerate(g.surfaces):
        x, y = at(Center("surface", s))
        c.add(
            f'<ellipse cx="{px(x)}" cy="{px(y)}" rx="45" ry="7" fill="#ddd" stroke="#000" '
            f'data-phi="{format_rational(f.phi)}"/>'
        )
        c.text(x - 55, y, f"size {format_rational(f.size)}, g={f.genus}, e={f.self_intersection}",
               cls="small", anchor="end")
    for i, v in enumerate(g.isolated):
        x, y = at(Center("isolated", i))
        c.add(f'<circle cx="{px(x)}" cy="{px(y)}" r="4" fill="#000" data-phi="{format_rational(v.phi)}"/>')
        c.text(x - 8, y, f"({v.weights[0]},{v.weights[1]})", cls="small", anchor="end")
    axis_x = c.to_px(max(xs) + 1, 0)[0]
    for phi in sorted(set(g.phis())):
        c.text(axis_x + 6, c.to_px(0, phi)[1], format_rational(phi), cls="small", anchor="start")
    return c


def render_graph(g: DecoratedGraph) -> str:
    return _graph_canvas(g).svg("graph")


def render_extended(x: ExtendedGraph) -> str:
    return _graph_canvas(x.graph, x.free_edges).svg("extended")


def render_pl(f: PiecewiseLinear) -> str:
    knots = list(f.knots) or [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))]
    xs = [k[0] for k in knots]
    ys = [k[1] for k in knots] + [Fraction(0)]
    c = _Canvas(min(xs), max(xs), min(ys), max(ys))
    (x0, y0), (x1, _) = c.to_px(min(xs), 0), c.to_px(max(xs), 0)
    c.add(f'<line class="axis" x1="{px(x0)}" y1="{px(y0)}" x2="{px(x1)}" y2="{px(y0)}"/>')
    pts = " ".join(f"{px(x)},{px(y)}" for x, y in (c.to_px(*k) for k in knots))
    data = " ".join(f"{format_rational(x)},{format_rational(y)}" for x, y in knots)
    c.add(f'<polyline class="edge" points="{pts}" data-knots="{data}"/>')
    for x, y in knots:
        sx, sy = c.to_px(x, y)
        c.text(sx, sy - 10, f"({format_rational(x)}, {format_rational(y)})", cls="small")
    return c.svg("pl")


def render(obj) -> str:
    if isinstance(obj, DelzantPolygon):
        return render_polygon(obj)
    if isinstance(obj, ExtendedGraph):
        return render_extended(obj)
    if isinstance(obj, DecoratedGraph):
        return render_graph(obj)
    if isinstance(obj, PiecewiseLinear):
        return render_pl(obj)
    raise TypeError(f"cannot render {type(obj).__name__}")
