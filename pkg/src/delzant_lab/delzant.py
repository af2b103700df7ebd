"""Delzant polygons: validity, corner chopping, canonical forms and circle subactions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import lattice as L
from .lattice import Point, RationalLike, UnimodularAffineMap, Vector, as_point, as_rational
from .piecewise import PiecewiseLinear


class PolygonError(ValueError):
    """Malformed polygon input (too few vertices, repeats, collinear triples)."""


class ChopError(ValueError):
    pass


class UnchopError(ValueError):
    pass


@dataclass(frozen=True)
class DelzantCheck:
    ok: bool
    vertex: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _edge_directions(vs: Sequence[Point], i: int) -> Tuple[Vector, Vector]:
    """Primitive directions of the edges leaving vertex ``i``: toward ``i+1`` then toward ``i-1``."""
    n = len(vs)
    a, _ = L.rational_direction(L.sub(vs[(i + 1) % n], vs[i]))
    b, _ = L.rational_direction(L.sub(vs[i - 1], vs[i]))
    return a, b


def is_delzant(vertices: Sequence[Sequence[RationalLike]]) -> DelzantCheck:
    """Check convexity, counterclockwise order and the unimodularity of every vertex cone.

    Raises :class:`PolygonError` on degenerate input; returns a falsy
    :class:`DelzantCheck` naming the first bad vertex otherwise.
    """
    vs = [as_point(v) for v in vertices]
    n = len(vs)
    if n < 3:
        raise PolygonError("a polygon needs at least 3 vertices")
    if len(set(vs)) != n:
        raise PolygonError("repeated vertex")
    for i in range(n):
        turn = L.det(L.sub(vs[(i + 1) % n], vs[i]), L.sub(vs[i - 1], vs[i]))
        if turn == 0:
            raise PolygonError(f"collinear vertices around vertex {i}")
    for i in range(n):
        a, b = _edge_directions(vs, i)
        d = L.det(a, b)
        if d <= 0:
            return DelzantCheck(False, i, "not convex and counterclockwise")
        if d != 1:
            return DelzantCheck(False, i, f"edge vectors span a sublattice of index {d}")
    # left turns everywhere still allow the boundary to wind more than once
    if _winding(vs) != 1:
        return DelzantCheck(False, 0, "boundary winds more than once")
    return DelzantCheck(True)


def _winding(vs: Sequence[Point]) -> int:
    def upper(d):
        return d[1] > 0 or (d[1] == 0 and d[0] < 0)

    n = len(vs)
    dirs = [L.sub(vs[(i + 1) % n], vs[i]) for i in range(n)]
    return sum(1 for i in range(n) if not upper(dirs[i - 1]) and upper(dirs[i]))


@dataclass(frozen=True)
class DelzantPolygon:
    vertices: Tuple[Point, ...]

    def __post_init__(self):
        vs = tuple(as_point(v) for v in self.vertices)
        object.__setattr__(self, "vertices", vs)
        check = is_delzant(vs)
        if not check:
            raise PolygonError(f"not a Delzant polygon at vertex {check.vertex}: {check.reason}")

    def __len__(self) -> int:
        return len(self.vertices)

    def edge_directions(self, i: int) -> Tuple[Vector, Vector]:
        return _edge_directions(self.vertices, i)

    def edge(self, j: int) -> Tuple[Point, Point]:
        """Edge ``j`` runs from vertex ``j`` to vertex ``j + 1``."""
        n = len(self.vertices)
        return self.vertices[j % n], self.vertices[(j + 1) % n]

    def area(self) -> Fraction:
        vs = self.vertices
        twice = sum(L.det(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))
        return Fraction(twice) / 2

    def transform(self, T: UnimodularAffineMap) -> "DelzantPolygon":
        image = [T(v) for v in self.vertices]
        if T.det < 0:
            image.reverse()
        return DelzantPolygon(tuple(image))

    def same_cycle(self, other: "DelzantPolygon") -> bool:
        """Equal as cyclically ordered vertex lists."""
        a, b = self.vertices, other.vertices
        if len(a) != len(b):
            return False
        return any(a[k:] + a[:k] == b for k in range(len(a)))


def standard_cp2(size: RationalLike = 1) -> DelzantPolygon:
    s = as_rational(size)
    if s <= 0:
        raise ValueError("size must be positive")
    return DelzantPolygon(((0, 0), (s, 0), (0, s)))


def edge_sizes(p: DelzantPolygon) -> List[Fraction]:
    return [L.rational_length(*p.edge(j)) for j in range(len(p))]


def corner_chop(p: DelzantPolygon, vertex: int, eps: RationalLike) -> DelzantPolygon:
    """Cut off the corner at ``vertex`` by a triangle with legs of rational length ``eps``.

    The corner is replaced by two vertices at indices ``vertex`` (on the
    incoming edge) and ``vertex + 1`` (on the outgoing edge), so the new short
    edge is edge ``vertex`` and ``corner_unchop(result, vertex)`` restores ``p``.
    """
    eps = as_rational(eps)
    n = len(p)
    if not 0 <= vertex < n:
        raise IndexError(f"vertex index {vertex} out of range")
    if eps <= 0:
        raise ChopError("nonpositive size")
    sizes = edge_sizes(p)
    out_edge, in_edge = vertex, (vertex - 1) % n
    for j in (in_edge, out_edge):
        if not sizes[j] > eps:
            raise ChopError(f"edge too short: edge {j} has size {sizes[j]}, need > {eps}")
    V = p.vertices[vertex]
    a, b = p.edge_directions(vertex)
    along_out = L.add(V, L.scale(eps, a))
    along_in = L.add(V, L.scale(eps, b))
    vs = list(p.vertices)
    new = vs[:vertex] + [along_in, along_out] + vs[vertex + 1:]
    return DelzantPolygon(tuple(new))


def exceptional_corner(p: DelzantPolygon, edge: int) -> Optional[Tuple[Point, Fraction]]:
    """If edge ``edge`` is the trace of a corner chop, return ``(corner, size)``."""
    n = len(p)
    if n < 4:
        return None
    j = edge % n
    P, Q = p.edge(j)
    w, eps = L.rational_direction(L.sub(Q, P))
    _, b = p.edge_directions(j)
    a, _ = p.edge_directions((j + 1) % n)
    if L.sub(a, b) != w:
        return None
    V = L.sub(P, L.scale(eps, b))
    return V, eps


def corner_unchop(p: DelzantPolygon, edge: int) -> DelzantPolygon:
    """Inverse of :func:`corner_chop`: collapse edge ``edge`` back to a corner."""
    n = len(p)
    found = exceptional_corner(p, edge)
    if found is None:
        raise UnchopError(f"edge {edge} is not exceptional")
    V, _ = found
    j = edge % n
    vs = list(p.vertices)
    # vertex j+1 becomes V; vertex j disappears
    if j == n - 1:
        new = [V] + vs[1:n - 1]
    else:
        new = vs[:j] + [V] + vs[j + 2:]
    try:
        return DelzantPolygon(tuple(new))
    except PolygonError as exc:
        raise UnchopError(f"edge {edge} is not exceptional: {exc}") from None


def _normalized_at(vs: Sequence[Point], i: int) -> Tuple[Point, ...]:
    a, b = _edge_directions(vs, i)
    T = UnimodularAffineMap(L.basis_change(a, b))
    V = vs[i]
    n = len(vs)
    return tuple(T(L.sub(vs[(i + k) % n], V)) for k in range(n))


def canonical_form(p: DelzantPolygon) -> Tuple[Point, ...]:
    """Complete invariant of ``p`` under GL(2, Z) and rational translations.

    Every vertex cone of a Delzant polygon is a lattice basis, so for each
    vertex there is exactly one orientation-preserving map sending it to the
    origin with edges along the positive axes.  The canonical form is the
    lexicographically least such image over all vertices of ``p`` and of its
    mirror image.
    """
    vs = p.vertices
    mirrored = tuple((y, x) for x, y in reversed(vs))
    return min(_normalized_at(q, i) for q in (vs, mirrored) for i in range(len(vs)))


def oriented_canonical_form(p: DelzantPolygon) -> Tuple[Point, ...]:
    """As :func:`canonical_form` but only modulo orientation-preserving maps."""
    return min(_normalized_at(p.vertices, i) for i in range(len(p)))


@dataclass(frozen=True)
class QuotientData:
    facet_normals: Tuple[Vector, ...]
    offsets: Tuple[Fraction, ...]
    kernel_basis: Tuple[Tuple[int, ...], ...]

    def contains(self, x: Sequence[RationalLike]) -> bool:
        x = as_point(x)
        return all(L.dot(x, nrm) >= c for nrm, c in zip(self.facet_normals, self.offsets))


def quotient_data(p: DelzantPolygon) -> QuotientData:
    """Inward facet normals, offsets and a Z-basis of the kernel of ``e_i -> normal_i``.

    Facet ``i`` is the edge ending at vertex ``i``, so vertex ``i`` is the
    intersection of facets ``i`` and ``i + 1``.
    """
    n = len(p)
    normals, offsets = [], []
    for i in range(n):
        P, Q = p.edge(i - 1)
        w, _ = L.rational_direction(L.sub(Q, P))
        nrm = (-w[1], w[0])
        normals.append(nrm)
        offsets.append(L.dot(P, nrm))
    # normals 0 and 1 meet at vertex 0, hence form a lattice basis
    n0, n1 = normals[0], normals[1]
    sign = L.det(n0, n1)
    kernel = []
    for i in range(2, n):
        ni = normals[i]
        c0 = sign * L.det(ni, n1)
        c1 = sign * L.det(n0, ni)
        vec = [0] * n
        vec[0], vec[1], vec[i] = -c0, -c1, 1
        kernel.append(tuple(vec))
    return QuotientData(tuple(normals), tuple(offsets), tuple(kernel))


def _fiber_length(p: DelzantPolygon, xi: Vector, alpha: Fraction) -> Fraction:
    """Rational length of ``{x in p : <x, xi> = alpha}`` (zero for a point)."""
    w = (xi[1], -xi[0])
    pts = []
    vs = p.vertices
    for j in range(len(vs)):
        P, Q = p.edge(j)
        hp, hq = L.dot(P, xi), L.dot(Q, xi)
        if hp == alpha:
            pts.append(P)
        if (hp - alpha) * (hq - alpha) < 0:
            t = (alpha - hp) / (hq - hp)
            pts.append(L.add(P, L.scale(t, L.sub(Q, P))))
    coords = [L.dot(x, w) for x in pts]
    # xi primitive, so w is primitive and coordinates along w measure rational length
    return (max(coords) - min(coords)) / L.dot(w, w)


def subcircle_pushforward(p: DelzantPolygon, xi: Sequence[int]) -> PiecewiseLinear:
    """Density of the pushforward of Lebesgue measure on ``p`` under ``x -> <x, xi>``."""
    xi = _check_primitive(xi)
    levels = sorted({L.dot(v, xi) for v in p.vertices})
    return PiecewiseLinear(tuple((a, _fiber_length(p, xi, a)) for a in levels))


def _check_primitive(xi: Sequence[int]) -> Vector:
    xi = (int(xi[0]), int(xi[1]))
    prim, g = L.primitive(xi)
    if g != 1:
        raise ValueError(f"{xi} is not primitive")
    return xi


def surface_self_intersection(p: DelzantPolygon, edge: int) -> int:
    """Self-intersection of the sphere over edge ``edge``: ``v = u - e w`` in fan calculus."""
    n = len(p)
    j = edge % n
    P, Q = p.edge(j)
    w, _ = L.rational_direction(L.sub(Q, P))
    _, u = p.edge_directions(j)
    v, _ = p.edge_directions((j + 1) % n)
    diff = L.sub(u, v)
    e = diff[0] // w[0] if w[0] else diff[1] // w[1]
    assert L.scale(e, w) == diff
    return e


def subcircle_graph(p: DelzantPolygon, xi: Sequence[int]):
    """Decorated graph of the circle subgroup of T^2 generated by ``xi``."""
    from .graph import DecoratedGraph, IsolatedVertex, SurfaceVertex, ZkEdge

    xi = _check_primitive(xi)
    n = len(p)
    vs = p.vertices
    on_surface = set()
    surfaces = []
    for j in range(n):
        P, Q = p.edge(j)
        w, size = L.rational_direction(L.sub(Q, P))
        if L.dot(w, xi) == 0:
            on_surface.update({j, (j + 1) % n})
            surfaces.append(SurfaceVertex(L.dot(P, xi), size, 0, surface_self_intersection(p, j)))
    isolated = {}
    for i in range(n):
        if i in on_surface:
            continue
        a, b = p.edge_directions(i)
        isolated[i] = IsolatedVertex(L.dot(vs[i], xi), (L.dot(a, xi), L.dot(b, xi)))
    edges = []
    for j in range(n):
        P, Q = p.edge(j)
        w, _ = L.rational_direction(L.sub(Q, P))
        k = abs(L.dot(w, xi))
        if k >= 2:
            edges.append((isolated[j], isolated[(j + 1) % n], k))
    return DecoratedGraph.build(list(isolated.values()), surfaces, edges, volume=p.area())
