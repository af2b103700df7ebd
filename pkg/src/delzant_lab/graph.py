"""Decorated graphs of Hamiltonian circle actions on compact symplectic four-manifolds.

A graph records the isolated fixed points (moment value and isotropy
weights), the fixed surfaces (moment value, size, genus, self-intersection)
and the Z_k-spheres (edges labelled ``k >= 2``).  Everything here is exact.

Vertices are kept sorted so that two graphs describing the same data
compare equal; edges refer to isolated vertices by index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .lattice import RationalLike, as_rational
from .piecewise import PiecewiseLinear


class GraphError(ValueError):
    pass


class BlowUpError(GraphError):
    def __init__(self, message: str, condition: Optional[int] = None):
        super().__init__(message)
        self.condition = condition


class BlowDownError(GraphError):
    pass


class ExtendError(GraphError):
    pass


@dataclass(frozen=True, order=True)
class IsolatedVertex:
    phi: Fraction
    weights: Tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "phi", as_rational(self.phi))
        object.__setattr__(self, "weights", tuple(sorted(int(w) for w in self.weights)))

    @property
    def product(self) -> int:
        return self.weights[0] * self.weights[1]


@dataclass(frozen=True, order=True)
class SurfaceVertex:
    phi: Fraction
    size: Fraction
    genus: int = 0
    self_intersection: int = 0

    def __post_init__(self):
        object.__setattr__(self, "phi", as_rational(self.phi))
        object.__setattr__(self, "size", as_rational(self.size))


@dataclass(frozen=True, order=True)
class ZkEdge:
    """Z_k-sphere between isolated vertices ``bottom`` and ``top`` (indices)."""

    bottom: int
    top: int
    k: int
    size: Fraction

    def __post_init__(self):
        object.__setattr__(self, "size", as_rational(self.size))


@dataclass(frozen=True, order=True)
class Center:
    """A fixed point to blow up: an isolated vertex, or a free point on a surface."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("isolated", "surface"):
            raise ValueError(f"unknown center kind {self.kind!r}")

    def __str__(self) -> str:
        return f"{self.kind}:{self.index}"

    @classmethod
    def parse(cls, text: str) -> "Center":
        kind, _, idx = text.partition(":")
        return cls(kind.strip(), int(idx))


@dataclass(frozen=True)
class Locus:
    """An exceptional sphere in a graph, as produced by a blow-up.

    ``pair``: isolated vertices ``indices = (bottom, top)`` joined by the sphere;
    ``surface``: an extremal fixed sphere ``indices = (s,)``;
    ``vertex``: isolated vertex next to surface ``s``, ``indices = (i, s)``.
    """

    kind: str
    indices: Tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.kind}:" + ",".join(map(str, self.indices))

    @classmethod
    def parse(cls, text: str) -> "Locus":
        kind, _, rest = text.partition(":")
        kind = kind.strip()
        if kind not in ("pair", "surface", "vertex"):
            raise ValueError(f"unknown locus kind {kind!r}")
        return cls(kind, tuple(int(x) for x in rest.split(",") if x.strip()))


Endpoint = Union[int, IsolatedVertex]


@dataclass(frozen=True)
class DecoratedGraph:
    isolated: Tuple[IsolatedVertex, ...] = ()
    surfaces: Tuple[SurfaceVertex, ...] = ()
    edges: Tuple[ZkEdge, ...] = ()
    volume: Optional[Fraction] = field(default=None, compare=True)

    @classmethod
    def build(
        cls,
        isolated: Sequence[IsolatedVertex],
        surfaces: Sequence[SurfaceVertex] = (),
        edges: Iterable[Tuple[Endpoint, Endpoint, int]] = (),
        volume: Optional[RationalLike] = None,
        sizes: Optional[Sequence[Optional[RationalLike]]] = None,
    ) -> "DecoratedGraph":
        """Assemble a graph in canonical vertex order.

        Edge endpoints are indices into ``isolated`` or the vertex objects
        themselves (compared by identity).  Each edge is oriented upward; its
        size defaults to the moment gap divided by ``k``.
        """
        g, _ = _assemble(isolated, surfaces, edges, volume, sizes)
        return g

    # --- basic queries -------------------------------------------------

    def phis(self) -> List[Fraction]:
        return [v.phi for v in self.isolated] + [s.phi for s in self.surfaces]

    @property
    def phi_min(self) -> Fraction:
        return min(self.phis())

    @property
    def phi_max(self) -> Fraction:
        return max(self.phis())

    def centers(self) -> List[Center]:
        return [Center("isolated", i) for i in range(len(self.isolated))] + [
            Center("surface", j) for j in range(len(self.surfaces))
        ]

    def incident(self, i: int) -> List[ZkEdge]:
        return [e for e in self.edges if i in (e.bottom, e.top)]

    def is_extremal(self, i: int) -> bool:
        a, b = self.isolated[i].weights
        return (a > 0) == (b > 0)

    def reversed(self) -> "DecoratedGraph":
        """The same manifold with the opposite circle action (moment map negated)."""
        iso = [IsolatedVertex(-v.phi, (-v.weights[0], -v.weights[1])) for v in self.isolated]
        surf = [SurfaceVertex(-s.phi, s.size, s.genus, s.self_intersection) for s in self.surfaces]
        edges = [(e.top, e.bottom, e.k) for e in self.edges]
        return DecoratedGraph.build(iso, surf, edges, self.volume, [e.size for e in self.edges])

    def shifted(self, c: RationalLike) -> "DecoratedGraph":
        c = as_rational(c)
        iso = [IsolatedVertex(v.phi + c, v.weights) for v in self.isolated]
        surf = [SurfaceVertex(s.phi + c, s.size, s.genus, s.self_intersection) for s in self.surfaces]
        edges = [(e.bottom, e.top, e.k) for e in self.edges]
        return DecoratedGraph.build(iso, surf, edges, self.volume, [e.size for e in self.edges])

    def vertex_count(self) -> int:
        return len(self.isolated) + len(self.surfaces)


def _assemble(isolated, surfaces, edges, volume, sizes):
    isolated = list(isolated)
    surfaces = list(surfaces)
    ident = {id(v): i for i, v in enumerate(isolated)}

    def idx(e):
        return e if isinstance(e, int) else ident[id(e)]

    raw = []
    for n, (a, b, k) in enumerate(edges):
        ia, ib = idx(a), idx(b)
        if isolated[ia].phi > isolated[ib].phi:
            ia, ib = ib, ia
        size = None if sizes is None else sizes[n]
        raw.append((ia, ib, int(k), size))

    def key(i):
        v = isolated[i]
        sig = []
        for ia, ib, k, _ in raw:
            if ia == i:
                sig.append((k, 1, isolated[ib].phi))
            elif ib == i:
                sig.append((k, -1, isolated[ia].phi))
        return (v.phi, v.weights, tuple(sorted(sig)))

    order = sorted(range(len(isolated)), key=key)
    perm = {old: new for new, old in enumerate(order)}
    new_edges = []
    for ia, ib, k, size in raw:
        gap = isolated[ib].phi - isolated[ia].phi
        s = Fraction(gap, k) if size is None else as_rational(size)
        new_edges.append(ZkEdge(perm[ia], perm[ib], k, s))
    g = DecoratedGraph(
        tuple(isolated[i] for i in order),
        tuple(sorted(surfaces)),
        tuple(sorted(new_edges)),
        None if volume is None else as_rational(volume),
    )
    if g.volume is None:
        try:
            object.__setattr__(g, "volume", dh(g).integral())
        except (GraphError, ZeroDivisionError):
            pass
    surf_perm = _surface_perm(surfaces, g.surfaces)
    return g, (perm, surf_perm)


def _surface_perm(before, after) -> Dict[int, int]:
    used = set()
    out = {}
    for i, s in enumerate(before):
        for j, t in enumerate(after):
            if j not in used and t == s:
                out[i] = j
                used.add(j)
                break
    return out


# --- standard models ----------------------------------------------------


def cp2_graph(m: int, n: int) -> DecoratedGraph:
    """Graph of ``lambda.[z0:z1:z2] = [z0 : lambda^m z1 : lambda^n z2]`` on CP^2 of size 1."""
    if not (0 <= m <= n) or n == 0:
        raise GraphError(f"need 0 <= m <= n and n > 0, got ({m}, {n})")
    if gcd(m, n) != 1:
        raise GraphError(f"weights ({m}, {n}) are not coprime")
    if m == n:
        raise GraphError("(1, 1) is the action (0, 1) up to reparametrisation; use cp2_graph(0, 1)")
    if m == 0:
        # n == 1: fixed line at the bottom, isolated point at the top
        return DecoratedGraph.build(
            [IsolatedVertex(1, (-1, -1))], [SurfaceVertex(0, 1, 0, 1)], [], Fraction(1, 2)
        )
    lo = IsolatedVertex(0, (m, n))
    mid = IsolatedVertex(m, (-m, n - m))
    hi = IsolatedVertex(n, (-n, -(n - m)))
    edges = [(lo, mid, m), (mid, hi, n - m), (lo, hi, n)]
    edges = [e for e in edges if e[2] >= 2]
    return DecoratedGraph.build([lo, mid, hi], [], edges, Fraction(1, 2))


# --- Duistermaat-Heckman --------------------------------------------------


def _extremes(g: DecoratedGraph):
    if not g.isolated and not g.surfaces:
        raise GraphError("empty graph")
    lo, hi = g.phi_min, g.phi_max
    bottom = [("surface", j) for j, s in enumerate(g.surfaces) if s.phi == lo]
    bottom += [("isolated", i) for i, v in enumerate(g.isolated) if v.phi == lo]
    top = [("surface", j) for j, s in enumerate(g.surfaces) if s.phi == hi]
    top += [("isolated", i) for i, v in enumerate(g.isolated) if v.phi == hi]
    return lo, hi, bottom, top


def _dh_profile(g: DecoratedGraph):
    """Knots of DH computed upward from the minimum, plus its left slope at the maximum."""
    lo, hi, bottom, top = _extremes(g)
    if lo == hi:
        raise GraphError("moment map is constant")
    if len(bottom) != 1:
        raise GraphError("minimum is not a single fixed component")
    kind, j = bottom[0]
    if kind == "surface":
        F = g.surfaces[j]
        value, slope = F.size, Fraction(-F.self_intersection)
    else:
        value, slope = Fraction(0), Fraction(1, g.isolated[j].product)
    kinks: Dict[Fraction, Fraction] = {}
    for v in g.isolated:
        if lo < v.phi < hi:
            kinks[v.phi] = kinks.get(v.phi, Fraction(0)) + Fraction(1, v.product)
    knots = [(lo, value)]
    x = lo
    for phi in sorted(kinks):
        value += slope * (phi - x)
        knots.append((phi, value))
        slope += kinks[phi]
        x = phi
    value += slope * (hi - x)
    knots.append((hi, value))
    return knots, slope, top


def dh(g: DecoratedGraph) -> PiecewiseLinear:
    """Exact Duistermaat-Heckman function of a valid graph.

    Starting from the minimum (value 0 and slope ``1/(mn)`` at an isolated
    minimum, or value ``size`` and slope ``-self_intersection`` at a fixed
    surface), every interior isolated fixed point ``q`` adds a hinge
    ``S(alpha - phi(q)) / (m_q n_q)``.
    """
    knots, _, _ = _dh_profile(g)
    return PiecewiseLinear(tuple(knots))


def volume(g: DecoratedGraph) -> Fraction:
    if g.volume is not None:
        return g.volume
    return dh(g).integral()


# --- validation ------------------------------------------------------------


def validate(g: DecoratedGraph) -> List[str]:
    """All violated graph axioms, as ``"<rule>: <detail>"`` strings (empty if valid)."""
    out: List[str] = []
    if not g.isolated and not g.surfaces:
        return ["empty graph: no fixed points"]
    lo, hi, bottom, top = _extremes(g)
    if lo == hi:
        out.append("extrema: minimum and maximum coincide")
    if len(bottom) != 1:
        out.append(f"unique minimum: {len(bottom)} fixed components at the minimum")
    if len(top) != 1:
        out.append(f"unique maximum: {len(top)} fixed components at the maximum")

    for j, s in enumerate(g.surfaces):
        if s.size <= 0:
            out.append(f"surface size: surface {j} has size {s.size}")
        if s.genus < 0:
            out.append(f"surface genus: surface {j} has genus {s.genus}")
        if s.phi not in (lo, hi):
            out.append(f"surface position: surface {j} is not at an extremum")

    for i, v in enumerate(g.isolated):
        a, b = v.weights
        if a == 0 or b == 0:
            out.append(f"isolated weights: vertex {i} has a zero weight")
            continue
        if gcd(a, b) != 1:
            out.append(f"effectiveness: weights {v.weights} at vertex {i} are not coprime")
        if v.phi == lo and lo != hi:
            ok = a > 0 and b > 0
        elif v.phi == hi and lo != hi:
            ok = a < 0 and b < 0
        else:
            ok = (a > 0) != (b > 0)
        if not ok:
            out.append(f"sign pattern: weights {v.weights} at vertex {i} (phi={v.phi})")

    n = len(g.isolated)
    for e in g.edges:
        if not (0 <= e.bottom < n and 0 <= e.top < n) or e.bottom == e.top:
            out.append(f"edge endpoints: edge {e} does not join two isolated vertices")
            continue
        p, q = g.isolated[e.bottom], g.isolated[e.top]
        if e.k < 2:
            out.append(f"edge label: edge {e} has k={e.k} < 2")
            continue
        gap = q.phi - p.phi
        if gap <= 0 or e.size != gap / e.k:
            out.append(f"edge size relation: |phi(p) - phi(q)|/k = {gap / e.k} but size is {e.size}")
        if e.k not in p.weights or -e.k not in q.weights:
            out.append(f"edge weights: endpoints of Z_{e.k} edge lack weights +{e.k} / -{e.k}")
        else:
            a = _other(p.weights, e.k)
            b = _other(q.weights, -e.k)
            if (a - b) % e.k:
                out.append(f"edge weight congruence: {a} != {b} mod {e.k}")

    for i, v in enumerate(g.isolated):
        for w in v.weights:
            if abs(w) < 2:
                continue
            matching = [
                e for e in g.edges if e.k == abs(w) and (e.bottom == i if w > 0 else e.top == i)
            ]
            if len(matching) != 1:
                out.append(f"Z_k edges: weight {w} at vertex {i} has {len(matching)} matching edges")

    if not g.surfaces and all(0 not in v.weights for v in g.isolated):
        s0, s1 = gls_sums(g)
        if s0:
            out.append(f"weight sum rule: sum of 1/(m n) over fixed points is {s0}, not 0")
        if s1:
            out.append(f"moment sum rule: sum of phi/(m n) over fixed points is {s1}, not 0")

    if out:
        return out

    knots, slope, _ = _dh_profile(g)
    kind, j = top[0]
    if kind == "surface":
        G = g.surfaces[j]
        want_value, want_slope = G.size, Fraction(G.self_intersection)
    else:
        want_value, want_slope = Fraction(0), Fraction(-1, g.isolated[j].product)
    if slope != want_slope:
        out.append(f"weight sum rule: DH slope at the maximum is {slope}, expected {want_slope}")
    if knots[-1][1] != want_value:
        out.append(f"moment sum rule: DH at the maximum is {knots[-1][1]}, expected {want_value}")
    if any(y <= 0 for x, y in knots[1:-1]):
        out.append("DH positivity: DH vanishes inside the moment image")
    if not out and g.volume is not None:
        integral = PiecewiseLinear(tuple(knots)).integral()
        if integral != g.volume:
            out.append(f"volume: recorded {g.volume} but DH integrates to {integral}")
    return out


def _other(weights: Tuple[int, int], w: int) -> int:
    a, b = weights
    return b if a == w else a


def gls_sums(g: DecoratedGraph) -> Tuple[Fraction, Fraction]:
    """``(sum 1/(m n), sum phi/(m n))`` over isolated fixed points."""
    s0 = sum((Fraction(1, v.product) for v in g.isolated), Fraction(0))
    s1 = sum((v.phi / v.product for v in g.isolated), Fraction(0))
    return s0, s1


# --- blow-ups ---------------------------------------------------------------


@dataclass(frozen=True)
class Legality:
    ok: bool
    condition: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _as_center(center) -> Center:
    if isinstance(center, Center):
        return center
    if isinstance(center, str):
        return Center.parse(center)
    kind, index = center
    return Center(kind, int(index))


def blowup_legal(g: DecoratedGraph, center, eps: RationalLike) -> Legality:
    """Check the four conditions for an equivariant blow-up of size ``eps`` at ``center``.

    Conditions: (1) every Z_k-sphere through the center is larger than eps;
    (2) a fixed surface containing it is larger than eps; (3) the moment map
    exceeds ``phi +- eps`` on each side where the center has weights;
    (4) an isolated extremal center is more than eps away from every other
    fixed component.  All inequalities are strict.
    """
    c = _as_center(center)
    eps = as_rational(eps)
    if eps <= 0:
        raise GraphError("blow-up size must be positive")
    lo, hi = g.phi_min, g.phi_max
    if c.kind == "isolated":
        if not 0 <= c.index < len(g.isolated):
            raise GraphError(f"unknown center {c}")
        p = g.isolated[c.index]
        for e in g.incident(c.index):
            if not e.size > eps:
                return Legality(False, 1, f"Z_{e.k}-sphere through {c} has size {e.size} <= {eps}")
        up = any(w > 0 for w in p.weights)
        down = any(w < 0 for w in p.weights)
        phi = p.phi
    else:
        if not 0 <= c.index < len(g.surfaces):
            raise GraphError(f"unknown center {c}")
        F = g.surfaces[c.index]
        if not F.size > eps:
            return Legality(False, 2, f"fixed surface {c.index} has size {F.size} <= {eps}")
        up, down = F.phi == lo, F.phi == hi
        phi = F.phi
    if up and not phi + eps < hi:
        return Legality(False, 3, f"phi + eps = {phi + eps} is not below the maximum {hi}")
    if down and not phi - eps > lo:
        return Legality(False, 3, f"phi - eps = {phi - eps} is not above the minimum {lo}")
    if c.kind == "isolated" and g.is_extremal(c.index):
        others = [v.phi for i, v in enumerate(g.isolated) if i != c.index]
        others += [s.phi for s in g.surfaces]
        for q in others:
            if not abs(phi - q) > eps:
                return Legality(False, 4, f"fixed point at phi={q} within {eps} of extremal center")
    return Legality(True)


def graph_blow_up(g: DecoratedGraph, center, eps: RationalLike) -> DecoratedGraph:
    return graph_blow_up_traced(g, center, eps)[0]


def graph_blow_up_traced(g: DecoratedGraph, center, eps: RationalLike):
    """Blow up and also return the :class:`Locus` of the exceptional divisor
    and the map from old isolated-vertex indices to new ones."""
    c = _as_center(center)
    eps = as_rational(eps)
    legal = blowup_legal(g, c, eps)
    if not legal:
        raise BlowUpError(f"condition ({legal.condition}) fails: {legal.reason}", legal.condition)
    iso = list(g.isolated)
    surf = list(g.surfaces)
    edges = [(e.bottom, e.top, e.k) for e in g.edges]
    vol = None if g.volume is None else g.volume - eps * eps / 2
    new_iso: List[int] = []
    new_surf: List[int] = []

    if c.kind == "isolated":
        p = iso[c.index]
        m, n = p.weights
        if m == n:
            # weights (1, 1) or (-1, -1): the exceptional divisor is fixed
            surf.append(SurfaceVertex(p.phi + m * eps, eps, 0, -1))
            new_surf.append(len(surf) - 1)
            iso[c.index] = None
        else:
            A = IsolatedVertex(p.phi + m * eps, (m, n - m))
            B = IsolatedVertex(p.phi + n * eps, (n, m - n))
            iso[c.index] = A
            iso.append(B)
            ib = len(iso) - 1
            new_iso = [c.index, ib]
            moved = []
            for a, b, k in edges:
                if c.index in (a, b):
                    w = k if a == c.index else -k
                    target = c.index if w == m else ib
                    a, b = (target, b) if a == c.index else (a, target)
                moved.append((a, b, k))
            edges = moved
            if abs(m - n) >= 2:
                edges.append((c.index, ib, abs(m - n)))
    else:
        F = surf[c.index]
        step = eps if F.phi == g.phi_min else -eps
        surf[c.index] = SurfaceVertex(F.phi, F.size - eps, F.genus, F.self_intersection - 1)
        iso.append(IsolatedVertex(F.phi + step, (1, -1)))
        new_iso = [len(iso) - 1]

    # drop a removed vertex, keeping edge indices consistent
    keep = [i for i, v in enumerate(iso) if v is not None]
    reindex = {old: new for new, old in enumerate(keep)}
    iso_kept = [iso[i] for i in keep]
    edges = [(reindex[a], reindex[b], k) for a, b, k in edges]
    out, (perm, surf_perm) = _assemble(iso_kept, surf, edges, vol, None)

    if c.kind == "isolated" and new_surf:
        locus = Locus("surface", (surf_perm[new_surf[0]],))
    elif c.kind == "isolated":
        a, b = (perm[reindex[i]] for i in new_iso)
        if out.isolated[a].phi > out.isolated[b].phi:
            a, b = b, a
        locus = Locus("pair", (a, b))
    else:
        locus = Locus("vertex", (perm[reindex[new_iso[0]]], surf_perm[c.index]))

    old_to_new = {}
    for old in range(len(g.isolated)):
        if c.kind == "isolated" and old == c.index:
            continue
        old_to_new[old] = perm[reindex[old]]
    problems = validate(out)
    if problems:
        raise BlowUpError("blow-up produced an invalid graph: " + "; ".join(problems))
    return out, locus, old_to_new


def exceptional_loci(g: DecoratedGraph) -> List[Locus]:
    """Every locus in ``g`` matching one of the patterns left behind by a blow-up."""
    out = []
    n = len(g.isolated)
    for a in range(n):
        for b in range(n):
            if a != b and _pair_data(g, a, b) is not None:
                out.append(Locus("pair", (a, b)))
    for s in range(len(g.surfaces)):
        if _surface_data(g, s) is not None:
            out.append(Locus("surface", (s,)))
    for i in range(n):
        for s in range(len(g.surfaces)):
            if _vertex_data(g, i, s) is not None:
                out.append(Locus("vertex", (i, s)))
    return out


def _pair_data(g: DecoratedGraph, a: int, b: int):
    A, B = g.isolated[a], g.isolated[b]
    if not A.phi < B.phi:
        return None
    for k in A.weights:
        if k <= 0 or -k not in B.weights:
            continue
        wa, wb = _other(A.weights, k), _other(B.weights, -k)
        # self-intersection -1 means the far weights differ by exactly k
        if wb - wa != k or wa == 0:
            continue
        eps = (B.phi - A.phi) / k
        between = [e for e in g.edges if (e.bottom, e.top) == (a, b) and e.k == k]
        if k >= 2 and (len(between) != 1 or between[0].size != eps):
            continue
        return k, wa, wb, eps
    return None


def _surface_data(g: DecoratedGraph, s: int):
    F = g.surfaces[s]
    if F.genus != 0 or F.self_intersection != -1:
        return None
    if F.phi == g.phi_max:
        return F.phi + F.size, (-1, -1)
    if F.phi == g.phi_min:
        return F.phi - F.size, (1, 1)
    return None


def _vertex_data(g: DecoratedGraph, i: int, s: int):
    v, F = g.isolated[i], g.surfaces[s]
    if v.weights != (-1, 1) or g.incident(i):
        return None
    if F.phi == g.phi_min and v.phi > F.phi:
        return v.phi - F.phi
    if F.phi == g.phi_max and v.phi < F.phi:
        return F.phi - v.phi
    return None


def graph_blow_down(g: DecoratedGraph, locus) -> DecoratedGraph:
    """Collapse an exceptional sphere; inverse of :func:`graph_blow_up`."""
    if isinstance(locus, str):
        locus = Locus.parse(locus)
    iso = list(g.isolated)
    surf = list(g.surfaces)
    edges = [(e.bottom, e.top, e.k) for e in g.edges]
    try:
        if locus.kind == "pair":
            a, b = locus.indices
            data = _pair_data(g, a, b)
            if data is None:
                raise BlowDownError(f"locus {locus} is not exceptional")
            k, wa, wb, eps = data
            p = IsolatedVertex(iso[a].phi - wa * eps, (wa, wb))
            kept = []
            for x, y, kk in edges:
                if {x, y} == {a, b} and kk == k:
                    continue
                x = a if x == b else x
                y = a if y == b else y
                kept.append((x, y, kk))
            iso[a] = p
            iso[b] = None
            edges = kept
        elif locus.kind == "surface":
            (s,) = locus.indices
            data = _surface_data(g, s)
            if data is None:
                raise BlowDownError(f"locus {locus} is not exceptional")
            phi, weights = data
            eps = surf[s].size
            iso.append(IsolatedVertex(phi, weights))
            surf.pop(s)
        elif locus.kind == "vertex":
            i, s = locus.indices if len(locus.indices) == 2 else (locus.indices[0], None)
            if s is None:
                cands = [t for t in range(len(surf)) if _vertex_data(g, i, t) is not None]
                if len(cands) != 1:
                    raise BlowDownError(f"locus {locus} is ambiguous or not exceptional")
                s = cands[0]
            eps = _vertex_data(g, i, s)
            if eps is None:
                raise BlowDownError(f"locus {locus} is not exceptional")
            F = surf[s]
            surf[s] = SurfaceVertex(F.phi, F.size + eps, F.genus, F.self_intersection + 1)
            iso[i] = None
        else:
            raise BlowDownError(f"unknown locus kind {locus.kind!r}")
    except (IndexError, ValueError) as exc:
        if isinstance(exc, BlowDownError):
            raise
        raise BlowDownError(f"locus {locus} is not exceptional: {exc}") from None

    keep = [i for i, v in enumerate(iso) if v is not None]
    reindex = {old: new for new, old in enumerate(keep)}
    edges = [(reindex[x], reindex[y], k) for x, y, k in edges]
    vol = None if g.volume is None else g.volume + eps * eps / 2
    out, _ = _assemble([iso[i] for i in keep], surf, edges, vol, None)
    problems = validate(out)
    if problems:
        raise BlowDownError(f"locus {locus} is not exceptional: " + "; ".join(problems))
    return out


# --- extended graphs ---------------------------------------------------------


@dataclass(frozen=True)
class ExtendedGraph:
    graph: DecoratedGraph
    free_edges: Tuple[Tuple[Center, Center], ...]

    def up_down(self, i: int) -> Tuple[int, int]:
        """Number of edges (labelled or free) going up and down from isolated vertex ``i``."""
        g = self.graph
        up = sum(1 for e in g.edges if e.bottom == i) + sum(
            1 for a, _ in self.free_edges if a == Center("isolated", i)
        )
        down = sum(1 for e in g.edges if e.top == i) + sum(
            1 for _, b in self.free_edges if b == Center("isolated", i)
        )
        return up, down


def extend(g: DecoratedGraph) -> ExtendedGraph:
    """Add label-1 gradient spheres so every fixed point has its full set of edges.

    Interior points send their unit-weight spheres to the maximum (upward)
    or the minimum (downward); leftover unit weights at an isolated minimum
    and maximum are joined to each other.  Free edges are ``(lower, upper)``.
    """
    problems = validate(g)
    if problems:
        raise ExtendError("invalid graph: " + "; ".join(problems))
    lo, hi, bottom, top = _extremes(g)
    bot, tp = Center(*bottom[0]), Center(*top[0])

    def capacity(c: Center, sign: int) -> Optional[int]:
        if c.kind == "surface":
            return None  # surfaces absorb any number
        return sum(1 for w in g.isolated[c.index].weights if w == sign)

    cap_bot, cap_top = capacity(bot, 1), capacity(tp, -1)
    free: List[Tuple[Center, Center]] = []

    def take(cap, where):
        if cap is not None and cap <= 0:
            raise ExtendError(f"no free capacity left at the {where}")
        return None if cap is None else cap - 1

    for i, v in enumerate(g.isolated):
        if v.phi in (lo, hi):
            continue
        me = Center("isolated", i)
        for w in v.weights:
            if w == 1:
                cap_top = take(cap_top, "maximum")
                free.append((me, tp))
            elif w == -1:
                cap_bot = take(cap_bot, "minimum")
                free.append((bot, me))
    if bot.kind == "isolated" and tp.kind == "isolated":
        if cap_bot != cap_top:
            raise ExtendError("unit weights at the minimum and maximum cannot be paired")
        free.extend([(bot, tp)] * cap_bot)
    elif bot.kind == "isolated":
        free.extend([(bot, tp)] * cap_bot)
    elif tp.kind == "isolated":
        free.extend([(bot, tp)] * cap_top)
    return ExtendedGraph(g, tuple(free))
