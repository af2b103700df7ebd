from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings, strategies as st

from delzant_lab import (
    Center,
    ChopError,
    DelzantPolygon,
    PolygonError,
    UnchopError,
    blowup_legal,
    canonical_form,
    corner_chop,
    corner_unchop,
    cp2_graph,
    dh,
    edge_sizes,
    graph_blow_up,
    is_delzant,
    quotient_data,
    standard_cp2,
    subcircle_graph,
    subcircle_pushforward,
    validate,
)
from delzant_lab.lattice import UnimodularAffineMap, dot
from delzant_lab.piecewise import PiecewiseLinear

from conftest import chopped_polygons, unimodular_maps

SQUARE = ((0, 0), (1, 0), (1, 1), (0, 1))
ONE_CHOP = ((F(1, 4), 0), (1, 0), (0, 1), (0, F(1, 4)))


def test_standard_triangle():
    assert standard_cp2(1).vertices == ((0, 0), (1, 0), (0, 1))
    assert standard_cp2(2).vertices == ((0, 0), (2, 0), (0, 2))
    assert is_delzant(standard_cp2(1).vertices)
    with pytest.raises(ValueError):
        standard_cp2(0)


def test_is_delzant_examples():
    assert is_delzant(SQUARE)
    assert is_delzant(ONE_CHOP)
    bad = is_delzant(((0, 0), (2, 0), (0, 1)))
    assert not bad
    # det((0,-1), (2,-1)) = 2 at the apex
    assert bad.vertex == 2


def test_clockwise_rejected():
    assert not is_delzant(((0, 0), (0, 1), (1, 0)))


@pytest.mark.parametrize(
    "verts",
    [((0, 0), (1, 0)), ((0, 0), (1, 0), (1, 0), (0, 1)), ((0, 0), (1, 0), (2, 0), (0, 1))],
)
def test_degenerate_input_is_an_error(verts):
    with pytest.raises(PolygonError):
        is_delzant(verts)


def test_edge_sizes_examples():
    assert edge_sizes(standard_cp2(1)) == [1, 1, 1]
    assert edge_sizes(DelzantPolygon(SQUARE)) == [1, 1, 1, 1]
    eps = F(1, 4)
    sizes = edge_sizes(corner_chop(standard_cp2(1), 0, eps))
    # cyclically 1 - eps, eps, 1 - eps, 1
    assert sizes == [eps, 1 - eps, 1, 1 - eps]


def test_chop_corner_of_triangle():
    p = corner_chop(standard_cp2(1), 0, F(1, 4))
    assert p.same_cycle(DelzantPolygon(ONE_CHOP))
    assert standard_cp2(1).area() - p.area() == F(1, 32)


def test_chop_errors():
    p = standard_cp2(1)
    with pytest.raises(ChopError, match="edge too short"):
        corner_chop(p, 0, 1)
    with pytest.raises(ChopError, match="nonpositive size"):
        corner_chop(p, 0, 0)
    # two half-size chops at the ends of one edge leave nothing between them
    q = corner_chop(p, 0, F(1, 2))
    with pytest.raises(ChopError):
        corner_chop(q, 2, F(1, 2))


def test_unchop_examples():
    p = corner_chop(standard_cp2(1), 0, F(1, 4))
    assert corner_unchop(p, 0) == standard_cp2(1)
    with pytest.raises(UnchopError, match="not exceptional"):
        corner_unchop(standard_cp2(1), 0)
    with pytest.raises(UnchopError):
        corner_unchop(DelzantPolygon(SQUARE), 1)


@given(chopped_polygons(), st.data())
def test_chop_invariants(p, data):
    v = data.draw(st.integers(0, len(p) - 1))
    sizes = edge_sizes(p)
    room = min(sizes[v], sizes[v - 1])
    eps = room * data.draw(st.fractions(min_value=F(1, 10), max_value=F(9, 10), max_denominator=10))
    q = corner_chop(p, v, eps)
    assert is_delzant(q.vertices)
    assert len(q) == len(p) + 1
    assert p.area() - q.area() == eps * eps / 2
    assert edge_sizes(q)[v] == eps
    assert corner_unchop(q, v) == p


@settings(max_examples=100)
@given(chopped_polygons(max_chops=5))
def test_unchop_then_chop(p):
    # every exceptional edge undoes to a polygon that chops back to p
    for j in range(len(p)):
        try:
            q = corner_unchop(p, j)
        except UnchopError:
            continue
        eps = edge_sizes(p)[j]
        target = j if j < len(p) - 1 else 0
        again = corner_chop(q, target, eps)
        assert again.same_cycle(p)


@given(chopped_polygons(), unimodular_maps())
def test_edge_sizes_and_delzant_invariant(p, T):
    q = p.transform(T)
    assert is_delzant(q.vertices)
    assert sorted(edge_sizes(q)) == sorted(edge_sizes(p))
    assert q.area() == p.area()


@settings(max_examples=100)
@given(chopped_polygons(), unimodular_maps())
def test_canonical_form_invariant(p, T):
    assert canonical_form(p.transform(T)) == canonical_form(p)


def test_canonical_form_examples():
    p = standard_cp2(1)
    T = UnimodularAffineMap(((1, 1), (0, 1)), (5, 7))
    assert canonical_form(p.transform(T)) == canonical_form(p)
    mirrored = DelzantPolygon(((0, 0), (1, 0), (0, 1)))  # (x,y) -> (y,x) and reordered
    assert canonical_form(mirrored) == canonical_form(p)
    assert canonical_form(standard_cp2(2)) != canonical_form(p)
    assert canonical_form(DelzantPolygon(SQUARE)) != canonical_form(corner_chop(p, 0, F(1, 4)))


def test_three_chops_equivalent_drawings():
    e = F(1, 4)
    # all three corners of the standard triangle, by hand
    standard = DelzantPolygon(((e, 0), (1 - e, 0), (1 - e, e), (e, 1 - e), (0, 1 - e), (0, e)))
    # all three corners of the mirrored triangle x <= 1, y <= 1, x + y >= 1
    mirror = DelzantPolygon(((1 - e, e), (1, e), (1, 1 - e), (1 - e, 1), (e, 1), (e, 1 - e)))
    p = standard_cp2(1)
    chopped = corner_chop(corner_chop(corner_chop(p, 0, e), 2, e), 4, e)
    other_order = corner_chop(corner_chop(corner_chop(p, 2, e), 1, e), 0, e)
    assert chopped.same_cycle(standard)
    forms = {canonical_form(x) for x in (standard, mirror, chopped, other_order)}
    assert len(forms) == 1


def test_quotient_data_triangle():
    q = quotient_data(standard_cp2(1))
    assert sorted(q.facet_normals) == sorted([(1, 0), (0, 1), (-1, -1)])
    assert q.kernel_basis == ((1, 1, 1),)


def test_quotient_data_square():
    q = quotient_data(DelzantPolygon(SQUARE))
    assert sorted(q.facet_normals) == sorted([(1, 0), (0, 1), (-1, 0), (0, -1)])
    assert len(q.kernel_basis) == 2


@given(chopped_polygons())
def test_quotient_data_properties(p):
    q = quotient_data(p)
    for k in q.kernel_basis:
        assert sum(c * n[0] for c, n in zip(k, q.facet_normals)) == 0
        assert sum(c * n[1] for c, n in zip(k, q.facet_normals)) == 0
    assert len(q.kernel_basis) == len(p) - 2
    assert all(q.contains(v) for v in p.vertices)
    # each vertex lies on exactly two facets
    for v in p.vertices:
        assert sum(dot(v, n) == c for n, c in zip(q.facet_normals, q.offsets)) == 2
    cx = sum(v[0] for v in p.vertices) / len(p)
    cy = sum(v[1] for v in p.vertices) / len(p)
    assert q.contains((cx, cy))
    assert not q.contains((cx + 100, cy + 100))


def test_pushforward_examples():
    p = standard_cp2(1)
    assert subcircle_pushforward(p, (1, 2)) == PiecewiseLinear(((0, 0), (1, F(1, 2)), (2, 0)))
    assert subcircle_pushforward(p, (1, 0)) == PiecewiseLinear(((0, 1), (1, 0)))
    with pytest.raises(ValueError):
        subcircle_pushforward(p, (2, 4))


@given(chopped_polygons(), st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_pushforward_mass(p, xi):
    from math import gcd
    assume(gcd(*xi) == 1)
    assert subcircle_pushforward(p, xi).integral() == p.area()


def test_subcircle_graph_examples():
    p = standard_cp2(1)
    g = subcircle_graph(p, (1, 2))
    assert [v.phi for v in g.isolated] == [0, 1, 2]
    assert [v.weights for v in g.isolated] == [(1, 2), (-1, 1), (-2, -1)]
    assert [(e.bottom, e.top, e.k) for e in g.edges] == [(0, 2, 2)]
    assert g == cp2_graph(1, 2)
    h = subcircle_graph(p, (0, 1))
    assert len(h.surfaces) == 1 and h.surfaces[0].phi == 0 and h.surfaces[0].size == 1
    assert h.surfaces[0].genus == 0
    assert [v.phi for v in h.isolated] == [1]
    assert h == cp2_graph(0, 1)


@settings(max_examples=60)
@given(chopped_polygons(max_chops=3), st.tuples(st.integers(-5, 5), st.integers(-5, 5)))
def test_subcircle_graph_valid_and_coprime(p, xi):
    from math import gcd
    assume(gcd(*xi) == 1)
    g = subcircle_graph(p, xi)
    assert validate(g) == []
    for v in g.isolated:
        assert gcd(*v.weights) == 1


@settings(max_examples=80)
@given(chopped_polygons(max_chops=2), st.tuples(st.integers(-4, 4), st.integers(-4, 4)), st.data())
def test_chop_commutes_with_graph_blow_up(p, xi, data):
    from math import gcd
    assume(gcd(*xi) == 1)
    phis = [dot(v, xi) for v in p.vertices]
    assume(len(set(phis)) == len(phis))
    i = data.draw(st.integers(0, len(p) - 1))
    sizes = edge_sizes(p)
    eps = min(sizes[i], sizes[i - 1]) * data.draw(
        st.fractions(min_value=F(1, 10), max_value=F(9, 10), max_denominator=10)
    )
    g = subcircle_graph(p, xi)
    center = Center("isolated", [v.phi for v in g.isolated].index(phis[i]))
    assume(blowup_legal(g, center, eps))
    assert subcircle_graph(corner_chop(p, i, eps), xi) == graph_blow_up(g, center, eps)
