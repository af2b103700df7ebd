from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from delzant_lab.lattice import (
    UnimodularAffineMap,
    as_rational,
    format_rational,
    primitive,
    rational_length,
)

from conftest import rationals, unimodular_maps

nonzero_vectors = st.tuples(st.integers(-40, 40), st.integers(-40, 40)).filter(lambda v: v != (0, 0))
points = st.tuples(rationals, rationals)


@pytest.mark.parametrize(
    "v, expected",
    [((2, 4), ((1, 2), 2)), ((0, -3), ((0, -1), 3)), ((-6, 4), ((-3, 2), 2)), ((5, 0), ((1, 0), 5))],
)
def test_primitive_examples(v, expected):
    assert primitive(v) == expected


def test_primitive_zero_vector():
    with pytest.raises(ValueError, match="zero vector has no primitive direction"):
        primitive((0, 0))


@given(nonzero_vectors, st.integers(1, 30))
def test_primitive_scaling_law(v, k):
    p, g = primitive(v)
    assert primitive((k * v[0], k * v[1])) == (p, k * g)
    assert (g * p[0], g * p[1]) == tuple(v)


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ((0, 0), (2, 4), 2),
        ((0, 0), (1, 0), 1),
        ((Fraction(1, 4), 0), (1, 0), Fraction(3, 4)),
        ((0, 0), (Fraction(1, 2), Fraction(1, 3)), Fraction(1, 6)),
    ],
)
def test_rational_length_examples(a, b, expected):
    assert rational_length(a, b) == expected


def test_rational_length_same_point():
    with pytest.raises(ValueError):
        rational_length((1, 1), (1, 1))


@given(points, points, unimodular_maps())
def test_rational_length_invariant(a, b, T):
    if a == b:
        return
    assert rational_length(T(a), T(b)) == rational_length(a, b)


@given(points, points)
def test_rational_length_defines_integral_vector(a, b):
    if a == b:
        return
    lam = rational_length(a, b)
    d = [(b[i] - a[i]) / lam for i in range(2)]
    assert all(x.denominator == 1 for x in d)
    assert abs(primitive((int(d[0]), int(d[1])))[1]) == 1


@given(rationals, rationals, rationals)
def test_exact_associativity(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert format_rational((a + b) + c) == format_rational(a + (b + c))


@given(unimodular_maps(), points)
def test_affine_inverse(T, x):
    assert T.inverse()(T(x)) == x
    assert abs(T.det) == 1


def test_non_unimodular_rejected():
    with pytest.raises(ValueError):
        UnimodularAffineMap(((2, 0), (0, 1)))


def test_floats_refused():
    with pytest.raises(TypeError):
        as_rational(0.25)


@pytest.mark.parametrize("q, s", [(Fraction(3, 4), "3/4"), (Fraction(-2), "-2"), (Fraction(0), "0")])
def test_format_rational(q, s):
    assert format_rational(q) == s
