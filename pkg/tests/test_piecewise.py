from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from delzant_lab.piecewise import PiecewiseLinear, pl_add, pl_integral, pl_scale

small = st.fractions(min_value=-5, max_value=5, max_denominator=8)


@st.composite
def pl_functions(draw):
    xs = sorted(set(draw(st.lists(small, min_size=2, max_size=6))))
    if len(xs) < 2:
        xs = [Fraction(0), Fraction(1)]
    ys = [Fraction(0)] + [draw(small) for _ in xs[1:-1]] + [Fraction(0)]
    return PiecewiseLinear(tuple(zip(xs, ys)))


def tent():
    return PiecewiseLinear.from_pieces([0, 1, 2], [(Fraction(1, 2), 0), (Fraction(-1, 2), 1)])


def test_tent_integral():
    assert pl_integral(tent()) == Fraction(1, 2)


def test_tent_values():
    f = tent()
    assert f(Fraction(1, 2)) == Fraction(1, 4)
    assert f(1) == Fraction(1, 2)
    assert f(3) == 0 and f(-1) == 0


def test_scale_by_zero():
    assert pl_scale(tent(), 0).is_zero


def test_add_negation():
    f = tent()
    assert pl_add(f, pl_scale(f, -1)).is_zero


def test_collinear_pieces_merge():
    f = PiecewiseLinear(((0, 0), (1, 1), (2, 2), (3, 0)))
    g = PiecewiseLinear(((0, 0), (2, 2), (3, 0)))
    assert f == g
    assert f.breakpoints == [0, 2, 3]


def test_discontinuous_pieces_rejected():
    with pytest.raises(ValueError):
        PiecewiseLinear.from_pieces([0, 1, 2], [(1, 0), (0, 5)])


def test_unsorted_breakpoints_rejected():
    with pytest.raises(ValueError):
        PiecewiseLinear(((1, 0), (0, 1)))


def test_jump_at_support_end():
    # a function that starts at a nonzero value, as at a fixed surface
    f = PiecewiseLinear(((0, 1), (1, 0)))
    assert f(0) == 1 and f(Fraction(-1, 10)) == 0
    assert f.integral() == Fraction(1, 2)


@given(pl_functions(), pl_functions())
def test_integral_additive(f, g):
    assert pl_integral(pl_add(f, g)) == pl_integral(f) + pl_integral(g)


@given(pl_functions(), pl_functions(), small)
def test_sum_pointwise(f, g, x):
    assert (f + g)(x) == f(x) + g(x)


@given(pl_functions(), small)
def test_scale_pointwise(f, c):
    assert pl_scale(f, c)(Fraction(1, 3)) == c * f(Fraction(1, 3))
    assert pl_integral(pl_scale(f, c)) == c * pl_integral(f)


@given(pl_functions(), pl_functions())
def test_addition_commutes(f, g):
    assert f + g == g + f


@given(pl_functions())
def test_canonical_form_is_stable(f):
    assert PiecewiseLinear(f.knots) == f
    assert f - f == PiecewiseLinear.zero()
