from fractions import Fraction

from hypothesis import strategies as st

from delzant_lab import corner_chop, edge_sizes, standard_cp2
from delzant_lab.lattice import UnimodularAffineMap

GENERATORS = [
    ((0, -1), (1, 0)),
    ((1, 1), (0, 1)),
    ((1, -1), (0, 1)),
    ((1, 0), (1, 1)),
    ((0, 1), (1, 0)),  # reflection
]

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
positive = st.fractions(min_value=Fraction(1, 50), max_value=5, max_denominator=12)


@st.composite
def unimodular_maps(draw, orientation=None):
    gens = GENERATORS if orientation != "preserving" else GENERATORS[:4]
    T = UnimodularAffineMap(((1, 0), (0, 1)), (draw(rationals), draw(rationals)))
    for g in draw(st.lists(st.sampled_from(gens), max_size=6)):
        T = T.compose(UnimodularAffineMap(g))
    return T


@st.composite
def chopped_polygons(draw, max_chops=4):
    """Random Delzant polygon reached from a triangle by legal corner chops."""
    p = standard_cp2(draw(st.sampled_from([1, 2, 3, Fraction(5, 2)])))
    for _ in range(draw(st.integers(0, max_chops))):
        v = draw(st.integers(0, len(p) - 1))
        sizes = edge_sizes(p)
        room = min(sizes[v], sizes[v - 1])
        t = draw(st.fractions(min_value=Fraction(1, 10), max_value=Fraction(9, 10), max_denominator=10))
        p = corner_chop(p, v, room * t)
    return p


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
