from fractions import Fraction as F

import pytest

from delzant_lab import (
    SearchConfig,
    blowup_legal,
    canonical_form,
    cp2_graph,
    max_equal_circle_blowups,
    max_equal_toric_blowups,
    theorem_table,
    validate,
)
from delzant_lab.graph import Center
from delzant_lab.search import circle_starts, format_table, replay_circle, replay_toric, start_graph

EPS = [F(1), F(3, 4), F(1, 2), F(2, 5), F(1, 3), F(1, 4), F(1, 5)]


@pytest.fixture(scope="module")
def toric():
    return {e: max_equal_toric_blowups(e) for e in EPS}


@pytest.fixture(scope="module")
def circle():
    return {e: max_equal_circle_blowups(e) for e in EPS}


def test_toric_examples(toric):
    assert {e: c.k_max for e, c in toric.items()} == {
        F(1): 0, F(3, 4): 1, F(1, 2): 1, F(2, 5): 3, F(1, 3): 3, F(1, 4): 3, F(1, 5): 3,
    }


def test_circle_examples(circle):
    assert circle[F(1, 3)].k_max == 3
    assert circle[F(1, 4)].k_max == 4
    assert circle[F(1, 5)].k_max == 5
    assert circle[F(1)].k_max == 0


def test_circle_quarter_witness(circle):
    c = circle[F(1, 4)]
    assert c.start == {"m": 0, "n": 1, "reversed": False}
    assert [d for d, _ in c.witness] == ["isolated:0", "surface:0", "surface:0", "surface:0"]


@pytest.mark.parametrize("model", ["toric", "circle"])
def test_monotone_in_eps(model, toric, circle):
    res = toric if model == "toric" else circle
    ordered = sorted(EPS)
    ks = [res[e].k_max for e in ordered]
    assert ks == sorted(ks, reverse=True)


def test_toric_witness_replays(toric):
    for e, c in toric.items():
        polys = replay_toric(c)
        assert len(polys) == c.k_max + 1
        assert all(len(q) == 3 + i for i, q in enumerate(polys))


def test_circle_witness_replays(circle):
    for e, c in circle.items():
        if c.k_max == 0:
            assert c.witness == []
            continue
        gs = replay_circle(c.witness, start_graph(c.start))
        assert len(gs) == c.k_max + 1
        for g, (desc, eps) in zip(gs, c.witness):
            assert blowup_legal(g, Center.parse(desc), eps)
        assert validate(gs[-1]) == []
        assert gs[-1].volume == F(1, 2) - c.k_max * e * e / 2


def test_certificates_are_complete(toric, circle):
    for c in list(toric.values()) + list(circle.values()):
        assert c.frontier_count > 0
        assert c.exhausted
        assert len(c.witness) == c.k_max
        assert sum(c.level_counts) == c.frontier_count
        d = c.to_json()
        assert {"model", "epsilon", "k_max", "witness", "frontier_count"} <= set(d)


@pytest.mark.parametrize("eps", [F(1, 2), F(1, 3), F(1, 4)])
def test_dedup_does_not_lose_states(eps):
    for search in (max_equal_toric_blowups, max_equal_circle_blowups):
        on = search(eps, SearchConfig(eps, dedup=True))
        off = search(eps, SearchConfig(eps, dedup=False))
        assert on.k_max == off.k_max
        assert off.frontier_count >= on.frontier_count


def test_toric_dedup_merges_symmetric_chops():
    e = F(1, 3)
    c = max_equal_toric_blowups(e)
    # three symmetric first chops collapse to one canonical state
    assert c.level_counts[:2] == [1, 1]


@pytest.mark.parametrize("eps", [F(1, 2), F(1, 3), F(1, 4), F(1, 6), F(2, 7)])
def test_weight_bound_stability(eps):
    lo = max_equal_circle_blowups(eps, SearchConfig(eps, weight_bound=5))
    hi = max_equal_circle_blowups(eps, SearchConfig(eps, weight_bound=8))
    assert lo.k_max == hi.k_max


def test_starts_cover_normal_forms():
    starts = circle_starts(3)
    assert {(d["m"], d["n"]) for d, _ in starts} == {(0, 1), (1, 2), (1, 3), (2, 3)}
    assert len(starts) == 8
    assert all(validate(g) == [] for _, g in starts)


def test_depth_cap_reported():
    c = max_equal_circle_blowups(F(1, 4), SearchConfig(F(1, 4), max_depth=2))
    assert c.depth_cap == 2 and c.k_max == 2 and not c.exhausted
    with pytest.raises(ValueError):
        SearchConfig(F(1, 4), max_depth=0)


def test_theorem_table_rows():
    rows = {r.eps: r for r in theorem_table([F(1, 3), F(1, 5), F(1), F(2, 5)], weight_bound=5)}
    assert (rows[F(1, 3)].toric.k_max, rows[F(1, 3)].circle.k_max) == (3, 3)
    assert (rows[F(1, 5)].toric.k_max, rows[F(1, 5)].circle.k_max) == (3, 5)
    assert (rows[F(1)].toric.k_max, rows[F(1)].circle.k_max) == (0, 0)
    assert rows[F(1, 3)].passed and rows[F(1, 5)].passed and rows[F(1)].passed
    assert rows[F(2, 5)].to_json()["status"] == "unchecked"
    assert rows[F(2, 5)].to_json()["warning"]
    text = format_table(list(rows.values()))
    assert "1/5" in text and "unchecked" in text


def test_toric_states_are_canonical():
    c = max_equal_toric_blowups(F(1, 4), SearchConfig(F(1, 4), dedup=False))
    polys = replay_toric(c)
    assert len({canonical_form(p) for p in polys}) == len(polys)


@pytest.mark.parametrize("eps, k", [(F(49, 100), 3), (F(1, 2), 1), (F(51, 100), 1), (F(99, 100), 1)])
def test_two_equal_circle_blowups_need_eps_below_half(eps, k):
    # two blow-ups of sizes a, b in CP^2 need a + b < 1, so one is the most for eps >= 1/2
    assert max_equal_circle_blowups(eps, SearchConfig(eps, weight_bound=5)).k_max == k
