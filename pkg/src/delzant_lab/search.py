"""Exhaustive search for the largest number of equal-size equivariant blow-ups of CP^2.

Both searches are breadth-first over legal moves of size ``eps``.  States
are deduplicated by a canonical key (the lattice canonical form for
polygons, the sorted graph itself for circle actions), each reached state
remembers one parent move so that the deepest level yields a replayable
witness, and the number of distinct states examined is reported.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .delzant import ChopError, DelzantPolygon, canonical_form, corner_chop, standard_cp2
from .graph import (
    BlowUpError,
    Center,
    DecoratedGraph,
    blowup_legal,
    cp2_graph,
    graph_blow_up,
)
from .lattice import RationalLike, as_rational, format_rational

log = logging.getLogger(__name__)

DEFAULT_WEIGHT_BOUND = 8


@dataclass(frozen=True)
class SearchConfig:
    eps: Fraction
    max_depth: Optional[int] = None
    weight_bound: int = DEFAULT_WEIGHT_BOUND
    dedup: bool = True

    def __post_init__(self):
        object.__setattr__(self, "eps", as_rational(self.eps))
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.max_depth is not None and self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")

    @property
    def depth_cap(self) -> int:
        if self.max_depth is not None:
            return self.max_depth
        # N + 2 for eps = 1/N; ceil(1/eps) + 2 in general
        return -(-self.eps.denominator // self.eps.numerator) + 2


@dataclass
class BlowupCertificate:
    model: str
    eps: Fraction
    k_max: int
    witness: List[Tuple[str, Fraction]]
    frontier_count: int
    exhausted: bool
    depth_cap: int
    start: Optional[Dict] = None
    parameter_range: Optional[Dict] = None
    level_counts: List[int] = field(default_factory=list)

    def to_json(self) -> Dict:
        out = {
            "model": self.model,
            "epsilon": format_rational(self.eps),
            "k_max": self.k_max,
            "witness": [{"center": c, "eps": format_rational(e)} for c, e in self.witness],
            "frontier_count": self.frontier_count,
            "exhausted": self.exhausted,
            "depth_cap": self.depth_cap,
            "level_counts": list(self.level_counts),
        }
        if self.start is not None:
            out["start"] = self.start
        if self.parameter_range is not None:
            out["parameter_range"] = self.parameter_range
        return out


def _bfs(roots, moves, apply, key, cap: int, dedup: bool):
    """Level-by-level search.  Returns (levels, parents, examined).

    ``levels[d]`` lists the state ids reached after exactly ``d`` moves;
    ``parents[sid] = (parent_sid, move)``.
    """
    states: List = []
    parents: Dict[int, Tuple[Optional[int], object]] = {}
    seen: Dict[Hashable, int] = {}

    def add(state, parent, move):
        k = key(state) if dedup else len(states)
        if k in seen:
            return None
        sid = len(states)
        seen[k] = sid
        states.append(state)
        parents[sid] = (parent, move)
        return sid

    level = [sid for sid in (add(r, None, ("root", i)) for i, r in enumerate(roots)) if sid is not None]
    levels = [level]
    while level and len(levels) <= cap:
        nxt = []
        for sid in level:
            for mv in moves(states[sid]):
                child = apply(states[sid], mv)
                if child is None:
                    continue
                cid = add(child, sid, mv)
                if cid is not None:
                    nxt.append(cid)
        if not nxt:
            break
        levels.append(nxt)
        level = nxt
    return states, levels, parents


def _path(parents, sid) -> Tuple[int, List]:
    moves = []
    while True:
        parent, mv = parents[sid]
        if parent is None:
            return mv[1], list(reversed(moves))
        moves.append(mv)
        sid = parent


def max_equal_toric_blowups(eps: RationalLike, cfg: Optional[SearchConfig] = None) -> BlowupCertificate:
    """Deepest sequence of size-``eps`` corner chops starting from the standard triangle."""
    cfg = cfg or SearchConfig(eps)
    eps = as_rational(eps)

    def moves(p: DelzantPolygon):
        return range(len(p))

    def apply(p, v):
        try:
            return corner_chop(p, v, eps)
        except ChopError:
            return None

    states, levels, parents = _bfs(
        [standard_cp2(1)], moves, apply, canonical_form, cfg.depth_cap, cfg.dedup
    )
    k_max = len(levels) - 1
    _, path = _path(parents, levels[-1][0])
    exhausted = k_max < cfg.depth_cap
    log.info("toric eps=%s: k_max=%d, %d states", eps, k_max, len(states))
    return BlowupCertificate(
        model="toric",
        eps=eps,
        k_max=k_max,
        witness=[(f"vertex:{v}", eps) for v in path],
        frontier_count=len(states),
        exhausted=exhausted,
        depth_cap=cfg.depth_cap,
        level_counts=[len(lv) for lv in levels],
    )


def circle_starts(weight_bound: int) -> List[Tuple[Dict, DecoratedGraph]]:
    """Normal-form circle actions on CP^2 with ``n <= weight_bound``, both orientations."""
    out = []
    for n in range(1, weight_bound + 1):
        for m in range(0, n):
            if gcd(m, n) != 1:
                continue
            g = cp2_graph(m, n)
            out.append(({"m": m, "n": n, "reversed": False}, g))
            out.append(({"m": m, "n": n, "reversed": True}, g.reversed()))
    return out


def max_equal_circle_blowups(eps: RationalLike, cfg: Optional[SearchConfig] = None) -> BlowupCertificate:
    """Deepest sequence of size-``eps`` equivariant blow-ups over all starting circle actions."""
    cfg = cfg or SearchConfig(eps)
    eps = as_rational(eps)
    if cfg.weight_bound < 2:
        raise ValueError("weight bound must be at least 2")
    starts = circle_starts(cfg.weight_bound)

    def moves(g: DecoratedGraph):
        return [c for c in g.centers() if blowup_legal(g, c, eps)]

    def apply(g, c: Center):
        try:
            return graph_blow_up(g, c, eps)
        except BlowUpError as exc:
            log.debug("legal blow-up at %s rejected: %s", c, exc)
            return None

    states, levels, parents = _bfs(
        [g for _, g in starts], moves, apply, lambda g: g, cfg.depth_cap, cfg.dedup
    )
    k_max = len(levels) - 1
    root, path = _path(parents, levels[-1][0])
    exhausted = k_max < cfg.depth_cap
    log.info("circle eps=%s: k_max=%d, %d states", eps, k_max, len(states))
    return BlowupCertificate(
        model="circle",
        eps=eps,
        k_max=k_max,
        witness=[(str(c), eps) for c in path],
        frontier_count=len(states),
        exhausted=exhausted,
        depth_cap=cfg.depth_cap,
        start=_root_start(starts, states[_root_id(parents, levels[-1][0])]),
        parameter_range={
            "weight_bound": cfg.weight_bound,
            "starts": len(starts),
            "note": "starts are cp2_graph(m, n) with 0 <= m < n <= weight_bound, gcd(m, n) = 1, "
            "in both orientations; stability under raising the bound is tested, not proved",
        },
        level_counts=[len(lv) for lv in levels],
    )


def _root_id(parents, sid):
    while parents[sid][0] is not None:
        sid = parents[sid][0]
    return sid


def _root_start(starts, root_graph):
    for desc, g in starts:
        if g == root_graph:
            return desc
    raise AssertionError("search root not among the starting graphs")


def replay_toric(cert_or_steps, start: Optional[DelzantPolygon] = None) -> List[DelzantPolygon]:
    steps = cert_or_steps.witness if isinstance(cert_or_steps, BlowupCertificate) else cert_or_steps
    p = start or standard_cp2(1)
    out = [p]
    for desc, eps in steps:
        kind, _, idx = str(desc).partition(":")
        if kind != "vertex":
            raise ValueError(f"toric step must name a vertex, got {desc!r}")
        p = corner_chop(p, int(idx), eps)
        out.append(p)
    return out


def start_graph(desc: Dict) -> DecoratedGraph:
    g = cp2_graph(int(desc["m"]), int(desc["n"]))
    return g.reversed() if desc.get("reversed") else g


def replay_circle(steps: Sequence[Tuple[str, RationalLike]], start: DecoratedGraph) -> List[DecoratedGraph]:
    g = start
    out = [g]
    for desc, eps in steps:
        g = graph_blow_up(g, Center.parse(str(desc)), as_rational(eps))
        out.append(g)
    return out


@dataclass
class TheoremRow:
    eps: Fraction
    toric: BlowupCertificate
    circle: BlowupCertificate
    unit_fraction: bool

    @property
    def toric_bound(self) -> int:
        return _toric_closed_form(self.eps)

    @property
    def circle_bound(self) -> int:
        return _circle_closed_form(self.eps)

    @property
    def passed(self) -> Optional[bool]:
        if not self.unit_fraction:
            return None
        return self.toric.k_max == self.toric_bound and self.circle.k_max == self.circle_bound

    def to_json(self) -> Dict:
        return {
            "epsilon": format_rational(self.eps),
            "toric_k_max": self.toric.k_max,
            "circle_k_max": self.circle.k_max,
            "toric_bound": self.toric_bound,
            "circle_bound": self.circle_bound,
            "unit_fraction": self.unit_fraction,
            "status": {True: "pass", False: "fail", None: "unchecked"}[self.passed],
            "warning": None if self.unit_fraction else "epsilon is not of the form 1/N; "
            "theorem hypothesis not met, bounds not asserted",
        }


def _toric_closed_form(eps: Fraction) -> int:
    if eps >= 1:
        return 0
    if eps >= Fraction(1, 2):
        return 1
    return 3


def _circle_closed_form(eps: Fraction) -> int:
    """Largest ``k`` with ``(k - 1) eps < 1``, capped by ``eps < 1`` for a single blow-up."""
    if eps >= 1:
        return 0
    k = 1
    while k * eps < 1:
        k += 1
    return k


def theorem_table(eps_list: Sequence[RationalLike], weight_bound: int = DEFAULT_WEIGHT_BOUND) -> List[TheoremRow]:
    rows = []
    for e in eps_list:
        e = as_rational(e)
        unit = e.numerator == 1
        if not unit:
            log.warning("epsilon %s is not a unit fraction; theorem claim not asserted", e)
        rows.append(
            TheoremRow(
                e,
                max_equal_toric_blowups(e),
                max_equal_circle_blowups(e, SearchConfig(e, weight_bound=weight_bound)),
                unit,
            )
        )
    return rows


def format_table(rows: Sequence[TheoremRow]) -> str:
    lines = [f"{'eps':>6}  {'toric':>5}  {'circle':>6}  {'(k-1)eps<1':>10}  status"]
    for r in rows:
        d = r.to_json()
        lines.append(
            f"{d['epsilon']:>6}  {r.toric.k_max:>5}  {r.circle.k_max:>6}  {r.circle_bound:>10}  {d['status']}"
        )
    return "\n".join(lines)
