"""Exact piecewise-linear functions on the rational line.

A function is stored by its knots ``(x_i, y_i)`` on a closed support
``[x_0, x_k]``; it is linear between consecutive knots, continuous on the
support and zero outside it.  A jump is therefore only possible at the two
ends of the support.  Knots are kept in a canonical form (collinear knots
merged, identically-zero end pieces trimmed) so that ``==`` is equality of
functions.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

from .lattice import RationalLike, as_rational

Knot = Tuple[Fraction, Fraction]


def _canonical(knots: Sequence[Knot]) -> Tuple[Knot, ...]:
    ks = [(Fraction(x), Fraction(y)) for x, y in knots]
    for (x0, _), (x1, _) in zip(ks, ks[1:]):
        if not x0 < x1:
            raise ValueError("breakpoints must be strictly increasing")
    merged: List[Knot] = []
    for k in ks:
        # drop the middle knot of any collinear triple
        while len(merged) >= 2:
            (xa, ya), (xb, yb) = merged[-2], merged[-1]
            if (yb - ya) * (k[0] - xa) == (k[1] - ya) * (xb - xa):
                merged.pop()
            else:
                break
        merged.append(k)
    while len(merged) >= 2 and merged[0][1] == 0 and merged[1][1] == 0:
        merged.pop(0)
    while len(merged) >= 2 and merged[-1][1] == 0 and merged[-2][1] == 0:
        merged.pop()
    if len(merged) < 2:
        return ()
    return tuple(merged)


@dataclass(frozen=True)
class PiecewiseLinear:
    knots: Tuple[Knot, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "knots", _canonical(self.knots))

    @classmethod
    def zero(cls) -> "PiecewiseLinear":
        return cls(())

    @classmethod
    def from_pieces(
        cls, breakpoints: Sequence[RationalLike], pieces: Sequence[Tuple[RationalLike, RationalLike]]
    ) -> "PiecewiseLinear":
        """Build from breakpoints ``b_0 < ... < b_k`` and ``k`` (slope, intercept) pairs.

        Raises ``ValueError`` if adjacent pieces disagree at their common breakpoint.
        """
        bs = [as_rational(b) for b in breakpoints]
        ps = [(as_rational(s), as_rational(c)) for s, c in pieces]
        if len(ps) != len(bs) - 1:
            raise ValueError("need exactly one piece per interval")
        knots = []
        for i, x in enumerate(bs):
            vals = set()
            if i > 0:
                s, c = ps[i - 1]
                vals.add(s * x + c)
            if i < len(ps):
                s, c = ps[i]
                vals.add(s * x + c)
            if len(vals) != 1:
                raise ValueError(f"pieces are discontinuous at {x}")
            knots.append((x, vals.pop()))
        return cls(tuple(knots))

    @property
    def is_zero(self) -> bool:
        return not self.knots

    @property
    def support(self) -> Tuple[Fraction, Fraction] | None:
        if not self.knots:
            return None
        return self.knots[0][0], self.knots[-1][0]

    @property
    def breakpoints(self) -> List[Fraction]:
        return [x for x, _ in self.knots]

    @property
    def pieces(self) -> List[Tuple[Fraction, Fraction]]:
        """(slope, intercept) on each interval between consecutive breakpoints."""
        out = []
        for (x0, y0), (x1, y1) in zip(self.knots, self.knots[1:]):
            s = (y1 - y0) / (x1 - x0)
            out.append((s, y0 - s * x0))
        return out

    def __call__(self, x: RationalLike) -> Fraction:
        x = as_rational(x)
        if not self.knots or x < self.knots[0][0] or x > self.knots[-1][0]:
            return Fraction(0)
        xs = self.breakpoints
        i = bisect_left(xs, x)
        if xs[i] == x:
            return self.knots[i][1]
        (x0, y0), (x1, y1) = self.knots[i - 1], self.knots[i]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def limit(self, x: Fraction, side: int) -> Fraction:
        """One-sided limit at ``x``: ``side=-1`` from the left, ``+1`` from the right."""
        if not self.knots:
            return Fraction(0)
        lo, hi = self.support
        if (side < 0 and x <= lo) or (side > 0 and x >= hi):
            return Fraction(0)
        return self(x)

    def __add__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        return pl_add(self, other)

    def __neg__(self) -> "PiecewiseLinear":
        return pl_scale(self, -1)

    def __sub__(self, other: "PiecewiseLinear") -> "PiecewiseLinear":
        return pl_add(self, pl_scale(other, -1))

    def integral(self) -> Fraction:
        return pl_integral(self)

    def __repr__(self) -> str:
        inner = ", ".join(f"({x}, {y})" for x, y in self.knots)
        return f"PiecewiseLinear([{inner}])"


def pl_scale(f: PiecewiseLinear, c: RationalLike) -> PiecewiseLinear:
    c = as_rational(c)
    return PiecewiseLinear(tuple((x, c * y) for x, y in f.knots))


def pl_add(f: PiecewiseLinear, g: PiecewiseLinear) -> PiecewiseLinear:
    """Exact sum.  The sum must be continuous inside the union of the supports."""
    if f.is_zero:
        return g
    if g.is_zero:
        return f
    xs = sorted(set(f.breakpoints) | set(g.breakpoints))
    knots = []
    for i, x in enumerate(xs):
        left = f.limit(x, -1) + g.limit(x, -1)
        right = f.limit(x, +1) + g.limit(x, +1)
        if i == 0:
            knots.append((x, right))
        elif i == len(xs) - 1:
            knots.append((x, left))
        elif left != right:
            raise ValueError(f"sum is discontinuous at {x}")
        else:
            knots.append((x, left))
    return PiecewiseLinear(tuple(knots))


def pl_sum(fs: Iterable[PiecewiseLinear]) -> PiecewiseLinear:
    total = PiecewiseLinear.zero()
    for f in fs:
        total = pl_add(total, f)
    return total


def pl_integral(f: PiecewiseLinear) -> Fraction:
    """Integral over the support, trapezoid-exact on every piece."""
    total = Fraction(0)
    for (x0, y0), (x1, y1) in zip(f.knots, f.knots[1:]):
        total += (x1 - x0) * (y0 + y1) / 2
    return total
