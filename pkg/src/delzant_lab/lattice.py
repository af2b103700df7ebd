"""Exact rationals, integer lattice vectors and unimodular affine maps of the plane."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence, Tuple, Union

Point = Tuple[Fraction, Fraction]
Vector = Tuple[int, int]
RationalLike = Union[Fraction, int, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to a Fraction; floats are refused."""
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use 'p/q' strings")
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def format_rational(q: Fraction) -> str:
    """Serialise as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_point(p: Sequence[RationalLike]) -> Point:
    x, y = p
    return (as_rational(x), as_rational(y))


def det(u: Sequence, v: Sequence):
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Sequence, v: Sequence):
    return u[0] * v[0] + u[1] * v[1]


def sub(a: Sequence, b: Sequence):
    return (a[0] - b[0], a[1] - b[1])


def add(a: Sequence, b: Sequence):
    return (a[0] + b[0], a[1] + b[1])


def scale(c, v: Sequence):
    return (c * v[0], c * v[1])


def primitive(v: Sequence[int]) -> Tuple[Vector, int]:
    """Split an integer vector as ``g * p`` with ``p`` primitive and ``g > 0``.

    >>> primitive((2, 4))
    ((1, 2), 2)
    >>> primitive((-6, 4))
    ((-3, 2), 2)
    """
    x, y = int(v[0]), int(v[1])
    if x == 0 and y == 0:
        raise ValueError("zero vector has no primitive direction")
    g = gcd(x, y)
    return (x // g, y // g), g


def clear_denominators(v: Sequence[Fraction]) -> Tuple[Vector, int]:
    """Return ``(w, L)`` with ``w = L * v`` integral and ``L`` the lcm of the denominators."""
    fx, fy = Fraction(v[0]), Fraction(v[1])
    L = lcm(fx.denominator, fy.denominator)
    return (int(fx * L), int(fy * L)), L


def rational_direction(v: Sequence[Fraction]) -> Tuple[Vector, Fraction]:
    """Primitive lattice direction of a rational vector and its rational length."""
    w, L = clear_denominators(v)
    p, g = primitive(w)
    return p, Fraction(g, L)


def rational_length(a: Sequence[RationalLike], b: Sequence[RationalLike]) -> Fraction:
    """Largest ``lam > 0`` such that ``(b - a) / lam`` lies in Z^2."""
    d = sub(as_point(b), as_point(a))
    if d == (0, 0):
        raise ValueError("rational length of a degenerate segment (a == b)")
    return rational_direction(d)[1]


@dataclass(frozen=True)
class UnimodularAffineMap:
    """``x -> A x + b`` with ``A`` in GL(2, Z) and ``b`` rational."""

    matrix: Tuple[Tuple[int, int], Tuple[int, int]]
    translation: Point = (Fraction(0), Fraction(0))

    def __post_init__(self):
        (a, b), (c, d) = self.matrix
        m = ((int(a), int(b)), (int(c), int(d)))
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "translation", as_point(self.translation))
        if abs(self.det) != 1:
            raise ValueError(f"matrix {m} is not unimodular (det={self.det})")

    @property
    def det(self) -> int:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    def linear(self, v: Sequence):
        (a, b), (c, d) = self.matrix
        return (a * v[0] + b * v[1], c * v[0] + d * v[1])

    def __call__(self, p: Sequence) -> Point:
        return add(self.linear(as_point(p)), self.translation)

    def compose(self, other: "UnimodularAffineMap") -> "UnimodularAffineMap":
        """``self o other``."""
        (a, b), (c, d) = self.matrix
        (e, f), (g, h) = other.matrix
        m = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
        return UnimodularAffineMap(m, self(other.translation))

    def inverse(self) -> "UnimodularAffineMap":
        (a, b), (c, d) = self.matrix
        s = self.det
        m = ((d * s, -b * s), (-c * s, a * s))
        inv_lin = UnimodularAffineMap(m)
        t = inv_lin.linear(self.translation)
        return UnimodularAffineMap(m, (-t[0], -t[1]))


def basis_change(u: Vector, v: Vector) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """Integer matrix sending ``u -> (1, 0)`` and ``v -> (0, 1)``; needs ``det(u, v) == 1``."""
    if det(u, v) != 1:
        raise ValueError(f"{u}, {v} is not a positively oriented lattice basis")
    # inverse of [[u0, v0], [u1, v1]]
    return ((v[1], -v[0]), (-u[1], u[0]))
