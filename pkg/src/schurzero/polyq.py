"""Exact integer polynomials in q: quantum integers and interpolation from counts."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class InterpolationError(ValueError):
    """Point values are not those of an integer polynomial within the degree bound."""


class QPoly:
    """Polynomial in q with integer coefficients, stored in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c: int) -> QPoly:
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> QPoly:
        return cls((0,) * k + (c,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = QPoly.const(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    @staticmethod
    def _lift(x) -> QPoly:
        if isinstance(x, QPoly):
            return x
        if isinstance(x, int):
            return QPoly.const(x)
        raise TypeError(f"cannot use {type(x).__name__} as a polynomial")

    def __add__(self, other):
        other = self._lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return QPoly(x + (b[k] if k < len(b) else 0) for k, x in enumerate(a))

    __radd__ = __add__

    def __neg__(self):
        return QPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return QPoly(c * other for c in self.coeffs)
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return QPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = QPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"QPoly({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if mono and abs(c) == 1:
                term = mono
            else:
                term = f"{abs(c)}{'*' + mono if mono else ''}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        first_sign, first = parts[0]
        s = ("-" if first_sign == "-" else "") + first
        for sign, term in parts[1:]:
            s += f" {sign} {term}"
        return s

    def to_json(self) -> list[int]:
        return list(self.coeffs)

    @classmethod
    def from_json(cls, data: Sequence[int]) -> QPoly:
        return cls(data)


ZERO = QPoly()
ONE = QPoly.const(1)
q = QPoly.monomial(1)


def quantum_int(m: int) -> QPoly:
    """[m] = q^(m-1) + ... + q + 1, and [0] = 0."""
    if m < 0:
        raise ValueError(f"quantum integer of negative {m}")
    return QPoly([1] * m)


def quantum_factorial(m: int) -> QPoly:
    if m < 0:
        raise ValueError(f"quantum factorial of negative {m}")
    out = ONE
    for k in range(2, m + 1):
        out = out * quantum_int(k)
    return out


def interpolate(points: Sequence[tuple[int, int]], degree_bound: int) -> QPoly:
    """The integer polynomial of degree <= degree_bound through ``points``.

    The first ``degree_bound + 1`` points determine the polynomial; any further
    points are checked against it. Non-integral coefficients or a mismatch at a
    checked point raise InterpolationError.
    """
    if degree_bound < 0:
        raise ValueError("degree bound must be non-negative")
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    if len(points) < degree_bound + 1:
        raise ValueError(f"need {degree_bound + 1} points, got {len(points)}")

    fit = points[:degree_bound + 1]
    # Newton divided differences
    xs = [Fraction(x) for x, _ in fit]
    table = [Fraction(y) for _, y in fit]
    m = len(fit)
    for level in range(1, m):
        for k in range(m - 1, level - 1, -1):
            table[k] = (table[k] - table[k - 1]) / (xs[k] - xs[k - level])

    # expand the Newton form into ascending coefficients
    coeffs = [Fraction(0)] * m
    for k in range(m - 1, -1, -1):
        # coeffs = coeffs * (x - xs[k]) + table[k]
        shifted = [Fraction(0)] + coeffs[:-1]
        coeffs = [shifted[t] - xs[k] * coeffs[t] for t in range(m)]
        coeffs[0] += table[k]

    if any(c.denominator != 1 for c in coeffs):
        raise InterpolationError(f"non-integral coefficients {coeffs} from points {list(points)}")
    poly = QPoly(int(c) for c in coeffs)
    for x, y in points[degree_bound + 1:]:
        if poly(x) != y:
            raise InterpolationError(f"{poly} gives {poly(x)} at {x}, expected {y}")
    return poly
