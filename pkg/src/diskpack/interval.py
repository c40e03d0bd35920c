"""Outward-rounded rational interval arithmetic.

Endpoints are :class:`fractions.Fraction`.  Square roots use Heron's
iteration on a dyadic grid of ``bits`` fractional bits, rounding the upper
bound up and the lower bound down, so every result encloses the exact value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Number = Union[int, Fraction]

DEFAULT_BITS = 128
MAX_BITS = 1 << 14


class PrecisionError(ArithmeticError):
    """Requested enclosure width is unreachable within the precision budget."""


def _floor_grid(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.floor(x * (1 << bits)), 1 << bits)


def _ceil_grid(x: Fraction, bits: int) -> Fraction:
    return Fraction(math.ceil(x * (1 << bits)), 1 << bits)


def heron_sqrt(x: Number, bits: int = DEFAULT_BITS) -> "Interval":
    """Enclosure of sqrt(x) with width at most about 2**-bits."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    if x == 0:
        return Interval(Fraction(0), Fraction(0))
    eps = Fraction(1, 1 << bits)
    y = _ceil_grid(max(x, Fraction(1)), bits)
    while True:
        lo = _floor_grid(x / y, bits)
        if y - lo <= 2 * eps:
            return Interval(lo, y)
        nxt = _ceil_grid((y + x / y) / 2, bits)
        if nxt >= y:
            # grid floor reached; y is still an upper bound
            return Interval(lo, y)
        y = nxt


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: Number) -> "Interval":
        return cls(Fraction(x), Fraction(x))

    @staticmethod
    def _lift(x) -> "Interval":
        return x if isinstance(x, Interval) else Interval.point(x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def __add__(self, o):
        o = self._lift(o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, o):
        return self + (-self._lift(o))

    def __rsub__(self, o):
        return self._lift(o) - self

    def __mul__(self, o):
        o = self._lift(o)
        p = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(p), max(p))

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._lift(o)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval divisor contains zero")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, o):
        return self._lift(o) / self

    def square(self) -> "Interval":
        a, b = self.lo * self.lo, self.hi * self.hi
        if self.lo <= 0 <= self.hi:
            return Interval(Fraction(0), max(a, b))
        return Interval(min(a, b), max(a, b))

    def sqrt(self, bits: int = DEFAULT_BITS) -> "Interval":
        if self.hi < 0:
            raise ValueError("square root of a negative interval")
        lo = heron_sqrt(max(self.lo, Fraction(0)), bits).lo
        return Interval(lo, heron_sqrt(self.hi, bits).hi)

    def round_out(self, bits: int) -> "Interval":
        """Coarsen endpoints to the dyadic grid (keeps enclosures and bounds size)."""
        return Interval(_floor_grid(self.lo, bits), _ceil_grid(self.hi, bits))

    def __repr__(self) -> str:
        return f"Interval({float(self.lo)!r}, {float(self.hi)!r})"


def _sin_pi_pow2_at(p: int, bits: int) -> Interval:
    c = Interval.point(-1)
    for _ in range(p):
        c = ((1 + c) / 2).sqrt(bits)
    return (1 - c.square()).sqrt(bits)


def sin_pi_over_pow2(p: int, width: Number = Fraction(1, 10 ** 15),
                     max_bits: int = MAX_BITS) -> Interval:
    """Enclosure of sin(pi / 2**p) no wider than ``width`` via half-angle cosines."""
    if p < 0:
        raise ValueError("p must be non-negative")
    if p == 0:
        return Interval.point(0)
    width = Fraction(width)
    bits = 64 + 2 * p
    while bits <= max_bits:
        s = _sin_pi_pow2_at(p, bits)
        if s.width <= width:
            return s
        bits *= 2
    raise PrecisionError(f"width {float(width):.3g} for p = {p} exceeds the {max_bits}-bit budget")


def log2_exact(m: int) -> int:
    if m < 1 or m & (m - 1):
        raise ValueError(f"m = {m} is not a power of two")
    return m.bit_length() - 1
