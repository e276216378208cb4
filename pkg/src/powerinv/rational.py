"""Exact rational helpers: parsing, formatting and certified enclosures.

Irrational quantities (square roots, exponentials) never enter a comparison
as floats.  They are bracketed by rational intervals that are refined until
the comparison is decided.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt


class Undecidable(ArithmeticError):
    """Raised when an enclosure comparison is still ambiguous at max precision."""


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass 'p/q' strings or ints")
    return Fraction(x)


def fmt(x) -> str:
    """Format a rational as 'p/q' (or 'p' when integral)."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def fmt_vector(values) -> str:
    return " ".join(fmt(v) for v in values)


def parse_vector(text: str) -> list[Fraction]:
    """Parse '(3/4,1/4,0)', '[3/4, 1/4]' or '3/4 1/4' into fractions."""
    s = text.strip().strip("()[]")
    parts = [p for p in s.replace(",", " ").split() if p]
    return [Fraction(p) for p in parts]


def is_terminating(x: Fraction) -> bool:
    d = x.denominator
    for p in (2, 5):
        while d % p == 0:
            d //= p
    return d == 1


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @staticmethod
    def point(x) -> "Interval":
        x = to_fraction(x)
        return Interval(x, x)

    def __add__(self, other):
        other = _iv(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-_iv(other))

    def __rsub__(self, other):
        return _iv(other) - self

    def __mul__(self, other):
        other = _iv(other)
        c = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi]
        return Interval(min(c), max(c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _iv(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval divisor contains 0")
        return self * Interval(1 / other.hi, 1 / other.lo)

    def __rtruediv__(self, other):
        return _iv(other) / self


def _iv(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.point(x)


def sqrt_interval(r, bits: int) -> Interval:
    """Rational bracket of sqrt(r) with width about 2**-bits."""
    r = to_fraction(r)
    if r < 0:
        raise ValueError("sqrt of negative")
    a, b = r.numerator, r.denominator
    # sqrt(a/b) = sqrt(a*b)/b
    scale = 1 << bits
    s = isqrt(a * b * scale * scale)
    lo = Fraction(s, b * scale)
    hi = lo if s * s == a * b * scale * scale else Fraction(s + 1, b * scale)
    return Interval(lo, hi)


def exp_interval(x, bits: int) -> Interval:
    """Rational bracket of exp(x) for rational x, by Taylor series with tail bound."""
    x = to_fraction(x)
    if x < 0:
        return 1 / exp_interval(-x, bits)
    # exp(x) = exp(x/2^h)^(2^h); keep the reduced argument below 1/2
    h = 0
    y = x
    while y > Fraction(1, 2):
        y /= 2
        h += 1
    tol = Fraction(1, 1 << (bits + 2 * h + 4))
    term = Fraction(1)
    s = Fraction(1)
    j = 0
    while True:
        j += 1
        term = term * y / j
        s += term
        # remainder after term j is below term * y/(j+1) / (1 - y/(j+2))
        rem = term * y / (j + 1) / (1 - y / (j + 2))
        if rem < tol:
            break
    lo, hi = s, s + rem
    for _ in range(h):
        lo, hi = lo * lo, hi * hi
    return Interval(lo, hi)


def decide_ge(lhs, rhs, max_bits: int = 512) -> bool:
    """Decide lhs(bits) >= rhs(bits); the callables return Intervals or rationals.

    Precision doubles until the intervals separate.  Exact ties (both sides
    collapsed to the same point) count as >=.
    """
    bits = 32
    while bits <= max_bits:
        a, b = _iv(lhs(bits)), _iv(rhs(bits))
        if a.lo >= b.hi:
            return True
        if a.hi < b.lo:
            return False
        bits *= 2
    raise Undecidable(f"undecided at {max_bits} bits")
