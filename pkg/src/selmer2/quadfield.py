"""Arithmetic in Q(sqrt d) with elements stored as a + b*sqrt(d), a, b rational."""
from __future__ import annotations

from fractions import Fraction

from .poly import format_poly


class QuadNumber:
    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=-1):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    def _lift(self, other):
        if isinstance(other, QuadNumber):
            if other.d != self.d:
                raise ValueError("mixing different quadratic fields")
            return other
        return QuadNumber(other, 0, self.d)

    def __add__(self, other):
        o = self._lift(other)
        return QuadNumber(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return QuadNumber(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conj(self):
        return QuadNumber(self.a, -self.b, self.d)

    def norm(self):
        return self.a * self.a - self.d * self.b * self.b

    def trace(self):
        return 2 * self.a

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt d)")
        return QuadNumber(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def is_rational(self):
        return self.b == 0

    def __eq__(self, other):
        if isinstance(other, QuadNumber):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __repr__(self):
        return f"QuadNumber({self.a}, {self.b}, {self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        root = f"sqrt({self.d})"
        if self.a == 0:
            return f"{self.b}*{root}"
        sign = "+" if self.b > 0 else "-"
        return f"({self.a}{sign}{abs(self.b)}*{root})"


def qpoly(coeffs, d):
    return [c if isinstance(c, QuadNumber) else QuadNumber(c, 0, d) for c in coeffs]


def qpoly_conj(coeffs):
    return [c.conj() if isinstance(c, QuadNumber) else c for c in coeffs]


def qpoly_str(coeffs):
    """Readable form; integer-looking coefficients collapse."""
    coeffs = [c if isinstance(c, QuadNumber) else QuadNumber(c, 0, 0) for c in coeffs]
    if all(c.is_rational() and c.a.denominator == 1 for c in coeffs):
        return format_poly([int(c.a) for c in coeffs])
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        if c == 1 and mon:
            terms.append(mon)
        else:
            terms.append(f"{c}*{mon}" if mon else str(c))
    return " + ".join(terms) if terms else "0"
