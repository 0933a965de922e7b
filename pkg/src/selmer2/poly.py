"""Dense univariate polynomials over Z and Q, resultants, discriminants.

Coefficient lists are stored lowest degree first.  The module-level helpers
(``padd``, ``pmul``, ``pdivmod``, ...) work on plain lists over any exact field
whose elements support ``+ - * /`` and compare equal to ``0`` (``Fraction``,
``QuadNumber``); ``IntPoly`` is the immutable user-facing integer type.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError

# ---------------------------------------------------------------------------
# list helpers over an exact field


def trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def padd(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def psub(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return trim(out)


def pscale(a, c):
    return trim([c * x for x in a])


def pdivmod(a, b):
    """Quotient and remainder over a field; ``b`` must be nonzero."""
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(trim(a))
    db = len(b) - 1
    lb = b[-1]
    if len(r) - 1 < db:
        return [], r
    q = [0] * (len(r) - db)
    while len(r) - 1 >= db and r:
        c = r[-1] / lb
        k = len(r) - 1 - db
        q[k] = c
        for i in range(db + 1):
            r[k + i] -= c * b[i]
        r = trim(r)
    return trim(q), r


def pmonic(a):
    a = trim(a)
    if not a:
        return a
    lead = a[-1]
    return [x / lead for x in a]


def pgcd(a, b):
    """Monic gcd over a field."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    return pmonic(a)


def peval(a, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def pderiv(a):
    return trim([i * a[i] for i in range(1, len(a))])


def pcompose(a, b):
    """a(b(x))."""
    out = []
    for c in reversed(a):
        out = padd(pmul(out, b), [c])
    return out


def ppow(a, e):
    out = [1]
    base = list(a)
    while e:
        if e & 1:
            out = pmul(out, base)
        base = pmul(base, base)
        e >>= 1
    return out


def to_fractions(a):
    return [Fraction(x) for x in a]


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def clear_denominators(a):
    """Return ``(integer coefficient list, positive denominator)`` for a rational list."""
    a = [Fraction(x) for x in a]
    den = 1
    for x in a:
        den = _lcm(den, x.denominator)
    return [int(x * den) for x in a], den


# ---------------------------------------------------------------------------
# integer polynomials


@dataclass(frozen=True)
class IntPoly:
    coeffs: tuple = ()

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        for x, y in zip(c, self.coeffs):
            if x != y:
                raise DomainError(f"non-integer coefficient {y!r}")
        object.__setattr__(self, "coeffs", tuple(trim(c)))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def from_roots(cls, roots):
        out = [1]
        for r in roots:
            out = pmul(out, [-r, 1])
        return cls(out)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return self.lc == 1

    def content(self):
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self):
        """Primitive part with positive leading coefficient."""
        if not self.coeffs:
            return self
        g = self.content()
        if self.lc < 0:
            g = -g
        return IntPoly(c // g for c in self.coeffs)

    def derivative(self):
        return IntPoly(pderiv(self.coeffs))

    def __add__(self, other):
        return IntPoly(padd(self.coeffs, _coerce(other).coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        return IntPoly(psub(self.coeffs, _coerce(other).coeffs))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __mul__(self, other):
        return IntPoly(pmul(self.coeffs, _coerce(other).coeffs))

    __rmul__ = __mul__

    def __pow__(self, e):
        return IntPoly(ppow(self.coeffs, e))

    def __call__(self, x):
        return peval(self.coeffs, x)

    def exact_div(self, other):
        """Division over Z; raises DomainError unless ``other`` divides ``self`` exactly."""
        q, r = pdivmod(to_fractions(self.coeffs), to_fractions(_coerce(other).coeffs))
        if r or any(c.denominator != 1 for c in q):
            raise DomainError(f"{other} does not divide {self} over Z")
        return IntPoly(int(c) for c in q)

    def divides(self, other):
        q, r = pdivmod(to_fractions(_coerce(other).coeffs), to_fractions(self.coeffs))
        return not r and all(c.denominator == 1 for c in q)

    def mod(self, m):
        return IntPoly(c % m for c in self.coeffs)

    def __str__(self):
        return format_poly(self.coeffs)

    def __repr__(self):
        return f"IntPoly({str(self)!r})"


def _coerce(p):
    if isinstance(p, IntPoly):
        return p
    if isinstance(p, int):
        return IntPoly((p,))
    if isinstance(p, str):
        return parse_poly(p)
    return IntPoly(p)


@dataclass(frozen=True)
class RatPoly:
    """A rational polynomial ``numerator / denominator`` in lowest terms."""

    numerator: IntPoly
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise DomainError("denominator must be positive")
        g = math.gcd(self.numerator.content(), self.denominator)
        if g > 1:
            object.__setattr__(self, "numerator", IntPoly(c // g for c in self.numerator.coeffs))
            object.__setattr__(self, "denominator", self.denominator // g)
        if self.numerator.is_zero():
            object.__setattr__(self, "denominator", 1)

    @classmethod
    def from_fractions(cls, coeffs):
        num, den = clear_denominators(coeffs)
        return cls(IntPoly(num), den)

    def fractions(self):
        return [Fraction(c, self.denominator) for c in self.numerator.coeffs]

    @property
    def degree(self):
        return self.numerator.degree

    def __call__(self, x):
        return Fraction(self.numerator(x)) / self.denominator if isinstance(x, (int, Fraction)) \
            else self.numerator(x) / self.denominator

    def __str__(self):
        s = str(self.numerator)
        return s if self.denominator == 1 else f"({s})/{self.denominator}"


def format_poly(coeffs, var="x"):
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = str(a)
        else:
            mon = var if i == 1 else f"{var}^{i}"
            body = mon if a == 1 else f"{a}*{mon}"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f"{sign}{body}"
    return out


_TERM = re.compile(r"([+-]?)(\d*)\*?(x(?:\^(\d+))?)?$")


def parse_poly(text):
    """Parse an integer polynomial such as ``"x^6 - 2*x + 3"``."""
    s = text.replace(" ", "").replace("**", "^").replace("−", "-")
    if not s:
        raise DomainError("empty polynomial")
    pieces = re.findall(r"[+-]?[^+-]+", s)
    if "".join(pieces) != s:
        raise DomainError(f"cannot parse polynomial {text!r}")
    coeffs = {}
    for piece in pieces:
        m = _TERM.match(piece)
        if not m or (not m.group(2) and not m.group(3)):
            raise DomainError(f"cannot parse term {piece!r} in {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        c = int(m.group(2)) if m.group(2) else 1
        e = 0 if not m.group(3) else int(m.group(4) or 1)
        coeffs[e] = coeffs.get(e, 0) + sign * c
    deg = max(coeffs)
    return IntPoly([coeffs.get(i, 0) for i in range(deg + 1)])


# ---------------------------------------------------------------------------
# resultants and discriminants


def _prem(a, b):
    """Pseudo-remainder lc(b)^(deg a - deg b + 1) * a mod b over Z."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    delta = len(a) - len(b) + 1
    while r and len(r) - 1 >= db:
        c = r[-1]
        k = len(r) - 1 - db
        r = [lb * x for x in r]
        for i in range(db + 1):
            r[k + i] -= c * b[i]
        r = trim(r)
        delta -= 1
    return [x * lb ** delta for x in r]


def resultant(a, b):
    """Res(a, b) = lc(a)^deg(b) * prod b(roots of a), via the subresultant PRS."""
    A = list(_coerce(a).coeffs)
    B = list(_coerce(b).coeffs)
    if not A or not B:
        raise DomainError("resultant of the zero polynomial")
    da, db = len(A) - 1, len(B) - 1
    if da == 0:
        return A[0] ** db
    if db == 0:
        return B[0] ** da
    ca, cb = IntPoly(A).content(), IntPoly(B).content()
    A = [x // ca for x in A]
    B = [x // cb for x in B]
    t = ca ** db * cb ** da
    s = 1
    if da < db:
        A, B = B, A
        if da % 2 and db % 2:
            s = -s
    g = h = 1
    while True:
        dA, dB = len(A) - 1, len(B) - 1
        delta = dA - dB
        if dA % 2 and dB % 2:
            s = -s
        R = _prem(A, B)
        A = B
        if not R:
            return 0
        div = g * h ** delta
        B = [x // div for x in R]
        g = A[-1]
        h = g ** delta // h ** (delta - 1) if delta >= 1 else h
        if len(B) == 1:
            dA = len(A) - 1
            h = B[0] ** dA // h ** (dA - 1) if dA >= 1 else h
            return s * t * h


def poly_discriminant(a):
    """(-1)^(D(D-1)/2) Res(a, a') / lc(a) for an integer polynomial of degree D >= 1."""
    a = _coerce(a)
    D = a.degree
    if D < 1:
        raise DomainError("discriminant needs degree >= 1")
    r = resultant(a, a.derivative())
    sign = -1 if (D * (D - 1) // 2) % 2 else 1
    return sign * r // a.lc


def discriminant(c):
    """Discriminant of f_c for a ``CurveInvariants`` (or any integer polynomial)."""
    f = c.f if isinstance(c, CurveInvariants) else _coerce(c)
    return poly_discriminant(f)


# ---------------------------------------------------------------------------
# curve invariants


@dataclass(frozen=True)
class CurveInvariants:
    """The tuple (c_2, ..., c_{2n+2}) of y^2 = x^{2n+2} + c_2 x^{2n} + ... + c_{2n+2}."""

    n: int
    c: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))
        if self.n < 1:
            raise DomainError("genus must be >= 1")
        if len(self.c) != 2 * self.n + 1:
            raise DomainError(f"expected {2 * self.n + 1} coefficients c_2..c_{2 * self.n + 2}, got {len(self.c)}")

    @property
    def degree(self):
        return 2 * self.n + 2

    @property
    def d(self):
        """Degree of the height function, (2n+2)(2n+1)."""
        return (2 * self.n + 2) * (2 * self.n + 1)

    @property
    def f(self):
        D = self.degree
        coeffs = [0] * (D + 1)
        coeffs[D] = 1
        for k, ck in enumerate(self.c, start=2):
            coeffs[D - k] = ck
        return IntPoly(coeffs)

    def coefficient(self, k):
        return self.c[k - 2]

    @classmethod
    def from_poly(cls, f):
        f = _coerce(f)
        D = f.degree
        if D < 4 or D % 2:
            raise DomainError(f"need even degree >= 4, got {D}")
        if f.lc != 1:
            raise DomainError("polynomial must be monic")
        if f.coeffs[D - 1] != 0:
            raise DomainError("the x^(2n+1) coefficient must vanish (trace-zero normalization)")
        n = (D - 2) // 2
        return cls(n, tuple(f.coeffs[D - k] for k in range(2, D + 1)))

    @classmethod
    def parse(cls, text):
        """Accept ``"x^6+3"`` or a comma list ``"c2,c3,...,c(2n+2)"``."""
        if "x" in text:
            return cls.from_poly(parse_poly(text))
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) < 3 or len(parts) % 2 == 0:
            raise DomainError(f"comma list must have 2n+1 >= 3 entries, got {len(parts)}")
        try:
            c = tuple(int(p) for p in parts)
        except ValueError as exc:
            raise DomainError(f"cannot parse invariants {text!r}") from exc
        return cls((len(c) - 1) // 2, c)

    def discriminant(self):
        return poly_discriminant(self.f)

    def height(self):
        """Floating-point H(c) = max |c_k|^(d/k); exact comparisons use ``height_below``."""
        return max((abs(ck) ** (self.d / k) for k, ck in enumerate(self.c, start=2)), default=0.0)

    def height_below(self, X):
        return height_below(self.c, self.n, X)

    def __str__(self):
        return str(self.f)


def height_below(c, n, X):
    """Exact test H(c) < X, i.e. |c_k|^d < X^k for every k, in integers."""
    X = Fraction(X)
    d = (2 * n + 2) * (2 * n + 1)
    p, q = X.numerator, X.denominator
    for k, ck in enumerate(c, start=2):
        if abs(ck) ** d * q ** k >= p ** k:
            return False
    return True


# ---------------------------------------------------------------------------
# real roots


def sturm_sequence(a):
    seq = [to_fractions(_coerce(a).coeffs)]
    seq.append(pderiv(seq[0]))
    while seq[-1]:
        r = pdivmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-x for x in r])
    return seq


def _sign_changes(vals):
    vals = [v for v in vals if v != 0]
    return sum(1 for u, v in zip(vals, vals[1:]) if (u < 0) != (v < 0))


def real_root_count(a):
    """Number of distinct real roots, by an exact Sturm sequence."""
    seq = sturm_sequence(a)
    if len(seq[0]) <= 1:
        return 0
    at_pos = [p[-1] for p in seq if p]
    at_neg = [p[-1] * (-1) ** (len(p) - 1) for p in seq if p]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def squarefree_part_int(n):
    """Squarefree integer in the class of n modulo squares (sign kept)."""
    from sympy import factorint

    if n == 0:
        raise DomainError("zero has no square class")
    out = -1 if n < 0 else 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return out


def square_class(q):
    """Squarefree integer representing a nonzero rational in Q*/Q*^2."""
    q = Fraction(q)
    return squarefree_part_int(q.numerator * q.denominator)


def isqrt_exact(n):
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def rational_sqrt(q):
    q = Fraction(q)
    a, b = isqrt_exact(q.numerator), isqrt_exact(q.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)
