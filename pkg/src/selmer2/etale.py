"""The etale algebra L = Q[x]/f(x) in the power basis 1, b, ..., b^(D-1).

Elements are reduced coefficient tuples of Fractions.  Besides ring arithmetic,
the module builds the Gram matrix of <l, m>_alpha = top coefficient of alpha*l*m
and decides square classes in L*/L*^2 and L*/L*^2 Q* with local probes at
unramified primes plus Hensel lifting and rational reconstruction.
"""
from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from sympy import factorint, isprime

from .errors import DomainError
from .factor import (factor_mod_p, madd, mdivmod, mmod, mmul, mpowmod, msub,
                     mtrim, mxgcd)
from .linalg import solve
from .poly import CurveInvariants, IntPoly, _coerce, clear_denominators, poly_discriminant, resultant, rational_sqrt
from .quadform import GramMatrix

DEFAULT_HEIGHT_BOUND = 10 ** 40
DEFAULT_PROBES = 3


def default_seed():
    return int(os.environ.get("SELMER2_SEED", "0"))


def _modulus_poly(f):
    if isinstance(f, CurveInvariants):
        return f.f
    f = _coerce(f)
    if not f.is_monic():
        raise DomainError("etale algebra needs a monic modulus")
    return f


@dataclass(frozen=True)
class EtaleElement:
    modulus: IntPoly
    coeffs: tuple

    def __post_init__(self):
        f = _modulus_poly(self.modulus)
        object.__setattr__(self, "modulus", f)
        c = [Fraction(x) for x in self.coeffs]
        D = f.degree
        if len(c) > D:
            c = reduce_mod(c, f)
        c = c + [Fraction(0)] * (D - len(c))
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_poly(cls, f, poly):
        """Image of a polynomial (IntPoly or coefficient list) in L."""
        coeffs = poly.coeffs if isinstance(poly, IntPoly) else poly
        return cls(f, tuple(coeffs))

    @classmethod
    def one(cls, f):
        return cls(f, (1,))

    @classmethod
    def beta(cls, f):
        return cls(f, (0, 1))

    @classmethod
    def scalar(cls, f, c):
        return cls(f, (c,))

    @property
    def degree(self):
        return self.modulus.degree

    def _check(self, other):
        if not isinstance(other, EtaleElement):
            return EtaleElement.scalar(self.modulus, other)
        if other.modulus != self.modulus:
            raise DomainError("elements live in different etale algebras")
        return other

    def __add__(self, other):
        o = self._check(other)
        return EtaleElement(self.modulus, tuple(x + y for x, y in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return EtaleElement(self.modulus, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        return mul_reduce(self, self._check(other))

    __rmul__ = __mul__

    def __pow__(self, e):
        out = EtaleElement.one(self.modulus)
        base = self
        if e < 0:
            base, e = base.inverse(), -e
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def mult_matrix(self):
        """Matrix of multiplication by self; column j holds self * b^j."""
        D = self.degree
        cols = []
        cur = list(self.coeffs)
        for _ in range(D):
            cols.append(cur)
            cur = times_beta(cur, self.modulus)
        return [[cols[j][i] for j in range(D)] for i in range(D)]

    def inverse(self):
        if norm(self) == 0:
            raise DomainError("element is not invertible in L", certificate=self)
        e0 = [Fraction(int(i == 0)) for i in range(self.degree)]
        return EtaleElement(self.modulus, tuple(solve(self.mult_matrix(), e0)))

    def is_rational(self):
        return all(c == 0 for c in self.coeffs[1:])

    def denominator(self):
        return math.lcm(*(c.denominator for c in self.coeffs))

    def to_json(self):
        return [str(c) for c in self.coeffs]

    def __str__(self):
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mon = "" if i == 0 else ("b" if i == 1 else f"b^{i}")
            if mon and c == 1:
                parts.append(mon)
            elif mon and c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}" if mon else str(c))
        return " + ".join(reversed(parts)).replace("+ -", "- ") if parts else "0"


def reduce_mod(c, f):
    """Reduce a coefficient list modulo the monic f."""
    f = f.coeffs
    D = len(f) - 1
    c = list(c)
    for k in range(len(c) - 1, D - 1, -1):
        t = c[k]
        if t:
            for i in range(D):
                c[k - D + i] -= t * f[i]
        c[k] = 0
    return c[:D]


def times_beta(c, f):
    D = f.degree
    top = c[D - 1]
    out = [Fraction(0)] + list(c[:D - 1])
    if top:
        for i in range(D):
            out[i] -= top * f.coeffs[i]
    return out


def mul_reduce(a, b):
    if a.modulus != b.modulus:
        raise DomainError("modulus mismatch")
    D = a.degree
    prod = [Fraction(0)] * (2 * D - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                if y:
                    prod[i + j] += x * y
    return EtaleElement(a.modulus, tuple(reduce_mod(prod, a.modulus)))


def trace(a):
    m = a.mult_matrix()
    return sum((m[i][i] for i in range(len(m))), Fraction(0))


def norm(a):
    """N_{L/Q}(a) = Res(f, a(x)) for monic f, computed in integers."""
    num, den = clear_denominators(a.coeffs)
    if not any(num):
        return Fraction(0)
    return Fraction(resultant(a.modulus, IntPoly(num)), den ** a.degree)


def fprime(f):
    f = _modulus_poly(f)
    return EtaleElement.from_poly(f, f.derivative())


@dataclass(frozen=True)
class AlphaClass:
    representative: EtaleElement
    norm_witness: object = None

    def __post_init__(self):
        if norm(self.representative) == 0:
            raise DomainError("alpha must be invertible", certificate=self.representative)
        if self.norm_witness is not None:
            w = Fraction(self.norm_witness)
            if w * w != norm(self.representative):
                raise DomainError("norm witness does not square to N(alpha)")
            object.__setattr__(self, "norm_witness", w)

    @classmethod
    def of(cls, alpha):
        if isinstance(alpha, AlphaClass):
            return alpha
        n = norm(alpha)
        return cls(alpha, rational_sqrt(n))


def gram_alpha(f, alpha):
    """G[i][j] = coefficient of b^(D-1) in alpha * b^(i+j)."""
    a = alpha.representative if isinstance(alpha, AlphaClass) else alpha
    fpoly = _modulus_poly(f)
    if a.modulus != fpoly:
        raise DomainError("alpha lives in a different algebra")
    if norm(a) == 0:
        raise DomainError("alpha must be invertible")
    D = fpoly.degree
    tops = []
    cur = list(a.coeffs)
    for _ in range(2 * D - 1):
        tops.append(cur[D - 1])
        cur = times_beta(cur, fpoly)
    return GramMatrix([[tops[i + j] for j in range(D)] for i in range(D)])


# ---------------------------------------------------------------------------
# square classes


@dataclass
class _Probe:
    p: int
    factors: list  # monic irreducible coefficient lists mod p

    def characters(self, b):
        """Quadratic characters of the integral element b in each residue field."""
        out = []
        for g in self.factors:
            q = self.p ** (len(g) - 1)
            r = mpowmod(mtrim(b, self.p), (q - 1) // 2, g, self.p)
            if r == [1]:
                out.append(1)
            elif r == [self.p - 1]:
                out.append(-1)
            else:
                raise DomainError("probe prime divides the element")
        return tuple(out)


def _integral(a):
    """An integer coefficient list in the same square class as a (a * den^2)."""
    num, den = clear_denominators(a.coeffs)
    return [x * den for x in num], den


def probe_primes(f, count, seed=0, avoid=1, lo=101, hi=4000):
    """``count`` odd primes not dividing disc(f) * avoid, chosen reproducibly from ``seed``."""
    f = _modulus_poly(f)
    disc = poly_discriminant(f)
    cands = [p for p in range(lo, hi) if isprime(p)]
    random.Random(seed).shuffle(cands)
    out = []
    for p in cands:
        if disc % p and avoid % p:
            out.append(p)
            if len(out) == count:
                break
    return out


def _make_probe(f, p):
    fl = factor_mod_p(f, p)
    if any(e > 1 for _, e in fl.factors):
        raise DomainError(f"{p} divides disc(f)")
    return _Probe(p, [list(g.coeffs) for g, _ in fl.factors])


def _fq_sqrt(a, g, p, rng):
    """Square root of a nonzero square a in F_p[x]/g (Tonelli-Shanks)."""
    q = p ** (len(g) - 1)
    s, t = 0, q - 1
    while t % 2 == 0:
        s += 1
        t //= 2
    deg = len(g) - 1
    while True:
        z = mtrim([rng.randrange(p) for _ in range(deg)], p)
        if z and mpowmod(z, (q - 1) // 2, g, p) == [p - 1]:
            break
    mulg = lambda u, v: mmod(mmul(u, v, p), g, p)
    m, c = s, mpowmod(z, t, g, p)
    tt = mpowmod(a, t, g, p)
    r = mpowmod(a, (t + 1) // 2, g, p)
    while tt != [1]:
        i, sq = 0, tt
        while sq != [1]:
            sq = mulg(sq, sq)
            i += 1
        b = c
        for _ in range(m - i - 1):
            b = mulg(b, b)
        m, c = i, mulg(b, b)
        tt = mulg(tt, c)
        r = mulg(r, b)
    return r


def _crt_idempotents(factors, f, p):
    out = []
    for g in factors:
        cof = mdivmod(f, g, p)[0]
        _, s, _ = mxgcd(cof, g, p)  # s*cof = 1 mod g
        out.append(mmod(mmul(s, cof, p), f, p))
    return out


def _ratrecon(u, m, bound):
    """r/s = u mod m with |r|, s <= bound, or None."""
    u %= m
    r0, r1 = m, u
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if (r1 - s1 * u) % m:
        return None
    return Fraction(r1, s1)


def _pmul_mod(a, b, f, m):
    """a*b reduced mod (f, m) with f monic integer coefficients."""
    prod = mmul(a, b, m)
    return mtrim(reduce_mod(prod, f) if len(prod) > f.degree else prod, m)


def _sqrt_from_probe(b, probe, f, bound, rng):
    """Try every square root of b mod p, lift p-adically, reconstruct over Q."""
    p = probe.p
    roots = [_fq_sqrt(mmod(mtrim(b, p), g, p), g, p, rng) for g in probe.factors]
    fmod = mtrim(list(f.coeffs), p)
    idem = _crt_idempotents(probe.factors, fmod, p)
    k, M = 1, p
    while M <= 2 * bound * bound:
        k += 1
        M *= p
    D = f.degree
    target = EtaleElement(f, tuple(b))
    signs = list(product((1, -1), repeat=len(roots) - 1))
    for sg in signs:
        gamma = []
        for r, e, s in zip(roots, idem, (1,) + sg):
            gamma = madd(gamma, mmul([s * x for x in r], e, p), p)
        gamma = mmod(gamma, fmod, p)
        # inverse of 2*gamma mod (f, p)
        _, inv, _ = mxgcd([2 * x for x in gamma], fmod, p)
        cur, Mk = gamma, p
        while Mk < M:
            sq = _pmul_mod(cur, cur, f, Mk * p)
            err = msub(list(b), sq, Mk * p)
            if any(x % Mk for x in err):
                raise AssertionError("Hensel invariant broken")
            c = [x // Mk for x in err]
            delta = mmod(mmul(inv, mtrim(c, p), p), fmod, p)
            cur = mtrim(padd_int(cur, [Mk * x for x in delta]), Mk * p)
            Mk *= p
        coeffs = []
        for x in cur + [0] * (D - len(cur)):
            r = _ratrecon(x, M, bound)
            if r is None:
                break
            coeffs.append(r)
        else:
            cand = EtaleElement(f, tuple(coeffs))
            if cand * cand == target:
                return cand
    return None


def padd_int(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


@dataclass
class SquareTest:
    verdict: object  # True, False or "inconclusive"
    witness: object = None  # square root when True
    reason: str = ""
    probes: list = field(default_factory=list)


def square_test(a, probes=None, seed=None, bound=DEFAULT_HEIGHT_BOUND, count=DEFAULT_PROBES):
    """Decide whether a is a square in L; see ``is_square_exact``."""
    f = a.modulus
    na = norm(a)
    if na == 0:
        raise DomainError("element is not invertible", certificate=a)
    if rational_sqrt(na) is None:
        return SquareTest(False, reason=f"norm {na} is not a rational square")
    b, den = _integral(a)
    nb = norm(EtaleElement(f, tuple(b)))
    avoid = nb.numerator * nb.denominator
    seed = default_seed() if seed is None else seed
    if probes is None:
        probes = probe_primes(f, count, seed, avoid=avoid)
    probes = [pr for pr in probes if avoid % pr]
    rng = random.Random(seed)
    built = []
    for p in probes:
        pr = _make_probe(f, p)
        chars = pr.characters(b)
        if -1 in chars:
            return SquareTest(False, reason=f"non-square residue modulo {p} (characters {chars})", probes=probes)
        built.append(pr)
    for pr in built[:1]:
        root = _sqrt_from_probe(b, pr, f, bound, rng)
        if root is not None:
            return SquareTest(True, witness=root / den, reason=f"lifted from p={pr.p}", probes=probes)
    return SquareTest("inconclusive", reason="no square root of bounded height found", probes=probes)


def is_square_exact(a, probes=None, seed=None, bound=DEFAULT_HEIGHT_BOUND):
    """True (verified exactly), False (norm or local obstruction) or ``"inconclusive"``."""
    return square_test(a, probes=probes, seed=seed, bound=bound).verdict


def candidate_multipliers(primes):
    """All +-1 * squarefree products of the given primes."""
    out = []
    primes = sorted(set(primes))
    for mask in range(1 << len(primes)):
        c = 1
        for i, p in enumerate(primes):
            if mask >> i & 1:
                c *= p
        out.extend([c, -c])
    out.sort(key=lambda c: (abs(c), c < 0))
    return out


@dataclass
class ClassComparison:
    verdict: str
    multiplier: object = None
    witness: object = None
    reason: str = ""
    probes: list = field(default_factory=list)
    seed: int = 0


def compare_classes(a, b, probes=None, seed=None, bound=DEFAULT_HEIGHT_BOUND):
    """Compare the images of a and b in L*/L*^2 Q*."""
    a = a.representative if isinstance(a, AlphaClass) else a
    b = b.representative if isinstance(b, AlphaClass) else b
    if a.modulus != b.modulus:
        raise DomainError("modulus mismatch")
    f = a.modulus
    seed = default_seed() if seed is None else seed
    q = a * b  # same class as a / b
    nq = norm(q)
    if nq == 0:
        raise DomainError("elements must be invertible")
    if rational_sqrt(nq) is None:
        return ClassComparison("distinct", reason=f"N(ab) = {nq} is not a square", seed=seed)
    qi, _ = _integral(q)
    ram = 2 * abs(poly_discriminant(f))
    for x in (norm(a), norm(b)):
        ram *= abs(x.numerator * x.denominator)
    primes = list(factorint(ram))
    if probes is None:
        probes = probe_primes(f, DEFAULT_PROBES, seed, avoid=ram)
    probes = [p for p in probes if ram % p]
    built = [_make_probe(f, p) for p in probes]
    for pr in built:
        chars = pr.characters(qi)
        unit_nonsq = tuple((-1) ** (len(g) - 1) for g in pr.factors)
        if chars != tuple(1 for _ in chars) and chars != unit_nonsq:
            return ClassComparison("distinct", reason=f"local characters {chars} at {pr.p} not explained by Q*",
                                   probes=probes, seed=seed)
    for c in candidate_multipliers(primes):
        qc = [x * c for x in qi]
        if any(-1 in pr.characters(qc) for pr in built):
            continue
        t = square_test(EtaleElement(f, tuple(qc)), probes=probes, seed=seed, bound=bound)
        if t.verdict is True:
            return ClassComparison("equal(exact)", multiplier=c, witness=t.witness,
                                   reason=f"a*b*{c} is a square", probes=probes, seed=seed)
    return ClassComparison("probably-equal", reason="locally indistinguishable, no exact certificate",
                           probes=probes, seed=seed)


def same_class_mod_squares_and_Q(a, b, probes=None, seed=None):
    return compare_classes(a, b, probes=probes, seed=seed).verdict
