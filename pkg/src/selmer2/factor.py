"""Factorization over F_p, Z/p^k (Hensel), Z (Zassenhaus) and Q(sqrt d) (Trager norms)."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import isprime

from .errors import DomainError
from .poly import (IntPoly, _coerce, clear_denominators, padd, pdivmod, pderiv,
                   pgcd, pmonic, pmul, poly_discriminant, psub, to_fractions, trim)
from .quadfield import QuadNumber, qpoly, qpoly_conj, qpoly_str


@dataclass(frozen=True)
class FactorList:
    """``unit * prod(g ** e for g, e in factors)`` in the ring named by ``modulus``.

    ``modulus`` is a prime ``p``, the string ``"Z"``, or ``("Q", d)`` for Q(sqrt d).
    ``precision`` is the exponent k when the factors are only valid mod p^k.
    Over Q(sqrt d) the factors are monic coefficient lists of ``QuadNumber``.
    """

    modulus: object
    factors: tuple
    unit: object = 1
    precision: int = 1
    irreducible: bool = field(default=False, compare=False)

    def degrees(self):
        return sorted(len(_coeffs(g)) - 1 for g, e in self.factors for _ in range(e))

    def pattern(self):
        """Multiset of factor degrees, with multiplicity, sorted."""
        return tuple(self.degrees())

    def has_odd_degree_factor(self):
        return any((len(_coeffs(g)) - 1) % 2 for g, _ in self.factors)

    def product(self):
        if isinstance(self.modulus, tuple):
            out = [QuadNumber(self.unit, 0, self.modulus[1])]
            for g, e in self.factors:
                for _ in range(e):
                    out = pmul(out, list(g))
            return out
        out = IntPoly((self.unit,))
        for g, e in self.factors:
            out = out * g ** e
        if self.modulus != "Z":
            m = self.modulus ** self.precision
            out = IntPoly(c % m for c in out.coeffs)
        return out

    def __str__(self):
        parts = []
        for g, e in self.factors:
            s = qpoly_str(g) if isinstance(self.modulus, tuple) else str(g)
            parts.append(f"({s})" + (f"^{e}" if e > 1 else ""))
        body = "*".join(parts) if parts else "1"
        return body if self.unit == 1 else f"{self.unit}*{body}"


def _coeffs(g):
    return g.coeffs if isinstance(g, IntPoly) else g


# ---------------------------------------------------------------------------
# arithmetic mod m on plain integer lists


def mtrim(a, m):
    a = [x % m for x in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def mmul(a, b, m):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return mtrim(out, m)


def madd(a, b, m):
    return mtrim(padd(a, b), m)


def msub(a, b, m):
    return mtrim(psub(a, b), m)


def mdivmod(a, b, m):
    """Division mod m; the leading coefficient of b must be a unit mod m."""
    b = mtrim(b, m)
    if not b:
        raise ZeroDivisionError("division by zero polynomial mod m")
    inv = pow(b[-1], -1, m)
    r = mtrim(a, m)
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], r
    q = [0] * (len(r) - db)
    while r and len(r) - 1 >= db:
        c = r[-1] * inv % m
        k = len(r) - 1 - db
        q[k] = c
        for i in range(db + 1):
            r[k + i] = (r[k + i] - c * b[i]) % m
        while r and r[-1] == 0:
            r.pop()
    return mtrim(q, m), r


def mmod(a, b, m):
    return mdivmod(a, b, m)[1]


def mmonic(a, p):
    a = mtrim(a, p)
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [x * inv % p for x in a]


def mgcd(a, b, p):
    a, b = mtrim(a, p), mtrim(b, p)
    while b:
        a, b = b, mmod(a, b, p)
    return mmonic(a, p)


def mxgcd(a, b, p):
    """Monic g with s*a + t*b = g over F_p."""
    r0, r1 = mtrim(a, p), mtrim(b, p)
    s0, s1, t0, t1 = [1], [], [], [1]
    while r1:
        q, r = mdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, msub(s0, mmul(q, s1, p), p)
        t0, t1 = t1, msub(t0, mmul(q, t1, p), p)
    inv = pow(r0[-1], -1, p)
    return [x * inv % p for x in r0], [x * inv % p for x in s0], [x * inv % p for x in t0]


def mpowmod(base, e, mod, p):
    out = [1]
    base = mmod(base, mod, p)
    while e:
        if e & 1:
            out = mmod(mmul(out, base, p), mod, p)
        base = mmod(mmul(base, base, p), mod, p)
        e >>= 1
    return out


def mderiv(a, p):
    return mtrim(pderiv(a), p)


def symmetric(a, m):
    """Residues in (-m/2, m/2]."""
    h = m // 2
    return trim([((x + h) % m) - h if m > 2 else x % m for x in a])


# ---------------------------------------------------------------------------
# F_p


def _check_prime(p):
    if not isinstance(p, int) or p < 2 or not isprime(p):
        raise DomainError(f"{p!r} is not a prime")


def _squarefree_decomposition_mod_p(f, p):
    """Monic f -> list of (squarefree monic g, multiplicity) with f = prod g^e."""
    out = []
    if len(f) <= 1:
        return out
    df = mderiv(f, p)
    if not df:
        # f is a p-th power: take p-th roots of coefficients (x -> x^p is the identity on F_p)
        root = [f[i] for i in range(0, len(f), p)]
        return [(g, e * p) for g, e in _squarefree_decomposition_mod_p(root, p)]
    c = mgcd(f, df, p)
    w = mdivmod(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = mgcd(w, c, p)
        z = mdivmod(w, y, p)[0]
        if len(z) > 1:
            out.append((mmonic(z, p), i))
        i += 1
        w = y
        c = mdivmod(c, y, p)[0]
    if len(c) > 1:
        root = [c[k] for k in range(0, len(c), p)]
        out.extend((g, e * p) for g, e in _squarefree_decomposition_mod_p(root, p))
    return out


def distinct_degree_factorization(f, p):
    """Squarefree monic f -> list of (product of all degree-k irreducible factors, k)."""
    out = []
    h = [0, 1]
    k = 0
    f = list(f)
    while len(f) - 1 >= 2 * (k + 1):
        k += 1
        h = mpowmod(h, p, f, p)
        g = mgcd(f, msub(h, [0, 1], p), p)
        if len(g) > 1:
            out.append((g, k))
            f = mdivmod(f, g, p)[0]
            h = mmod(h, f, p)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def equal_degree_split(f, k, p, rng):
    """Split a product of degree-k irreducibles into its monic factors (Cantor-Zassenhaus)."""
    deg = len(f) - 1
    if deg == k:
        return [f]
    while True:
        a = [rng.randrange(p) for _ in range(deg)]
        a = mtrim(a, p)
        if len(a) <= 1:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(k-1))
            t, cur = list(a), list(a)
            for _ in range(k - 1):
                cur = mmod(mmul(cur, cur, p), f, p)
                t = madd(t, cur, p)
            b = t
        else:
            b = msub(mpowmod(a, (p ** k - 1) // 2, f, p), [1], p)
        g = mgcd(f, b, p)
        if 1 < len(g) < len(f):
            rest = mdivmod(f, g, p)[0]
            return equal_degree_split(g, k, p, rng) + equal_degree_split(rest, k, p, rng)


def _sort_key(g):
    c = _coeffs(g)
    return (len(c), tuple(c))


def factor_mod_p(a, p, seed=0):
    """Complete factorization of ``a`` over F_p into monic irreducibles."""
    _check_prime(p)
    a = _coerce(a)
    f = mtrim(a.coeffs, p)
    if not f:
        raise DomainError(f"polynomial vanishes mod {p}")
    unit = f[-1]
    f = mmonic(f, p)
    rng = random.Random(seed)
    facs = {}
    for g, e in _squarefree_decomposition_mod_p(f, p):
        for prod, k in distinct_degree_factorization(g, p):
            for h in equal_degree_split(prod, k, p, rng):
                key = tuple(h)
                facs[key] = facs.get(key, 0) + e
    factors = sorted(((IntPoly(k), e) for k, e in facs.items()), key=lambda t: _sort_key(t[0]))
    return FactorList(p, tuple(factors), unit, 1)


def is_irreducible_mod_p(a, p):
    """Rabin test: monic squarefree f of degree D is irreducible iff x^(p^D) = x and no smaller split."""
    f = mmonic(_coerce(a).coeffs, p)
    D = len(f) - 1
    if D <= 0:
        return False
    if D == 1:
        return True
    for q in set(_prime_divisors(D)):
        h = mpowmod([0, 1], p ** (D // q), f, p)
        if len(mgcd(f, msub(h, [0, 1], p), p)) > 1:
            return False
    return mpowmod([0, 1], p ** D, f, p) == mtrim([0, 1], p)


def _prime_divisors(n):
    out, q = [], 2
    while q * q <= n:
        while n % q == 0:
            out.append(q)
            n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


def degree_pattern_mod_p(a, p):
    """Sorted irreducible-factor degrees of a squarefree-mod-p polynomial, by DDF only."""
    f = mmonic(_coerce(a).coeffs, p)
    out = []
    for prod, k in distinct_degree_factorization(f, p):
        out.extend([k] * ((len(prod) - 1) // k))
    return tuple(sorted(out))


# lean degree patterns for bulk classification (plain int lists, high-first)


def _hrem(a, f, p):
    """a mod f over F_p; high-first lists, f monic."""
    a = a[:]
    df = len(f) - 1
    for i in range(len(a) - df):
        c = a[i] % p
        if c:
            for j in range(1, df + 1):
                a[i + j] -= c * f[j]
    r = [x % p for x in a[len(a) - df:]] if df else []
    return r


def _hmulmod(a, b, f, p):
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    if len(prod) < len(f):
        return [x % p for x in prod]
    return _hrem(prod, f, p)


def _hstrip(a):
    i = 0
    while i < len(a) and a[i] == 0:
        i += 1
    return a[i:]


def _hgcd(a, b, p):
    a, b = _hstrip(a), _hstrip(b)
    while b:
        inv = pow(b[0], p - 2, p)
        b = [x * inv % p for x in b]
        a = _hstrip(_hrem(a, b, p)) if len(a) >= len(b) else a
        a, b = b, a
    if a:
        inv = pow(a[0], p - 2, p)
        a = [x * inv % p for x in a]
    return a


def _hdivexact(a, b, p):
    a = a[:]
    q = []
    db = len(b) - 1
    for i in range(len(a) - db):
        c = a[i] % p
        q.append(c)
        if c:
            for j in range(1, db + 1):
                a[i + j] -= c * b[j]
    return q


def frobenius_pattern(high, p):
    """Factor degrees of a monic polynomial over F_p (high-first coefficients), or None if not squarefree."""
    f = [x % p for x in high]
    D = len(f) - 1
    der = _hstrip([(D - i) * f[i] % p for i in range(D)])
    if len(_hgcd(f, der, p)) > 1:
        return None
    out = []
    h = [1, 0]
    k = 0
    while len(f) - 1 >= 2 * (k + 1):
        k += 1
        # h <- h^p mod f
        e, base, acc = p, (h if len(h) < len(f) else _hrem(h, f, p)), [1]
        while e:
            if e & 1:
                acc = _hmulmod(acc, base, f, p)
            e >>= 1
            if e:
                base = _hmulmod(base, base, f, p)
        h = acc
        hx = h[:] if len(h) >= 2 else [0] * (2 - len(h)) + h
        hx[-2] -= 1
        g = _hgcd(f, hx, p)
        dg = len(g) - 1
        if dg:
            out.extend([k] * (dg // k))
            f = _hdivexact(f, g, p)
            h = _hrem(h, f, p) if len(h) >= len(f) else h
    if len(f) > 1:
        out.append(len(f) - 1)
    return tuple(sorted(out))


# ---------------------------------------------------------------------------
# Hensel lifting


def _hensel_step(f, g, h, s, t, m):
    """One quadratic lifting step from modulus m to m^2 for monic f = g*h (h monic)."""
    M = m * m
    e = msub(f, mmul(g, h, M), M)
    q, r = mdivmod(mmul(s, e, M), h, M)
    g2 = madd(madd(g, mmul(t, e, M), M), mmul(q, g, M), M)
    h2 = madd(h, r, M)
    b = msub(madd(mmul(s, g2, M), mmul(t, h2, M), M), [1], M)
    c, d = mdivmod(mmul(s, b, M), h2, M)
    s2 = msub(s, d, M)
    t2 = msub(msub(t, mmul(t, b, M), M), mmul(c, g2, M), M)
    return g2, h2, s2, t2


def _lift_two(f, g, h, p, k):
    """Lift monic f = g*h mod p to mod p^k, returning (g_k, h_k)."""
    one, s, t = mxgcd(g, h, p)
    if one != [1]:
        raise DomainError("factors are not coprime mod p", certificate=(IntPoly(g), IntPoly(h)))
    m = p
    while m < p ** k:
        g, h, s, t = _hensel_step(f, g, h, s, t, m)
        m = m * m
    M = p ** k
    return mtrim(g, M), mtrim(h, M)


def hensel_lift(a, p, coprime_factors, precision):
    """Lift a factorization of ``a`` mod p (pairwise coprime monic factors) to mod p^precision."""
    _check_prime(p)
    a = _coerce(a)
    if isinstance(coprime_factors, FactorList):
        gs = [list(_coeffs(g)) for g, e in coprime_factors.factors for _ in range(e)]
    else:
        gs = [list(_coerce(g).coeffs) for g in coprime_factors]
    gs = [mmonic(g, p) for g in gs]
    k = int(precision)
    lc = a.lc
    if lc % p == 0:
        raise DomainError(f"leading coefficient divisible by {p}")
    M = p ** k
    f = mtrim([c * pow(lc, -1, M) for c in a.coeffs], M)
    prod = [1]
    for g in gs:
        prod = mmul(prod, g, p)
    if prod != mmonic(a.coeffs, p):
        raise DomainError("factors do not multiply to the input mod p")
    for i, j in itertools.combinations(range(len(gs)), 2):
        if len(mgcd(gs[i], gs[j], p)) > 1:
            raise DomainError("factors are not coprime mod p", certificate=(IntPoly(gs[i]), IntPoly(gs[j])))
    lifted = []
    rest = f
    for idx, g in enumerate(gs[:-1]):
        others = [1]
        for h in gs[idx + 1:]:
            others = mmul(others, h, p)
        gk, hk = _lift_two(rest, g, others, p, k)
        lifted.append(gk)
        rest = hk
    lifted.append(rest if gs else [])
    factors = tuple((IntPoly(symmetric(g, M)), 1) for g in lifted if g)
    return FactorList(p, factors, lc, k)


# ---------------------------------------------------------------------------
# Z


def squarefree_decomposition_Q(a):
    """Yun's algorithm over Q; returns [(primitive IntPoly, multiplicity)]."""
    f = pmonic(to_fractions(_coerce(a).coeffs))
    out = []
    if len(f) <= 1:
        return out
    df = pderiv(f)
    c = pgcd(f, df)
    w = pdivmod(f, c)[0]
    y = pdivmod(df, c)[0]
    i = 1
    while len(w) > 1:
        z = psub(y, pderiv(w))
        g = pgcd(w, z)
        if len(g) > 1:
            out.append((IntPoly(clear_denominators(g)[0]).primitive(), i))
        w = pdivmod(w, g)[0]
        y = pdivmod(z, g)[0]
        i += 1
    return out


def _good_primes(a, count):
    disc = poly_discriminant(a) if a.degree >= 1 else 1
    lc = a.lc
    out, p = [], 2
    while len(out) < count:
        if isprime(p) and disc % p and lc % p:
            out.append(p)
        p += 1
    return out


def _factor_squarefree_Z(a):
    """a primitive squarefree with positive lc -> list of irreducible primitive factors."""
    if a.degree <= 1:
        return [a]
    best = None
    for p in _good_primes(a, 6):
        fl = factor_mod_p(a, p)
        if best is None or len(fl.factors) < len(best[1].factors):
            best = (p, fl)
        if len(fl.factors) == 1:
            return [a]
    p, fl = best
    norm2 = math.isqrt(sum(c * c for c in a.coeffs)) + 1
    B = abs(a.lc) * 2 ** a.degree * norm2
    k = 1
    while p ** k <= 2 * B:
        k += 1
    lifted = [list(g.coeffs) for g, _ in hensel_lift(a, p, fl, k).factors]
    M = p ** k
    found = []
    f = a
    s = 1
    while 2 * s <= len(lifted):
        hit = False
        for subset in itertools.combinations(range(len(lifted)), s):
            g = [f.lc % M]
            for i in subset:
                g = mmul(g, lifted[i], M)
            cand = IntPoly(symmetric(g, M)).primitive()
            if cand.divides(f):
                found.append(cand)
                f = f.exact_div(cand)
                if f.lc < 0:
                    f = -f
                lifted = [lifted[i] for i in range(len(lifted)) if i not in subset]
                hit = True
                break
        if not hit:
            s += 1
    found.append(f)
    return found


def factor_over_Z(a):
    """Irreducible factorization over Z: ``unit * prod g^e`` with primitive g, positive lc."""
    a = _coerce(a)
    if a.is_zero():
        raise DomainError("cannot factor the zero polynomial")
    unit = a.content() * (1 if a.lc > 0 else -1)
    prim = a.primitive()
    facs = []
    if prim.degree >= 1:
        for g, e in squarefree_decomposition_Q(prim):
            for h in _factor_squarefree_Z(g):
                facs.append((h, e))
    facs.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    return FactorList("Z", tuple(facs), unit, 1, irreducible=len(facs) == 1 and facs[0][1] == 1)


def has_odd_degree_factor_Q(a):
    return factor_over_Z(a).has_odd_degree_factor()


# ---------------------------------------------------------------------------
# Q(sqrt d)


def _qshift(a, d, s):
    """a(x - s*sqrt d) as a list of QuadNumber."""
    lin = [QuadNumber(0, -s, d), QuadNumber(1, 0, d)]
    out = []
    for c in reversed(qpoly(list(a), d)):
        out = padd(pmul(out, lin), [c])
    return out


def factor_over_quadratic(a, d):
    """Factor an (over Q) squarefree polynomial over Q(sqrt d) by Trager's norm method."""
    a = _coerce(a)
    if d == 0 or (d > 0 and math.isqrt(d) ** 2 == d):
        raise DomainError(f"{d} is a square; Q(sqrt {d}) is not a quadratic field")
    for s in itertools.count(0):
        shifted = _qshift(a.coeffs, d, s)
        norm = pmul(shifted, qpoly_conj(shifted))
        norm = qpoly(norm, d)
        if any(not c.is_rational() for c in norm):
            raise AssertionError("norm polynomial not rational")
        N = IntPoly(clear_denominators([c.a for c in norm])[0])
        if N.degree >= 1 and poly_discriminant(N) != 0:
            break
        if s > 50:
            raise DomainError("no squarefree norm shift found (input not squarefree?)")
    fl = factor_over_Z(N)
    factors = []
    back = [QuadNumber(0, s, d), QuadNumber(1, 0, d)]  # x -> x + s sqrt d
    for g, _ in fl.factors:
        h = pgcd(shifted, qpoly(to_fractions(g.coeffs), d))
        if len(h) <= 1:
            continue
        out = []
        for c in reversed(h):
            out = padd(pmul(out, back), [c])
        factors.append(tuple(qpoly(pmonic(out), d)))
    factors.sort(key=lambda h: (len(h), [(c.a, c.b) for c in h]))
    unit = Fraction(a.lc)
    return FactorList(("Q", d), tuple((h, 1) for h in factors), unit, 1,
                      irreducible=len(factors) == 1)
