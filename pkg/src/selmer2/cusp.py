"""Torus weights of the coordinates b_ij and exponents of the cusp integrals I(U_1, X).

Coordinates are 1-indexed pairs (i, j), i <= j, of B = A T.  The torus acts via
lambda_k = t_k^-1 (k <= n+1) and lambda_(2n+3-k) = t_k, and b_ij scales by
lambda_i lambda_j.  Exponents are reported in s_i = t_i/t_(i+1) (i <= n) and
s_(n+1) = t_n t_(n+1), where they may be half-integers.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError


@dataclass(frozen=True)
class WeightExponent:
    n: int
    t_exponents: tuple
    s_doubled: tuple  # 2 * (exponents of s_1..s_(n+1))

    @property
    def s_exponents(self):
        return tuple(Fraction(x, 2) for x in self.s_doubled)

    def __mul__(self, other):
        return WeightExponent(self.n, tuple(a + b for a, b in zip(self.t_exponents, other.t_exponents)),
                              tuple(a + b for a, b in zip(self.s_doubled, other.s_doubled)))

    def inverse(self):
        return WeightExponent(self.n, tuple(-a for a in self.t_exponents), tuple(-a for a in self.s_doubled))

    def is_trivial(self):
        return not any(self.t_exponents)

    def __str__(self):
        parts = [f"s{k + 1}^{e}" for k, e in enumerate(self.s_exponents) if e]
        return "*".join(parts) or "1"


def s_to_t(n, s_exps):
    """t-exponents of prod s_k^(a_k)."""
    e = [Fraction(0)] * (n + 1)
    for i in range(n):
        e[i] += s_exps[i]
        e[i + 1] -= s_exps[i]
    e[n - 1] += s_exps[n]
    e[n] += s_exps[n]
    return e


def t_to_s(n, t_exps):
    """Inverse of s_to_t, solved by back substitution.

    s_to_t gives e_1 = a_1, e_k = a_k - a_(k-1) (2 <= k <= n-1), e_n = a_n - a_(n-1) + a_(n+1),
    e_(n+1) = a_(n+1) - a_n.
    """
    e = [Fraction(x) for x in t_exps]
    a = [Fraction(0)] * (n + 1)
    for k in range(n - 1):
        a[k] = e[k] + (a[k - 1] if k else 0)
    prev = a[n - 2] if n >= 2 else Fraction(0)
    # a_n + a_(n+1) = e_n + a_(n-1);  a_(n+1) - a_n = e_(n+1)
    tot = e[n - 1] + prev
    a[n] = (tot + e[n]) / 2
    a[n - 1] = (tot - e[n]) / 2
    return a


def _make(n, t_exps):
    s = t_to_s(n, t_exps)
    if s_to_t(n, s) != [Fraction(x) for x in t_exps]:
        raise AssertionError("t/s conversion mismatch")
    return WeightExponent(n, tuple(int(x) for x in t_exps), tuple(int(2 * x) for x in s))


def _lambda(k, n):
    """t-exponent vector of lambda_k, k in 1..2n+2."""
    v = [0] * (n + 1)
    if k <= n + 1:
        v[k - 1] = -1
    else:
        v[2 * n + 2 - k] = 1
    return v


def weight(i, j, n):
    D = 2 * n + 2
    if not (1 <= i <= j <= D):
        raise DomainError(f"coordinate ({i},{j}) out of range for n = {n}")
    li, lj = _lambda(i, n), _lambda(j, n)
    return _make(n, [a + b for a, b in zip(li, lj)])


def haar_exponent(n):
    """delta(s) = prod_{j<n} s_j^(j(j-2n-1)) * (s_n s_(n+1))^(-n(n+1)/2)."""
    if n < 1:
        raise DomainError("n >= 1")
    s = [Fraction(j * (j - 2 * n - 1)) for j in range(1, n)]
    s += [Fraction(-n * (n + 1), 2)] * 2
    t = s_to_t(n, s)
    return WeightExponent(n, tuple(int(x) for x in t), tuple(int(2 * x) for x in s))


def all_coordinates(n):
    D = 2 * n + 2
    return [(i, j) for i in range(1, D + 1) for j in range(i, D + 1)]


def u0(n):
    """Coordinates strictly left of the off-anti-diagonal: i <= j, i + j <= 2n+1."""
    return frozenset((i, j) for i, j in all_coordinates(n) if i + j <= 2 * n + 1)


@dataclass(frozen=True)
class CuspSet:
    n: int
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        extra = self.members - u0(self.n)
        if extra:
            raise DomainError(f"coordinates outside U_0: {sorted(extra)}")

    def is_saturated(self):
        return all(p in self.members for c in self.members for p in _lower_covers(c))

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class ExponentResult:
    n: int
    exponent: Fraction  # power of X
    log_degree: int
    integrand: tuple  # exponents of s_1..s_(n+1)

    @property
    def d(self):
        return (2 * self.n + 2) * (2 * self.n + 1)


def cusp_exponent(U1):
    """Growth exponent of I(U_1, X) = X^(-#U_1/d) * int prod_{U_1} w^-1 delta(s) d^x s
    over c < s_i < X^(1/d) (i <= n), c < s_(n+1) < X^(2/d)."""
    n = U1.n
    d = (2 * n + 2) * (2 * n + 1)
    integ = haar_exponent(n)
    for (i, j) in U1.members:
        integ = integ * weight(i, j, n).inverse()
    a = integ.s_exponents
    exp = Fraction(-len(U1.members), d)
    logs = 0
    for k, ak in enumerate(a):
        rng = Fraction(2 if k == n else 1, d)
        if ak > 0:
            exp += rng * ak
        elif ak == 0:
            logs += 1
    return ExponentResult(n, exp, logs, tuple(a))


def _lower_covers(c):
    i, j = c
    out = []
    if i > 1:
        out.append((i - 1, j))
    if j > i:
        out.append((i, j - 1))
    return out


def saturated_subsets(n):
    """All down-closed subsets of U_0 under (i', j') <= (i, j) componentwise."""
    order = sorted(u0(n), key=lambda c: (c[0] + c[1], c[0]))
    out = []

    def rec(k, cur):
        if k == len(order):
            out.append(frozenset(cur))
            return
        c = order[k]
        rec(k + 1, cur)
        if all(p in cur for p in _lower_covers(c)):
            cur.add(c)
            rec(k + 1, cur)
            cur.remove(c)

    rec(0, set())
    return out


def all_subsets(n):
    from itertools import combinations

    elems = sorted(u0(n))
    for r in range(len(elems) + 1):
        for comb in combinations(elems, r):
            yield frozenset(comb)


@dataclass
class CuspReport:
    n: int
    subsets_checked: int
    passed: bool
    max_exponent: Fraction  # over nonempty proper subsets
    witness: tuple
    boundary: dict
    failures: list

    def to_json(self):
        return {"n": self.n, "subsets_checked": self.subsets_checked, "passed": self.passed,
                "max_exponent": str(self.max_exponent), "bound": str(Fraction(-1, (2 * self.n + 2) * (2 * self.n + 1))),
                "witness": [list(c) for c in self.witness],
                "boundary": {k: {"exponent": str(v.exponent), "log_degree": v.log_degree}
                             for k, v in self.boundary.items()},
                "failures": [[list(c) for c in f] for f in self.failures[:10]]}


def verify_cusp_lemma(n, every_subset=False):
    """exponent <= -1/d for every nonempty proper (saturated) U_1 in U_0; 0 for the empty set and U_0."""
    if n < 1 or n > 4:
        raise DomainError("verify_cusp_lemma supports 1 <= n <= 4")
    if every_subset and n > 3:
        raise DomainError("exhaustive subsets only for n <= 3")
    d = (2 * n + 2) * (2 * n + 1)
    full = u0(n)
    subsets = all_subsets(n) if every_subset else saturated_subsets(n)
    checked, best, witness, failures = 0, None, (), []
    for s in subsets:
        checked += 1
        if not s or s == full:
            continue
        r = cusp_exponent(CuspSet(n, s))
        if best is None or r.exponent > best:
            best, witness = r.exponent, tuple(sorted(s))
        if r.exponent > Fraction(-1, d):
            failures.append(tuple(sorted(s)))
    boundary = {"empty": cusp_exponent(CuspSet(n, ())), "U0": cusp_exponent(CuspSet(n, full))}
    ok = not failures and all(v.exponent == 0 for v in boundary.values())
    return CuspReport(n, checked, ok, best, witness, boundary, failures)


DISPLAYED = ("b_11", "anti-diagonal", "above anti-diagonal", "b_(n+1)(n+1)")


def displayed_weights(n):
    """Closed forms of the four displayed weight families, as doubled s-exponent vectors."""
    out = {}
    v = [-4] * (n - 1) + [-2, -2]
    out[(1, 1)] = tuple(v)
    for i in range(1, n + 2):
        out[(i, 2 * n + 3 - i)] = tuple([0] * (n + 1))
    for i in range(1, n + 1):
        v = [0] * (n + 1)
        v[i - 1] = -2
        out[(i, 2 * n + 2 - i)] = tuple(v)
    v = [0] * (n + 1)
    v[n - 1] = 2
    v[n] = -2
    out[(n + 1, n + 1)] = tuple(v)
    return out


def weight_table(n):
    """Rows (i, j, s-exponents, matches-displayed or None) for all coordinates i <= j."""
    disp = displayed_weights(n)
    rows = []
    for (i, j) in all_coordinates(n):
        w = weight(i, j, n)
        rows.append((i, j, w.s_exponents, None if (i, j) not in disp else disp[(i, j)] == w.s_doubled))
    return rows
