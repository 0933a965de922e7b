"""Height-ordered enumeration of invariants, minimality, and empirical densities."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorint, integer_nthroot, isprime, mobius

from .errors import DomainError, Refusal
from .factor import factor_mod_p
from .orbits import DistinguishedClassifier
from .poly import CurveInvariants, IntPoly, height_below, poly_discriminant, real_root_count

DEFAULT_BUDGET = 10 ** 6


@dataclass
class EnumerationTask:
    n: int
    X: object  # height bound, H(c) < X
    minimal: bool = False
    squarefree_disc: bool = False
    nonzero_disc: bool = True
    congruences: dict = field(default_factory=dict)  # k -> (modulus, allowed residues)
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        self.X = Fraction(self.X)
        if self.X < 1:
            raise DomainError("height bound must be >= 1")
        if self.n < 1:
            raise DomainError("n >= 1")
        for k, (m, res) in self.congruences.items():
            if m <= 0:
                raise DomainError("congruence moduli must be positive")
            if not 2 <= k <= 2 * self.n + 2:
                raise DomainError(f"no coefficient c_{k}")

    @property
    def d(self):
        return (2 * self.n + 2) * (2 * self.n + 1)


def coefficient_bound(n, X, k):
    """Largest integer b >= 0 with b^d < X^k (so |c_k| <= b iff |c_k|^(d/k) < X)."""
    X = Fraction(X)
    d = (2 * n + 2) * (2 * n + 1)
    p, q = X.numerator, X.denominator
    # b^d q^k < p^k; start from the integer root of p^k // q^k and adjust
    b, _ = integer_nthroot(p ** k // q ** k, d)
    b = int(b) + 1
    while b > 0 and b ** d * q ** k >= p ** k:
        b -= 1
    return b


def coefficient_ranges(n, X):
    return [coefficient_bound(n, X, k) for k in range(2, 2 * n + 3)]


def box_count(n, X):
    out = 1
    for b in coefficient_ranges(n, X):
        out *= 2 * b + 1
    return out


def height_bound_for_budget(n, budget):
    """Largest integer X whose box {H(c) < X} holds at most ``budget`` tuples."""
    if box_count(n, 2) > budget:
        raise Refusal("budget too small for any nontrivial box", certificate={"box_count": box_count(n, 2)})
    lo, hi = 1, 2
    while box_count(n, hi) <= budget:
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if box_count(n, mid) <= budget:
            lo = mid
        else:
            hi = mid
    return lo


def exact_height(c, n):
    """H(c) = max |c_k|^(d/k) as an exact rational when integral, else the float."""
    d = (2 * n + 2) * (2 * n + 1)
    best = 0
    for k, ck in enumerate(c, start=2):
        if ck == 0:
            continue
        if d % k == 0:
            h = abs(ck) ** (d // k)
        else:
            h = abs(ck) ** (d / k)
        best = max(best, h)
    return best


def height_sort_key(c, n):
    """Key that orders tuples by H(c); compares |c_k|^(d/k) through the exact power |c_k|^d^(1/k)."""
    d = (2 * n + 2) * (2 * n + 1)
    L = math.lcm(*range(2, 2 * n + 3))
    # H^L = max |c_k|^(dL/k), integral
    return max((abs(ck) ** (d * L // k) for k, ck in enumerate(c, start=2)), default=0)


def _passes(task, c):
    for k, (m, res) in task.congruences.items():
        if c[k - 2] % m not in res:
            return False
    f = CurveInvariants(task.n, tuple(c)).f
    if task.nonzero_disc or task.squarefree_disc:
        disc = poly_discriminant(f)
        if disc == 0:
            return False
        if task.squarefree_disc and any(e > 1 for e in factorint(abs(disc)).values()):
            return False
    if task.minimal and minimality_sieve(CurveInvariants(task.n, tuple(c))) != "minimal":
        return False
    return True


def iter_box(n, X, c2_range=None):
    ranges = coefficient_ranges(n, X)
    axes = [range(-b, b + 1) for b in ranges]
    if c2_range is not None:
        axes[0] = range(max(-ranges[0], c2_range[0]), min(ranges[0], c2_range[1]) + 1)
    return itertools.product(*axes)


def enumerate_invariants(task, c2_range=None):
    """All tuples c_2..c_(2n+2) with H(c) < X passing the filters, in lexicographic order."""
    total = box_count(task.n, task.X)
    if total > task.budget:
        raise Refusal(f"box of {total} tuples exceeds the budget {task.budget}",
                      certificate={"box_count": total, "budget": task.budget})
    for c in iter_box(task.n, task.X, c2_range):
        if _passes(task, c):
            yield CurveInvariants(task.n, c)


# ---------------------------------------------------------------------------
# minimality and rescaling


def _prime_candidates(c):
    nz = [abs(x) for x in c if x]
    if not nz:
        return []
    g = 0
    for x in nz:
        g = math.gcd(g, x)
    return sorted(factorint(g))


def minimality_sieve(c):
    """"minimal", or the reduced invariants after dividing c_i by p^(2i) while possible.

    Only c_2..c_(2n+2) are constrained; c_1 = 0 by the trace-zero convention.
    """
    coeffs = list(c.c)
    changed = False
    for p in _prime_candidates(coeffs):
        while all(ck % p ** (2 * k) == 0 for k, ck in enumerate(coeffs, start=2)):
            if not any(coeffs):
                break
            coeffs = [ck // p ** (2 * k) for k, ck in enumerate(coeffs, start=2)]
            changed = True
    return CurveInvariants(c.n, tuple(coeffs)) if changed else "minimal"


def minimal_model(c):
    r = minimality_sieve(c)
    return c if r == "minimal" else r


def rescale_for_integrality(c):
    """c_i -> 2^(4i) c_i."""
    return CurveInvariants(c.n, tuple(ck * 2 ** (4 * k) for k, ck in enumerate(c.c, start=2)))


# ---------------------------------------------------------------------------
# necklace counts and factorization types mod p


def necklace(p, k):
    """Number of monic irreducible polynomials of degree k over F_p."""
    return sum(mobius(e) * p ** (k // e) for e in range(1, k + 1) if k % e == 0) // k


def _partitions(D, largest=None):
    largest = D if largest is None else largest
    if D == 0:
        yield ()
        return
    for k in range(min(D, largest), 0, -1):
        for rest in _partitions(D - k, k):
            yield (k,) + rest


def predicted_type_counts(p, D, squarefree):
    """Number of monic degree-D polys over F_p by multiset of irreducible-factor degrees.

    With squarefree=True the factors are distinct: prod C(M(p,k), m_k); otherwise
    repeated factors are allowed: prod C(M(p,k) + m_k - 1, m_k).
    """
    out = {}
    for lam in _partitions(D):
        mult = Counter(lam)
        total = 1
        for k, m in mult.items():
            M = necklace(p, k)
            total *= math.comb(M, m) if squarefree else math.comb(M + m - 1, m)
        out[lam] = total
    return out


def _type_with_multiplicity(fl):
    return tuple(sorted(fl.degrees(), reverse=True))


@dataclass
class TypeCensus:
    p: int
    D: int
    total: int
    all_types: dict  # partition -> count (repeated factors allowed)
    squarefree_types: dict
    predicted_all: dict
    predicted_squarefree: dict

    def agrees(self):
        keys = set(self.predicted_all) | set(self.all_types)
        ok_all = all(self.all_types.get(k, 0) == self.predicted_all.get(k, 0) for k in keys)
        keys = set(self.predicted_squarefree) | set(self.squarefree_types)
        ok_sf = all(self.squarefree_types.get(k, 0) == self.predicted_squarefree.get(k, 0) for k in keys)
        return ok_all and ok_sf

    def to_json(self):
        fmt = lambda d: {",".join(map(str, k)): v for k, v in sorted(d.items(), reverse=True)}
        return {"p": self.p, "degree": self.D, "total": self.total, "observed": fmt(self.all_types),
                "predicted": fmt(self.predicted_all), "observed_squarefree": fmt(self.squarefree_types),
                "predicted_squarefree": fmt(self.predicted_squarefree), "agree": self.agrees()}


def factorization_type_census(p, n):
    """Factor every monic polynomial of degree 2n+2 over F_p (p^(2n+2) of them)."""
    if not isprime(p):
        raise DomainError(f"{p} is not prime")
    D = 2 * n + 2
    if p ** D > 10 ** 6:
        raise Refusal(f"{p ** D} polynomials exceed the census limit", certificate={"count": p ** D})
    all_types, sf_types = Counter(), Counter()
    for low in itertools.product(range(p), repeat=D):
        fl = factor_mod_p(IntPoly(tuple(low) + (1,)), p)
        t = _type_with_multiplicity(fl)
        all_types[t] += 1
        if all(e == 1 for _, e in fl.factors):
            sf_types[t] += 1
    return TypeCensus(p, D, p ** D, dict(all_types), dict(sf_types),
                      predicted_type_counts(p, D, False), predicted_type_counts(p, D, True))


# ---------------------------------------------------------------------------
# density reports

PROPERTY_TAGS = ("distinguished2", "squarefree-disc", "real-roots", "factorization-type", "j2-local")


def parse_property(tag):
    """'distinguished2', 'squarefree-disc', 'real-roots', 'factorization-type:p[:k,k,..]', 'j2-local:p'."""
    parts = tag.split(":")
    name = parts[0]
    if name not in PROPERTY_TAGS:
        raise DomainError(f"unknown property {tag!r}; choose from {', '.join(PROPERTY_TAGS)}")
    args = parts[1:]
    if name in ("factorization-type", "j2-local"):
        if not args:
            raise DomainError(f"{name} needs a prime, e.g. {name}:3")
        args = [int(args[0])] + ([tuple(int(x) for x in args[1].split(","))] if len(args) > 1 else [])
    return name, args


@dataclass
class DensityReport:
    n: int
    X: Fraction
    total: int
    counts: dict  # property -> Counter of values
    predictions: dict = field(default_factory=dict)
    partition: list = field(default_factory=list)
    fallbacks: int = 0

    def fraction(self, prop, value):
        if not self.total:
            return Fraction(0)
        return Fraction(self.counts[prop].get(value, 0), self.total)

    def to_json(self):
        out = {"schema_version": 1, "n": self.n, "X": str(self.X), "total": self.total, "properties": {}}
        for prop, cnt in self.counts.items():
            out["properties"][prop] = {str(k): {"count": v, "fraction": str(Fraction(v, self.total) if self.total else 0)}
                                       for k, v in sorted(cnt.items(), key=lambda kv: str(kv[0]))}
        if self.predictions:
            out["predictions"] = {p: {str(k): str(v) for k, v in d.items()} for p, d in self.predictions.items()}
        out["partition"] = self.partition
        out["exact_fallbacks"] = self.fallbacks
        return out


def _evaluate(prop, args, c, classifier):
    if prop == "distinguished2":
        return classifier.classify(c.c) == 2
    if prop == "squarefree-disc":
        return all(e == 1 for e in factorint(abs(c.discriminant())).values())
    if prop == "real-roots":
        return real_root_count(c.f)
    if prop == "factorization-type":
        p = args[0]
        if c.discriminant() % p == 0:
            return "bad"
        pat = tuple(sorted(factor_mod_p(c.f, p).pattern(), reverse=True))
        if len(args) > 1:
            return pat == tuple(sorted(args[1], reverse=True))
        return pat
    if prop == "j2-local":
        from .localdata import j2_local

        p = args[0]
        if p == 2 or c.discriminant() % p == 0:
            return "bad"
        return j2_local(c, p)
    raise DomainError(f"unknown property {prop!r}")


def _density_chunk(args):
    task, props, c2_range = args
    classifier = DistinguishedClassifier(task.n)
    parsed = [parse_property(p) for p in props]
    counts = {p: Counter() for p in props}
    total = 0
    for c in enumerate_invariants(task, c2_range):
        total += 1
        for tag, (name, a) in zip(props, parsed):
            counts[tag][_evaluate(name, a, c, classifier)] += 1
    return total, counts, classifier.fallbacks


def _c2_partition(n, X, jobs):
    b = coefficient_bound(n, X, 2)
    vals = list(range(-b, b + 1))
    jobs = max(1, min(jobs, len(vals)))
    size = -(-len(vals) // jobs)
    return [(vals[i], vals[min(len(vals), i + size) - 1]) for i in range(0, len(vals), size)]


def density_report(task, properties, jobs=1):
    props = list(properties)
    for p in props:
        parse_property(p)
    total_box = box_count(task.n, task.X)
    if total_box > task.budget:
        raise Refusal(f"box of {total_box} tuples exceeds the budget {task.budget}",
                      certificate={"box_count": total_box, "budget": task.budget})
    parts = _c2_partition(task.n, task.X, jobs)
    work = [(task, props, r) for r in parts]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as ex:
            results = list(ex.map(_density_chunk, work))
    else:
        results = [_density_chunk(w) for w in work]
    total, fallbacks = 0, 0
    counts = {p: Counter() for p in props}
    for t, cnt, fb in results:
        total += t
        fallbacks += fb
        for p in props:
            counts[p].update(cnt[p])
    preds = {}
    for tag in props:
        name, a = parse_property(tag)
        if name == "factorization-type":
            sf = predicted_type_counts(a[0], 2 * task.n + 2, True)
            tot = sum(sf.values())
            preds[tag] = {k: Fraction(v, tot) for k, v in sf.items()}
    return DensityReport(task.n, task.X, total, {p: dict(c) for p, c in counts.items()}, preds,
                         [list(r) for r in parts], fallbacks)


# ---------------------------------------------------------------------------
# height-ordered distinguished-count trend


@dataclass
class TrendPoint:
    budget: int
    X: int
    box: int
    curves: int
    count2: int

    @property
    def fraction(self):
        return Fraction(self.count2, self.curves) if self.curves else Fraction(0)


def distinguished_trend(n, budgets, progress=None):
    """Fraction of curves with distinguished count 2 in the boxes sized by each budget.

    One pass over the largest box; each tuple is attributed to every smaller box it lies in.
    """
    budgets = sorted(budgets)
    Xs = [height_bound_for_budget(n, b) for b in budgets]
    classifier = DistinguishedClassifier(n)
    curves = [0] * len(budgets)
    twos = [0] * len(budgets)
    for idx, c in enumerate(iter_box(n, Xs[-1])):
        if progress and idx % 100000 == 0:
            progress(idx)
        first = next(i for i, X in enumerate(Xs) if height_below(c, n, X))
        v = classifier.classify(c)
        if v is None:
            continue
        for i in range(first, len(budgets)):
            curves[i] += 1
            twos[i] += v == 2
    pts = [TrendPoint(b, X, box_count(n, X), curves[i], twos[i]) for i, (b, X) in enumerate(zip(budgets, Xs))]
    return pts, classifier.fallbacks
