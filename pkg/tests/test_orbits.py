import itertools
import math
import random

import pytest
import sympy

from conftest import random_curve, sympy_poly
from selmer2.errors import DomainError
from selmer2.orbits import (CycleType, DistinguishedClassifier, SelfAdjointOp, construct_Tf,
                            distinguished_orbit_count, distinguished_shape_check, isotropic_span_witness, j2_dim_Q,
                            orbit_summary, quadratic_subfields, two_torsion_dim)
from selmer2.poly import CurveInvariants, parse_poly, poly_discriminant
from selmer2.stats import coefficient_ranges, height_bound_for_budget


def brute_two_torsion_dim(partition):
    """Oracle: vectors v in F_2^D with sum 0 and sigma(v) - v in {0, 1}, modulo <1>."""
    perm, start = [], 0
    for k in partition:
        perm += [start + (i + 1) % k for i in range(k)]
        start += k
    D = len(perm)
    count = 0
    for v in itertools.product((0, 1), repeat=D):
        if sum(v) % 2:
            continue
        w = [0] * D
        for i in range(D):
            w[perm[i]] = v[i]
        diff = {(a - b) % 2 for a, b in zip(w, v)}
        if len(diff) == 1:
            count += 1
    return int(math.log2(count // 2))


def test_construct_Tf_random():
    rng = random.Random(21)
    for _ in range(40):
        n = rng.randint(1, 3)
        c = random_curve(rng, n)
        T = construct_Tf(c)
        assert T.charpoly() == c.f
        assert T.is_self_adjoint()
        B = T.B()
        assert all(B[k][i] == 0 for k in range(n + 1) for i in range(n))
        assert distinguished_shape_check(T)


def test_construct_Tf_example_and_errors(f6p3):
    T = construct_Tf(f6p3)
    assert T.charpoly() == f6p3.f and T.is_self_adjoint()
    assert isotropic_span_witness(T)
    with pytest.raises(DomainError):
        construct_Tf(parse_poly("x^4-2*x^2+1"))


def test_shape_check_examples():
    A = [[int(i + j == 5) for j in range(6)] for i in range(6)]
    # B = A means T = A B = identity
    T = SelfAdjointOp(2, [[int(i == j) for j in range(6)] for i in range(6)])
    assert T.B() == A and distinguished_shape_check(T)
    B = [row[:] for row in A]
    B[0][0] = 1
    T2 = SelfAdjointOp(2, [list(B[5 - i]) for i in range(6)])
    assert T2.is_self_adjoint() and not distinguished_shape_check(T2)


@pytest.mark.parametrize("partition, expected", [
    ((1, 1, 1, 1, 1, 1), 4), ((6,), 0), ((2, 4), 1), ((2, 2, 2), 2),
    ((4,), 1), ((1, 1, 1, 1), 2), ((2, 2), 2), ((1, 1, 2), 1), ((1, 3), 0),
])
def test_two_torsion_dim_examples(partition, expected):
    assert brute_two_torsion_dim(partition) == expected
    assert two_torsion_dim(CycleType(partition)) == expected


def test_two_torsion_dim_all_partitions_up_to_8():
    def partitions(D, largest=None):
        largest = largest or D
        if D == 0:
            yield ()
            return
        for k in range(min(D, largest), 0, -1):
            for rest in partitions(D - k, k):
                yield (k,) + rest

    for D in (4, 6, 8):
        for lam in partitions(D):
            assert two_torsion_dim(CycleType(lam)) == brute_two_torsion_dim(lam)
            assert two_torsion_dim(CycleType(tuple(reversed(lam)))) == two_torsion_dim(CycleType(lam))


@pytest.mark.parametrize("text, count", [("x^6-1", 1), ("x^6+3", 1), ("x^6+x+1", 2), ("x^4+x+1", 2), ("x^6+2", 1)])
def test_distinguished_count_examples(text, count):
    assert distinguished_orbit_count(parse_poly(text)) == count


def _sympy_quadratic_subfields(f):
    """Oracle: d with every Q-factor of f splitting over Q(sqrt d) (sympy factorization)."""
    x = sympy.Symbol("x")
    expr = sympy_poly(f).as_expr()
    facs = [g for g, _ in sympy.factor_list(expr)[1]]
    if any(sympy.Poly(g, x).degree() % 2 for g in facs):
        return ()
    primes = sorted(sympy.factorint(abs(poly_discriminant(f))))
    out = []
    for mask in range(1 << len(primes)):
        base = math.prod(p for i, p in enumerate(primes) if mask >> i & 1)
        for d in (base, -base):
            if d == 1:
                continue
            if all(len(sympy.factor_list(g, extension=sympy.sqrt(d))[1]) >= 2 for g in facs):
                out.append(d)
    return tuple(sorted(out, key=lambda d: (abs(d), d)))


@pytest.mark.parametrize("text", ["x^6+3", "x^6+x+1", "x^4+1", "x^4+4", "x^4-2", "x^6+2", "x^4-10*x^2+1",
                                  "x^6-3*x^2-1", "x^6+6*x^4+9*x^2+27"])
def test_quadratic_subfields_match_sympy(text):
    f = parse_poly(text)
    assert tuple(sorted(quadratic_subfields(f), key=lambda d: (abs(d), d))) == _sympy_quadratic_subfields(f)


def test_j2_dim_Q_cyclic_galois_cases():
    # Galois group generated by one Frobenius-like element: j2 = two_torsion_dim of that cycle type
    assert j2_dim_Q(parse_poly("x^6-1")) == two_torsion_dim(CycleType((2, 2, 1, 1)))
    assert j2_dim_Q(parse_poly("x^4+4")) == two_torsion_dim(CycleType((2, 2)))
    assert j2_dim_Q(parse_poly("x^6+3")) == two_torsion_dim(CycleType((6,)))
    assert j2_dim_Q(parse_poly("x^4-5*x^2+4")) == 2
    s = orbit_summary(parse_poly("x^6+3"))
    assert s.quadratic_subfields == (-3,) and s.distinguished_count == 1


def test_classifier_matches_exact_route():
    rng = random.Random(4)
    cl = DistinguishedClassifier(2)
    X = height_bound_for_budget(2, 10 ** 5)
    R = coefficient_ranges(2, X)
    for _ in range(150):
        c = tuple(rng.randint(-r, r) for r in R)
        cu = CurveInvariants(2, c)
        exp = None if poly_discriminant(cu.f) == 0 else distinguished_orbit_count(cu)
        assert cl.classify(c) == exp
    cl1 = DistinguishedClassifier(1)
    for _ in range(100):
        c = tuple(rng.randint(-6, 6) for _ in range(3))
        cu = CurveInvariants(1, c)
        exp = None if poly_discriminant(cu.f) == 0 else distinguished_orbit_count(cu)
        assert cl1.classify(c) == exp
