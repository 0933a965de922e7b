import itertools
import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from selmer2.errors import Refusal
from selmer2.factor import is_irreducible_mod_p
from selmer2.poly import CurveInvariants, IntPoly, real_root_count, sturm_sequence
from selmer2.stats import (EnumerationTask, box_count, coefficient_bound, density_report,
                           enumerate_invariants, exact_height, factorization_type_census, height_bound_for_budget,
                           height_sort_key, minimal_model, minimality_sieve, necklace, predicted_type_counts,
                           rescale_for_integrality)


def _brute_bound(n, X, k):
    d = (2 * n + 2) * (2 * n + 1)
    b = 0
    while (b + 1) ** d < X ** k:
        b += 1
    return b


@given(st.integers(1, 3), st.integers(1, 10 ** 5))
def test_coefficient_bound_matches_brute_force(n, X):
    for k in range(2, 2 * n + 3):
        assert coefficient_bound(n, X, k) == _brute_bound(n, X, k)


def test_coefficient_bound_rational_X():
    assert coefficient_bound(1, Fraction(5, 2), 2) == _brute_bound(1, Fraction(5, 2), 2)


def test_boundary_tuples_excluded():
    # H(c) < X is strict: c_2 = 2 has H = 2^15 for n = 2
    n = 2
    assert coefficient_bound(n, 2 ** 15, 2) == 1
    assert coefficient_bound(n, 2 ** 15 + 1, 2) == 2
    c = CurveInvariants.parse("x^6+3")
    assert exact_height(c.c, 2) == 243
    assert c.height_below(244) and not c.height_below(243)


@pytest.mark.parametrize("budget", [10 ** 4, 10 ** 5, 10 ** 6])
def test_budget_bound_is_maximal(budget):
    X = height_bound_for_budget(2, budget)
    box = lambda Y: math.prod(2 * _brute_bound(2, Y, k) + 1 for k in range(2, 7))
    assert box(X) <= budget < box(X + 1)
    assert box_count(2, X) == box(X)


def test_height_sort_key_orders_like_height():
    rng = random.Random(3)
    cs = [tuple(rng.randint(-30, 30) for _ in range(5)) for _ in range(200)]
    for a, b in itertools.combinations(cs[:60], 2):
        ha, hb = exact_height(a, 2), exact_height(b, 2)
        if abs(ha - hb) > 1e-6 * max(ha, hb, 1):
            assert (height_sort_key(a, 2) < height_sort_key(b, 2)) == (ha < hb)


def test_enumeration_filters_and_refusal():
    task = EnumerationTask(1, 20)
    curves = list(enumerate_invariants(task))
    assert all(c.discriminant() != 0 for c in curves)
    assert all(c.height_below(20) for c in curves)
    assert len(curves) <= box_count(1, 20)
    with pytest.raises(Refusal) as exc:
        list(enumerate_invariants(EnumerationTask(2, 10 ** 9, budget=100)))
    assert exc.value.certificate["box_count"] > 100
    sf = list(enumerate_invariants(EnumerationTask(1, 20, squarefree_disc=True)))
    assert 0 < len(sf) < len(curves)
    cong = list(enumerate_invariants(EnumerationTask(1, 20, congruences={2: (2, {0})})))
    assert all(c.c[0] % 2 == 0 for c in cong)


def test_minimality_examples():
    c = CurveInvariants(1, (3 ** 4 * 2, 3 ** 6 * 5, 3 ** 8))
    assert minimality_sieve(c) == CurveInvariants(1, (2, 5, 1))
    assert minimality_sieve(CurveInvariants(1, (2, 5, 1))) == "minimal"
    assert minimality_sieve(CurveInvariants(1, (4, 8, 16))) == "minimal"


@given(st.tuples(st.integers(-40, 40), st.integers(-40, 40), st.integers(-40, 40)))
def test_minimal_model_idempotent_and_rescale_round_trip(c):
    assume(any(c))
    cu = CurveInvariants(1, c)
    m = minimal_model(cu)
    assert minimality_sieve(m) == "minimal"
    assert minimal_model(m) == m
    assert minimal_model(rescale_for_integrality(m)) == m


def test_necklace_matches_enumeration():
    for p, k in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (5, 2)]:
        brute = sum(1 for low in itertools.product(range(p), repeat=k)
                    if is_irreducible_mod_p(IntPoly(tuple(low) + (1,)), p))
        assert necklace(p, k) == brute


def test_predicted_counts_sum():
    for p, D in [(3, 4), (5, 4), (3, 6)]:
        assert sum(predicted_type_counts(p, D, False).values()) == p ** D
        assert sum(predicted_type_counts(p, D, True).values()) == p ** D - p ** (D - 1)


def test_type_census_p3():
    tc = factorization_type_census(3, 1)
    assert tc.total == 81 and tc.agrees()
    assert sum(tc.squarefree_types.values()) == 54


def test_sturm_matches_sympy_real_roots():
    rng = random.Random(5)
    for _ in range(40):
        deg = rng.randint(2, 7)
        coeffs = [rng.randint(-9, 9) for _ in range(deg)] + [1]
        p = IntPoly(tuple(coeffs))
        x = sympy.Symbol("x")
        sp = sympy.Poly(list(reversed(coeffs)), x)
        assert real_root_count(p) == len(set(sympy.real_roots(sp)))
        assert len(sturm_sequence(p)) >= 2


def test_density_parallel_matches_serial():
    task = EnumerationTask(1, 60)
    props = ["distinguished2", "real-roots", "factorization-type:3"]
    a = density_report(task, props, jobs=1)
    b = density_report(task, props, jobs=2)
    assert a.total == b.total and a.counts == b.counts
    assert sum(a.counts["real-roots"].values()) == a.total
