import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from selmer2.errors import DomainError
from selmer2.linalg import congruence
from selmer2.quadform import (INF, GramMatrix, antidiagonal, diagonalize, form_invariants, hilbert_symbol,
                              hyperbolic_completion, is_split_disc1, relevant_primes)

nonzero = st.integers(-30, 30).filter(lambda x: x != 0)


def _primitive_solution_mod(a, b, p, k):
    """Oracle: z^2 = a x^2 + b y^2 has a primitive solution mod p^k (brute force)."""
    m = p ** k
    sq = {}
    for z in range(m):
        sq.setdefault(z * z % m, []).append(z)
    for x in range(m):
        for y in range(m):
            v = (a * x * x + b * y * y) % m
            for z in sq.get(v, ()):
                if x % p or y % p or z % p:
                    return True
    return False


def test_diagonalize_examples():
    P, d = diagonalize([[0, 1], [1, 0]])
    assert sorted(x > 0 for x in d) == [False, True]
    assert form_invariants([[0, 1], [1, 0]]).disc_class == -1
    P, d = diagonalize([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert d == [1, 1, 1] and P == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    P, d = diagonalize([[2, 0], [0, -8]])
    assert d == [2, -8]
    assert form_invariants([[2, 0], [0, -8]]).disc_class == -1


@given(st.lists(st.lists(st.integers(-5, 5), min_size=4, max_size=4), min_size=4, max_size=4))
def test_diagonalize_congruence(rows):
    g = [[rows[i][j] + rows[j][i] for j in range(4)] for i in range(4)]
    P, d = diagonalize(g)
    D = congruence(P, g)
    assert all(D[i][j] == (d[i] if i == j else 0) for i in range(4) for j in range(4))


def test_hilbert_examples():
    assert hilbert_symbol(-1, -1, INF) == -1
    assert hilbert_symbol(-1, -1, 2) == -1
    assert hilbert_symbol(2, 3, 3) == -1
    assert not _primitive_solution_mod(-1, -1, 2, 3)
    assert not _primitive_solution_mod(2, 3, 3, 3)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_hilbert_matches_brute_force_odd(p):
    vals = [-15, -7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 14, 15]
    for a, b in itertools.product(vals, repeat=2):
        expected = 1 if _primitive_solution_mod(a, b, p, 3) else -1
        assert hilbert_symbol(a, b, p) == expected, (a, b, p)


@given(nonzero, nonzero)
def test_hilbert_product_formula(a, b):
    places = set(relevant_primes([a, b])) | {2}
    prod = hilbert_symbol(a, b, INF)
    for p in places:
        prod *= hilbert_symbol(a, b, p)
    assert prod == 1


@given(nonzero, nonzero, nonzero, st.sampled_from([2, 3, 5, 7, INF]))
def test_hilbert_bilinear(a, b1, b2, place):
    assert hilbert_symbol(a, b1 * b2, place) == hilbert_symbol(a, b1, place) * hilbert_symbol(a, b2, place)


def test_form_invariants_examples(f6p3):
    inv = form_invariants([[0, 1], [1, 0]])
    assert inv.signature == (1, 1) and inv.disc_class == -1 and all(v == 1 for v in inv.hasse.values())
    inv = form_invariants([[int(i == j) for j in range(4)] for i in range(4)])
    assert inv.signature == (4, 0) and inv.disc_class == 1 and all(v == 1 for v in inv.hasse.values())
    from selmer2.etale import EtaleElement, gram_alpha

    g = gram_alpha(f6p3.f, EtaleElement.one(f6p3.f))
    inv = form_invariants(g)
    hyp3 = form_invariants(antidiagonal(6))
    assert inv.signature == (3, 3) and inv.disc_class == -1
    assert all(inv.hasse_at(p) == hyp3.hasse_at(p) for p in set(inv.hasse) | set(hyp3.hasse) | {2})
    with pytest.raises(DomainError):
        form_invariants([[1, 1], [1, 1]])


def test_random_forms_hasse_product():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(1, 8)
        while True:
            rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
            g = [[rows[i][j] + rows[j][i] + (i == j) * rng.randint(-3, 3) for j in range(n)] for i in range(n)]
            try:
                inv = form_invariants(g)
                break
            except DomainError:
                continue
        prod = inv.hasse_real
        for p in set(inv.hasse) | {2}:
            prod *= inv.hasse_at(p)
        assert prod == 1


def test_split_examples():
    for dim in range(4, 13, 2):
        assert is_split_disc1(antidiagonal(dim))
        assert not is_split_disc1([[int(i == j) for j in range(dim)] for i in range(dim)])
    diag = [1, 1, -1, -1, 2, -3]
    g = [[diag[i] if i == j else 0 for j in range(6)] for i in range(6)]
    assert form_invariants(g).disc_class == -6
    assert not is_split_disc1(g)
    with pytest.raises(DomainError):
        is_split_disc1([[1, 0, 0], [0, 1, 0], [0, 0, -1]])


def test_hyperbolic_completion_examples(f6p3):
    A4 = antidiagonal(4)
    hb = hyperbolic_completion(A4, [[1, 0, 0, 0], [0, 1, 0, 0]])
    assert hb.matrix() == [[int(i == j) for j in range(4)] for i in range(4)]
    from selmer2.etale import EtaleElement, gram_alpha

    g = gram_alpha(f6p3.f, EtaleElement.one(f6p3.f))
    hb = hyperbolic_completion(g, [[int(i == k) for i in range(6)] for k in range(3)])
    assert congruence(hb.matrix(), g.rows()) == antidiagonal(6).rows()
    with pytest.raises(DomainError) as exc:
        hyperbolic_completion([[0, 1], [1, 0]], [[1, 1]])
    assert exc.value.certificate is not None


def test_gram_json_roundtrip():
    g = GramMatrix([[Fraction(1, 2), 3], [3, -1]])
    assert GramMatrix.from_json(g.to_json()) == g
