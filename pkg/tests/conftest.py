import random

import pytest
import sympy
from hypothesis import settings

from selmer2.poly import CurveInvariants, poly_discriminant

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def sylvester_resultant(a, b):
    """Oracle: determinant of the Sylvester matrix (sympy Matrix.det, exact)."""
    A = list(reversed(a.coeffs))
    B = list(reversed(b.coeffs))
    m, n = len(A) - 1, len(B) - 1
    N = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + A + [0] * (N - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + B + [0] * (N - n - 1 - i))
    return int(sympy.Matrix(rows).det())


def sympy_poly(p):
    x = sympy.Symbol("x")
    return sympy.Poly(list(reversed([int(c) for c in p.coeffs])), x)


def random_curve(rng, n, bound=9):
    while True:
        c = tuple(rng.randint(-bound, bound) for _ in range(2 * n + 1))
        cu = CurveInvariants(n, c)
        if poly_discriminant(cu.f) != 0:
            return cu


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def f6p3():
    return CurveInvariants.parse("x^6+3")
