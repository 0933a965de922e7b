import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_curve
from selmer2.errors import DomainError, Refusal
from selmer2.localdata import (INF, a_nu, j2_local, local_cycle_type, place_data, product_formula_check,
                               real_cycle_type)
from selmer2.orbits import CycleType, two_torsion_dim
from selmer2.poly import CurveInvariants


def test_cycle_type_examples():
    assert local_cycle_type("x^6-1", 7).partition == (1,) * 6
    assert sorted(local_cycle_type("x^6+3", 7).partition) == [3, 3]
    assert real_cycle_type("x^6+3").partition == (2, 2, 2)
    assert local_cycle_type("x^4-5*x^2+4", "inf").partition == (1, 1, 1, 1)


def test_refusals():
    with pytest.raises(Refusal):
        local_cycle_type("x^6+3", 3)
    with pytest.raises(Refusal):
        local_cycle_type("x^6+3", 2)
    with pytest.raises(DomainError):
        local_cycle_type("x^6+3", 9)


def test_a_nu_values():
    f = CurveInvariants.parse("x^6+3")
    assert a_nu(f, 2) == 4 and a_nu(f, INF) == Fraction(1, 4) and a_nu(f, 7) == 1
    assert j2_local("x^6+3", "inf") == 2 ** two_torsion_dim(CycleType((2, 2, 2))) == 4


def test_real_cycle_type_matches_numeric_roots():
    rng = random.Random(8)
    for _ in range(30):
        c = random_curve(rng, rng.randint(1, 3))
        roots = np.roots([float(x) for x in reversed(c.f.coeffs)])
        real = sum(1 for r in roots if abs(r.imag) < 1e-7)
        assert real_cycle_type(c).partition.count(1) == real


def test_product_formula_random():
    rng = random.Random(2)
    for _ in range(20):
        c = random_curve(rng, rng.choice((2, 3)))
        primes = [p for p in (3, 5, 7, 11, 13) if c.discriminant() % p]
        assert product_formula_check(c, primes)


def test_place_data_records():
    rec = place_data("x^6+3", 2).to_json()
    assert rec["cycle_type"] is None and rec["a_nu"] == "4"
    rec = place_data("x^6+3", 7).to_json()
    assert rec["j2"] == 2 ** two_torsion_dim(CycleType((3, 3)))
