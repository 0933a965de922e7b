from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import primerange

from selmer2.descent import (IntegralPair, PointData, delta_prime, ideal_verify, integral_orbit_data, integral_pair,
                             isotropic_plane, parse_points, parse_quad, soluble_orbit_rep, vandermonde_plane)
from selmer2.errors import DomainError, Refusal
from selmer2.etale import AlphaClass, EtaleElement, compare_classes, gram_alpha, norm
from selmer2.orbits import SelfAdjointOp
from selmer2.poly import IntPoly, parse_poly
from selmer2.quadfield import QuadNumber
from selmer2.quadform import antidiagonal


def _pts(*xy):
    return [PointData(x, y) for x, y in xy]


def _distinct_by_roots(alpha_poly, f_low, p):
    """Oracle: if Legendre(alpha(r)) differs between two roots r of f mod p, alpha is not in Q* L*^2."""
    roots = [r for r in range(p) if sum(c * pow(r, i, p) for i, c in enumerate(f_low)) % p == 0]
    vals = [sum(c * pow(r, i, p) for i, c in enumerate(alpha_poly)) % p for r in roots]
    chars = {pow(v, (p - 1) // 2, p) for v in vals}
    return 0 not in vals and len(chars) == 2


def test_two_point_pipeline(f6p3):
    pts = _pts((1, 2), (-1, 2))
    ac = delta_prime(pts, f6p3.f)
    assert ac.representative == EtaleElement.from_poly(f6p3.f, [-1, 0, 1])
    assert norm(ac.representative) == 16 and ac.norm_witness == 4
    plane = vandermonde_plane(pts, f6p3.f)
    G = gram_alpha(f6p3.f, ac)
    vecs = plane.vectors()
    assert len(vecs) == 3
    assert all(G.pair(u, v) == 0 for u in vecs for v in vecs)
    rep = soluble_orbit_rep(pts, f6p3)
    assert rep.T.charpoly() == f6p3.f and rep.T.is_self_adjoint()
    cmp = compare_classes(ac, AlphaClass(EtaleElement.one(f6p3.f), 1))
    assert cmp.verdict == "distinct"
    # independent confirmation: two roots of x^6+3 mod p with different characters of b^2 - 1
    assert any(_distinct_by_roots([-1, 0, 1], [3, 0, 0, 0, 0, 0, 1], p) for p in primerange(5, 400))


def test_norm_witness_is_product_of_y():
    f = parse_poly("x^6+3")
    pts = _pts((1, 2), (-1, 2))
    assert delta_prime(pts, f).norm_witness ** 2 == norm(delta_prime(pts, f).representative)
    g = parse_poly("x^4-3*x^2+9")
    ac = delta_prime(_pts((0, 3)), g)
    assert ac.norm_witness == 3 and norm(ac.representative) == 9


def test_single_point_route(f6p3):
    rep = soluble_orbit_rep(_pts((1, 2)), f6p3)
    assert rep.alpha.representative == EtaleElement.from_poly(f6p3.f, [1, -1])
    assert rep.split
    assert rep.T is not None and rep.T.charpoly() == f6p3.f and rep.T.is_self_adjoint()


def test_empty_points_distinguished(f6p3):
    rep = soluble_orbit_rep([], f6p3)
    assert rep.alpha.representative == EtaleElement.one(f6p3.f)
    assert rep.T.charpoly() == f6p3.f


def test_quadratic_point(f6p3):
    pts = parse_points("(quad:-3; x=1/2+1/2√-3, y=2)")
    assert len(pts) == 2 and pts[1] == pts[0].conjugate()
    ac = delta_prime(pts, f6p3.f)
    assert ac.representative == EtaleElement.from_poly(f6p3.f, [1, -1, 1])
    rep = soluble_orbit_rep(pts, f6p3)
    assert rep.T.charpoly() == f6p3.f and rep.T.is_self_adjoint()


def test_point_validation(f6p3):
    with pytest.raises(DomainError):
        PointData(2, 0)
    with pytest.raises(DomainError):
        delta_prime(_pts((1, 3)), f6p3.f)
    with pytest.raises(DomainError):
        vandermonde_plane(_pts((1, 2)), f6p3.f)


def test_parsers():
    assert parse_quad("3/2") == Fraction(3, 2)
    q = parse_quad("1+2*sqrt(5)")
    assert isinstance(q, QuadNumber) and (q.a, q.b, q.d) == (1, 2, 5)
    assert parse_quad("1-√-3") == QuadNumber(1, -1, -3)
    pts = parse_points("(1,2);(-1,2)")
    assert [(p.x, p.y) for p in pts] == [(1, 2), (-1, 2)]
    with pytest.raises(DomainError):
        parse_points("(1;2")


def test_integral_pair_example(f6p3):
    pair = integral_pair(_pts((1, 2)), f6p3.f, IntPoly((2,)))
    ok, certs = ideal_verify(pair)
    assert ok
    assert certs["N(I)^2"] == Fraction(1, 4) == certs["N(alpha)^-1"]
    out = integral_orbit_data(pair, isotropic_plane(_pts((1, 2)), f6p3.f))
    assert out["gram_integral"] and out["T_I_integral"] and abs(out["gram_det"]) == 1


def test_integral_operator_two_points(f6p3):
    pts = _pts((1, 2), (-1, 2))
    pair = integral_pair(pts, f6p3.f, IntPoly((2,)))
    assert ideal_verify(pair)[0]
    out = integral_orbit_data(pair, isotropic_plane(pts, f6p3.f))
    assert out["even"] and out["unimodular_basis"] and out["T_standard_integral"]
    assert out["hyperbolic_gram"] == antidiagonal(6).rows()
    T = SelfAdjointOp(2, out["T_standard"])
    assert T.is_self_adjoint() and T.charpoly() == f6p3.f


def test_ideal_verify_rejects_mismatch(f6p3):
    f = f6p3.f
    D = f.degree
    ideal = tuple(tuple(Fraction(int(i == k)) for i in range(D)) for k in range(D))
    bad = IntegralPair(AlphaClass.of(EtaleElement.beta(f)), ideal)
    ok, certs = ideal_verify(bad)
    assert not ok and certs["norm_mismatch"] == (1, Fraction(1, 3))


def test_integral_pair_refusals(f6p3):
    with pytest.raises(Refusal):
        integral_pair(parse_points("(quad:-3; x=1/2+1/2√-3, y=2)"), f6p3.f, IntPoly((2,)))
    with pytest.raises(DomainError):
        integral_pair(_pts((1, 2)), f6p3.f, IntPoly((3,)))


@given(st.integers(-20, 20).filter(bool), st.integers(1, 6))
def test_scaling_preserves_class(num, den):
    # c * alpha for c in Q* gives the same class in L*/L*^2 Q*
    f = parse_poly("x^6+3")
    a = delta_prime(_pts((1, 2), (-1, 2)), f).representative
    c = EtaleElement.scalar(f, Fraction(num, den))
    assert compare_classes(a * c, a).verdict.startswith("equal")
