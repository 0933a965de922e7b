"""Local data at odd primes of good reduction and at the real place."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from sympy import isprime

from .errors import DomainError, Refusal
from .factor import factor_mod_p
from .orbits import CycleType, two_torsion_dim
from .poly import CurveInvariants, _coerce, real_root_count

INF = "inf"


def _curve(f):
    return f if isinstance(f, CurveInvariants) else CurveInvariants.from_poly(_coerce(f))


def _place(place):
    if isinstance(place, str):
        if place.lower() in ("inf", "oo", "infinity", "r", "∞"):
            return INF
        place = int(place)
    if not isprime(place):
        raise DomainError(f"{place} is not a prime or inf")
    return place


@dataclass(frozen=True)
class PlaceData:
    place: object
    cycle_type: CycleType
    j2_size: int
    a_nu: Fraction

    def to_json(self):
        return {"place": str(self.place),
                "cycle_type": None if self.cycle_type is None else list(self.cycle_type.partition),
                "j2": self.j2_size, "a_nu": str(self.a_nu)}


def local_cycle_type(f, p):
    """Degrees of the irreducible factors of f over Q_p, read off mod p."""
    c = _curve(f)
    p = _place(p)
    if p == INF:
        return real_cycle_type(c)
    if p == 2:
        raise Refusal("factorization type over Q_2 is not computed")
    if c.discriminant() % p == 0:
        raise Refusal(f"p = {p} divides the discriminant; ramified places are not handled")
    return CycleType.from_factor_list(factor_mod_p(c.f, p))


def real_cycle_type(f):
    """m twos (complex conjugate pairs) and 2n+2-2m ones."""
    c = _curve(f)
    r = real_root_count(c.f)
    m = (c.degree - r) // 2
    return CycleType((2,) * m + (1,) * r)


def a_nu(f, place):
    """|J(Q_v)/2J(Q_v)| / |J(Q_v)[2]| = |2|_v^(-g): 1 at odd p, 2^g at 2, 2^-g at inf."""
    g = _curve(f).n
    place = _place(place)
    if place == INF:
        return Fraction(1, 2 ** g)
    if place == 2:
        return Fraction(2 ** g)
    return Fraction(1)


def product_formula_check(f, primes=()):
    prod = a_nu(f, 2) * a_nu(f, INF)
    for p in primes:
        prod *= a_nu(f, p)
    return prod == 1


def j2_local(f, place):
    ct = local_cycle_type(f, place)
    return 2 ** two_torsion_dim(ct)


def place_data(f, place):
    """Local record; at p = 2 only a_nu is available (cycle type and j2 are None)."""
    place = _place(place)
    c = _curve(f)
    if place == 2:
        return PlaceData(2, None, None, a_nu(c, 2))
    ct = local_cycle_type(c, place)
    return PlaceData(place, ct, 2 ** two_torsion_dim(ct), a_nu(c, place))
