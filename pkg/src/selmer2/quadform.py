"""Symmetric bilinear forms over Q: diagonalization, Hilbert symbols, Hasse invariants,
split-space recognition and hyperbolic basis completion.

Gram matrices always hold the polarization <v, w> = Q(v+w) - Q(v) - Q(w), so the
standard split space has Gram matrix ``antidiagonal(2m)`` with ones on the anti-diagonal.
The Hasse invariant is prod_{i<j} (d_i, d_j)_p over a diagonalization.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import factorint

from .errors import DomainError, VerificationError
from .linalg import bilinear, congruence, identity, is_symmetric, qmat, rref
from .poly import square_class

INF = "inf"


@dataclass(frozen=True)
class GramMatrix:
    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise DomainError("Gram matrix must be square")
        object.__setattr__(self, "entries", rows)
        if not is_symmetric(rows):
            raise DomainError("Gram matrix must be symmetric")

    @property
    def dim(self):
        return len(self.entries)

    def rows(self):
        return [list(r) for r in self.entries]

    def pair(self, u, v):
        return bilinear(self.entries, u, v)

    def to_json(self):
        return json.dumps([[_frac_str(x) for x in row] for row in self.entries])

    @classmethod
    def from_json(cls, text):
        return cls([[Fraction(x) for x in row] for row in json.loads(text)])


def _frac_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def antidiagonal(dim):
    """The matrix A of the standard split form: ones on the anti-diagonal."""
    return GramMatrix([[int(i + j == dim - 1) for j in range(dim)] for i in range(dim)])


@dataclass(frozen=True, eq=False)
class FormInvariants:
    rank: int
    signature: tuple
    disc_class: int
    hasse: dict = field(default_factory=dict)

    def _key(self):
        return (self.rank, tuple(self.signature), self.disc_class,
                tuple(sorted(p for p, v in self.hasse.items() if v == -1)))

    def __eq__(self, other):
        return isinstance(other, FormInvariants) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def hasse_at(self, p):
        if p == INF:
            return self.hasse_real
        return self.hasse.get(p, 1)

    @property
    def hasse_real(self):
        neg = self.signature[1]
        return -1 if (neg * (neg - 1) // 2) % 2 else 1

    def to_json(self):
        return {"rank": self.rank, "signature": list(self.signature), "disc_class": self.disc_class,
                "primes": sorted(self.hasse), "hasse": {str(p): v for p, v in sorted(self.hasse.items())},
                "hasse_real": self.hasse_real}


@dataclass(frozen=True)
class HyperbolicBasis:
    """e_1..e_m and f_1..f_m with <e_i, f_j> = delta_ij and both halves isotropic."""

    e: tuple
    f: tuple

    def ordered(self):
        """Vectors in the order e_1, ..., e_m, f_m, ..., f_1."""
        return list(self.e) + list(reversed(self.f))

    def matrix(self):
        """Change-of-basis matrix whose columns are ``ordered()``."""
        vecs = self.ordered()
        n = len(vecs)
        return [[vecs[j][i] for j in range(n)] for i in range(n)]


# ---------------------------------------------------------------------------


def diagonalize(g):
    """Return (P, diag) with P^t g P = diag(diag), using rational operations only.

    A zero pivot is repaired by a swap or, when the whole remaining diagonal
    vanishes, by replacing e_k with e_k + e_j for a hyperbolic partner j.
    Degenerate directions give zero entries.
    """
    m = qmat(g.rows() if isinstance(g, GramMatrix) else g)
    n = len(m)
    P = identity(n)  # columns are the new basis vectors

    def col_op(i, j, c):
        # e_i <- e_i + c e_j
        for r in range(n):
            P[r][i] += c * P[r][j]
        for r in range(n):
            m[r][i] += c * m[r][j]
        for r in range(n):
            m[i][r] += c * m[j][r]

    def swap(i, j):
        for r in range(n):
            P[r][i], P[r][j] = P[r][j], P[r][i]
        m[i], m[j] = m[j], m[i]
        for r in range(n):
            m[r][i], m[r][j] = m[r][j], m[r][i]

    for k in range(n):
        if m[k][k] == 0:
            j = next((j for j in range(k + 1, n) if m[j][j] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if m[k][j] != 0), None)
                if j is None:
                    continue
                col_op(k, j, Fraction(1))
        piv = m[k][k]
        for j in range(k + 1, n):
            if m[k][j] != 0:
                col_op(j, k, -m[k][j] / piv)
    return P, [m[i][i] for i in range(n)]


def _legendre(u, p):
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _int_hilbert(a, b, p):
    if p == INF:
        return -1 if a < 0 and b < 0 else 1
    alpha = beta = 0
    while a % p == 0:
        a //= p
        alpha += 1
    while b % p == 0:
        b //= p
        beta += 1
    if p == 2:
        eps = lambda u: ((u - 1) // 2) % 2
        omega = lambda u: ((u * u - 1) // 8) % 2
        e = eps(a) * eps(b) + alpha * omega(b) + beta * omega(a)
        return -1 if e % 2 else 1
    s = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        s *= _legendre(a, p)
    if alpha % 2:
        s *= _legendre(b, p)
    return s


def hilbert_symbol(a, b, place):
    """(a, b)_v for nonzero rationals and v a prime or ``"inf"``."""
    a, b = Fraction(a), Fraction(b)
    if a == 0 or b == 0:
        raise DomainError("Hilbert symbol needs nonzero arguments")
    ai = a.numerator * a.denominator
    bi = b.numerator * b.denominator
    return _int_hilbert(ai, bi, place)


def relevant_primes(values):
    """2 together with every prime dividing a numerator or denominator."""
    ps = {2}
    for v in values:
        v = Fraction(v)
        for x in (v.numerator, v.denominator):
            if x not in (0, 1, -1):
                ps.update(factorint(abs(x)))
    return sorted(ps)


def form_invariants(g):
    _, diag = diagonalize(g)
    if any(d == 0 for d in diag):
        raise DomainError("degenerate form", certificate=diag)
    pos = sum(1 for d in diag if d > 0)
    prod = Fraction(1)
    for d in diag:
        prod *= d
    # square-class reps keep the Hilbert symbols unchanged and the integers small
    reps = [square_class(d) for d in diag]
    hasse = {}
    for p in relevant_primes(reps):
        h = 1
        for i in range(len(reps)):
            for j in range(i + 1, len(reps)):
                h *= _int_hilbert(reps[i], reps[j], p)
        hasse[p] = h
    return FormInvariants(len(diag), (pos, len(diag) - pos), square_class(prod), hasse)


def is_split_disc1(g):
    """True iff g is isometric to an orthogonal sum of rank/2 hyperbolic planes."""
    dim = g.dim if isinstance(g, GramMatrix) else len(g)
    if dim % 2:
        raise DomainError("split test needs even rank")
    inv = form_invariants(g)
    m = dim // 2
    if inv.signature != (m, m):
        return False
    if inv.disc_class != (-1) ** m:
        return False
    want2 = -1 if (m * (m - 1) // 2) % 2 else 1
    for p in set(inv.hasse) | {2}:
        if inv.hasse_at(p) != (want2 if p == 2 else 1):
            return False
    return True


def _isotropy_certificate(g, vecs):
    for i, u in enumerate(vecs):
        if bilinear(g, u, u) != 0:
            return u
        for v in vecs[i + 1:]:
            if bilinear(g, u, v) != 0:
                return [x + y for x, y in zip(u, v)]
    return None


def hyperbolic_completion(g, iso):
    """Extend a basis of a maximal isotropic subspace to a hyperbolic basis.

    The e-half of the returned basis is ``iso`` itself.  Raises DomainError with a
    certificate vector of nonzero self-pairing when ``iso`` is not isotropic.
    """
    G = qmat(g.rows() if isinstance(g, GramMatrix) else g)
    n = len(G)
    E = [list(map(Fraction, v)) for v in iso]
    m = len(E)
    cert = _isotropy_certificate(G, E)
    if cert is not None:
        raise DomainError("subspace is not isotropic", certificate=cert)
    if 2 * m != n:
        raise DomainError(f"isotropic subspace has dimension {m}, need {n // 2}")
    # rows of the linear system: v -> <e_i, v>
    EG = [[sum(E[i][k] * G[k][j] for k in range(n)) for j in range(n)] for i in range(m)]
    if len(rref(EG)[1]) < m:
        raise DomainError("isotropic vectors are dependent or lie in the radical")
    U = []
    for j in range(m):
        aug = [EG[i] + [Fraction(int(i == j))] for i in range(m)]
        red, piv = rref(aug)
        u = [Fraction(0)] * n
        for r, pc in enumerate(piv):
            u[pc] = red[r][n]
        U.append(u)
    F = []
    for j in range(m):
        f = list(U[j])
        for k in range(m):
            c = bilinear(G, U[j], U[k]) / 2
            if c:
                f = [x - c * y for x, y in zip(f, E[k])]
        F.append(f)
    basis = HyperbolicBasis(tuple(tuple(v) for v in E), tuple(tuple(v) for v in F))
    if congruence(basis.matrix(), G) != antidiagonal(n).rows():
        raise VerificationError("hyperbolic completion failed its Gram identity")
    return basis
