"""From points on y^2 = f(x) to classes alpha in L*, isotropic planes, orbit
representatives and integral pairs (I, alpha)."""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, Refusal, VerificationError
from .etale import AlphaClass, EtaleElement, gram_alpha, norm
from .linalg import bilinear, det, hnf_rows, inverse, matmul, rank, solve, transpose
from .orbits import OrbitSummary, SelfAdjointOp, construct_Tf, distinguished_orbit_count, j2_dim_Q
from .poly import CurveInvariants, IntPoly, _coerce, padd, pdivmod, peval, pmul, psub, rational_sqrt, trim
from .quadfield import QuadNumber
from .quadform import hyperbolic_completion, is_split_disc1


@dataclass(frozen=True)
class PointData:
    """A finite non-Weierstrass point (x, y) with coordinates in Q (d = None) or Q(sqrt d)."""

    x: object
    y: object
    d: object = None

    def __post_init__(self):
        if self.d is None:
            object.__setattr__(self, "x", Fraction(self.x))
            object.__setattr__(self, "y", Fraction(self.y))
        else:
            for name in ("x", "y"):
                v = getattr(self, name)
                if not isinstance(v, QuadNumber):
                    v = QuadNumber(v, 0, self.d)
                object.__setattr__(self, name, v)
        if self.y == 0:
            raise DomainError("evaluation of x - b at a Weierstrass point is not a unit class")

    def conjugate(self):
        if self.d is None:
            return self
        return PointData(self.x.conj(), self.y.conj(), self.d)

    def check_on(self, f):
        f = _fpoly(f)
        if self.y * self.y != peval(list(f.coeffs), self.x):
            raise DomainError(f"point ({self.x}, {self.y}) is not on y^2 = {f}")

    def __str__(self):
        return f"({self.x},{self.y})"


@dataclass(frozen=True)
class IsotropicPlane:
    alpha: EtaleElement
    basis: tuple  # EtaleElements

    def vectors(self):
        return [list(b.coeffs) for b in self.basis]


@dataclass(frozen=True)
class IntegralPair:
    alpha: AlphaClass
    ideal: tuple  # rows = Z-basis vectors of I in power-basis coordinates (Hermite form)
    r: object = None
    p: object = None

    def basis_matrix(self):
        return [list(r) for r in self.ideal]


def _fpoly(f):
    return f.f if isinstance(f, CurveInvariants) else _coerce(f)


def _n_of(f):
    return (_fpoly(f).degree - 2) // 2


# ---------------------------------------------------------------------------
# parsing


def parse_quad(text, d=None):
    """Parse "a", "a+b√d", "a+b*sqrt(d)" or "b*sqrt(d)"."""
    s = text.replace(" ", "")
    m = re.match(r"^(.*?)([+-]?)([\d/]*)\*?(?:√|sqrt)\(?(-?\d+)\)?$", s)
    if not m:
        return Fraction(s) if d is None else QuadNumber(Fraction(s), 0, d)
    a_txt, sign, b_txt, d_txt = m.groups()
    dd = int(d_txt)
    if d is not None and dd != d:
        raise DomainError(f"mixed quadratic fields {d} and {dd}")
    a = Fraction(a_txt) if a_txt not in ("", "+", "-") else Fraction(0)
    b = Fraction(b_txt) if b_txt else Fraction(1)
    if sign == "-":
        b = -b
    return QuadNumber(a, b, dd)


def _split_top(s, sep):
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


def parse_points(text):
    """Parse "(x,y);(x,y);..." or "(quad:d; x=a+b√d, y=c+e√d)".

    A tagged quadratic point is expanded to itself and its conjugate.
    """
    pts = []
    text = text.strip()
    if not text:
        return pts
    for tok in _split_top(text, ";"):
        tok = tok.strip()
        if not tok:
            continue
        if not (tok.startswith("(") and tok.endswith(")")):
            raise DomainError(f"cannot parse point {tok!r}")
        body = tok[1:-1]
        m = re.match(r"^\s*(?:quad|poly)\s*:\s*(-?\d+)\s*[;,]\s*x\s*=\s*(.+?)\s*,\s*y\s*=\s*(.+)$", body)
        if m:
            d = int(m.group(1))
            p = PointData(parse_quad(m.group(2), d), parse_quad(m.group(3), d), d)
            pts.extend([p, p.conjugate()])
            continue
        parts = _split_top(body, ",")
        if len(parts) != 2:
            raise DomainError(f"cannot parse point {tok!r}")
        x, y = parse_quad(parts[0]), parse_quad(parts[1])
        d = x.d if isinstance(x, QuadNumber) else (y.d if isinstance(y, QuadNumber) else None)
        pts.append(PointData(x, y, d))
    return pts


# ---------------------------------------------------------------------------
# delta'


def _rational_coeffs(coeffs, what):
    out = []
    for c in coeffs:
        if isinstance(c, QuadNumber):
            if c.b != 0:
                raise DomainError(f"{what} is not rational; supply full conjugate orbits")
            out.append(c.a)
        else:
            out.append(Fraction(c))
    return out


def delta_prime(points, f):
    """alpha = prod (x_i - b), with norm witness prod y_i."""
    fpoly = _fpoly(f)
    prod = [Fraction(1)]
    wit = Fraction(1)
    for pt in points:
        pt.check_on(fpoly)
        prod = pmul(prod, [pt.x, -1])
        wit = wit * pt.y
    coeffs = _rational_coeffs(prod, "the product of x_i - b")
    wit = _rational_coeffs([wit], "the norm witness")[0]
    alpha = EtaleElement(fpoly, tuple(coeffs))
    return AlphaClass(alpha, wit)


# ---------------------------------------------------------------------------
# Vandermonde plane


def _h_poly(fpoly, x):
    """(f(t) - f(x)) / (t - x) as a coefficient list."""
    fc = list(fpoly.coeffs)
    num = psub(fc, [peval(fc, x)])
    q, r = pdivmod(num, [-x, 1])
    if r:
        raise VerificationError("t - x does not divide f(t) - f(x)")
    return q


def _pairing_certificate(G, vecs):
    for i, u in enumerate(vecs):
        for j in range(i, len(vecs)):
            val = bilinear(G, u, vecs[j])
            if val != 0:
                return (i, j, val)
    return None


def vandermonde_plane(points, f):
    """The (n+1)-plane span(1, .., b^(n-m'), g_0(b), .., g_(m'-1)(b)), verified isotropic."""
    fpoly = _fpoly(f)
    n = _n_of(fpoly)
    m = len(points)
    if m < 2 or m > n + 1:
        raise DomainError(f"need 2 <= m <= n+1 points, got {m}")
    xs = [p.x for p in points]
    for i in range(m):
        for j in range(i + 1, m):
            if xs[i] == xs[j]:
                raise DomainError("x-coordinates must be distinct")
    alpha = delta_prime(points, fpoly).representative
    mp = m // 2
    V = 1
    for i in range(m):
        for j in range(i + 1, m):
            V = V * (xs[i] - xs[j])
    gs = []
    for j in range(mp):
        g = []
        for i, pt in enumerate(points):
            q_i = 1
            for k in range(m):
                if k != i:
                    q_i = q_i * (xs[k] - xs[i])
            a_i = V / q_i
            scale = (pt.x ** j if j else 1) * a_i / pt.y
            g = padd(g, [scale * c for c in _h_poly(fpoly, pt.x)])
        gs.append(_rationalize(g))
    basis = [EtaleElement(fpoly, tuple(Fraction(int(i == k)) for i in range(fpoly.degree)))
             for k in range(n - mp + 1)]
    basis += [EtaleElement(fpoly, tuple(g)) for g in gs]
    G = gram_alpha(fpoly, alpha).rows()
    vecs = [list(b.coeffs) for b in basis]
    cert = _pairing_certificate(G, vecs)
    if cert is not None:
        raise DomainError("Vandermonde plane is not isotropic", certificate=cert)
    if rank(vecs) != n + 1:
        raise DomainError("Vandermonde plane has dimension < n+1")
    return IsotropicPlane(alpha, tuple(basis))


def _rationalize(g):
    """Rational coefficients, dividing by sqrt(d) when g lies in sqrt(d) Q[t]."""
    g = trim(g)
    if all(not isinstance(c, QuadNumber) or c.b == 0 for c in g):
        return [c.a if isinstance(c, QuadNumber) else Fraction(c) for c in g]
    if all(isinstance(c, QuadNumber) and c.a == 0 for c in g):
        return [c.b for c in g]
    raise DomainError("g_j is neither rational nor a rational multiple of sqrt(d)")


def single_point_plane(point, f):
    """Isotropic (n+1)-plane for alpha = x_1 - b, built from span(1, .., b^(n-1)).

    W0 = span(1, .., b^(n-1)) is isotropic; W0^perp / W0 is a binary form whose
    isotropic line is found by the quadratic formula when its discriminant is a
    rational square.  Returns None when no rational isotropic line exists.
    """
    fpoly = _fpoly(f)
    n = _n_of(fpoly)
    D = fpoly.degree
    alpha = delta_prime([point], fpoly).representative
    G = gram_alpha(fpoly, alpha).rows()
    W0 = [[Fraction(int(i == k)) for i in range(D)] for k in range(n)]
    from .linalg import nullspace

    perp = nullspace([[sum(w[i] * G[i][j] for i in range(D)) for j in range(D)] for w in W0]) if W0 else \
        [[Fraction(int(i == k)) for i in range(D)] for k in range(D)]
    # complement of W0 inside perp
    comp = []
    cur = [list(w) for w in W0]
    for v in perp:
        if rank(cur + [v]) > len(cur):
            cur.append(v)
            comp.append(v)
    if len(comp) != 2:
        raise VerificationError("W0^perp / W0 is not two-dimensional")
    u1, u2 = comp
    a = bilinear(G, u1, u1)
    b = bilinear(G, u1, u2)
    c = bilinear(G, u2, u2)
    if a == 0:
        w = u1
    elif c == 0:
        w = u2
    else:
        disc = b * b - a * c
        s = rational_sqrt(disc)
        if s is None:
            return None
        t = (-b + s) / a
        w = [t * x + y for x, y in zip(u1, u2)]
    basis = [EtaleElement(fpoly, tuple(v)) for v in W0 + [w]]
    cert = _pairing_certificate(G, [list(e.coeffs) for e in basis])
    if cert is not None:
        raise VerificationError("single-point plane is not isotropic", certificate=cert)
    return IsotropicPlane(alpha, tuple(basis))


def isotropic_plane(points, f):
    if len(points) == 1:
        return single_point_plane(points[0], f)
    return vandermonde_plane(points, f)


# ---------------------------------------------------------------------------
# orbit representatives


@dataclass
class OrbitRep:
    alpha: AlphaClass
    T: object  # SelfAdjointOp or None when only the split certificate is available
    summary: OrbitSummary
    plane: object = None
    split: bool = True
    basis_change: object = None
    sign: int = 1  # (-1)^m, relating prod(x_i - b) to the integral normalization (-1)^m p(b)

    def to_json(self):
        out = {"alpha": self.alpha.representative.to_json(),
               "alpha_str": str(self.alpha.representative),
               "norm_alpha": str(norm(self.alpha.representative)),
               "norm_witness": None if self.alpha.norm_witness is None else str(self.alpha.norm_witness),
               "alpha_signed": (self.alpha.representative * self.sign).to_json(),
               "split": self.split,
               "summary": self.summary.to_json()}
        if self.plane is not None:
            out["plane"] = [b.to_json() for b in self.plane.basis]
        if self.T is not None:
            out["T"] = self.T.to_json()
        return out


def soluble_orbit_rep(points, f):
    """alpha = delta'(points) and a T in V_f(Q) whose orbit corresponds to alpha."""
    c = f if isinstance(f, CurveInvariants) else CurveInvariants.from_poly(_coerce(f))
    fpoly = c.f
    n = c.n
    if not points:
        T = construct_Tf(c)
        summ = OrbitSummary(distinguished_orbit_count(c), j2_dim_Q(c), "distinguished")
        return OrbitRep(AlphaClass(EtaleElement.one(fpoly), 1), T, summ)
    ac = delta_prime(points, fpoly)
    G = gram_alpha(fpoly, ac)
    summ_args = (distinguished_orbit_count(c), j2_dim_Q(c))
    if len(points) == 1:
        # route around the displayed one-point plane: test splitness first, then search
        split = is_split_disc1(G)
        plane = single_point_plane(points[0], fpoly) if split else None
    else:
        plane = vandermonde_plane(points, fpoly)
    if plane is None:
        return OrbitRep(ac, None, OrbitSummary(*summ_args, ac.representative), None, split,
                        sign=(-1) ** len(points))
    hb = hyperbolic_completion(G, plane.vectors())
    P = hb.matrix()
    C = EtaleElement.beta(fpoly).mult_matrix()
    T = SelfAdjointOp(n, matmul(matmul(inverse(P), C), P))
    if not T.is_self_adjoint():
        raise VerificationError("A T is not symmetric")
    if T.charpoly() != fpoly:
        raise VerificationError("char(T) != f")
    return OrbitRep(ac, T, OrbitSummary(*summ_args, ac.representative), plane, True, P, (-1) ** len(points))


# ---------------------------------------------------------------------------
# integral pairs


def _lattice_from_generators(vecs):
    """Z-span of rational vectors: (Hermite-form rows, as Fractions)."""
    import math

    den = 1
    for v in vecs:
        for x in v:
            den = den * Fraction(x).denominator // math.gcd(den, Fraction(x).denominator)
    rows = hnf_rows([[int(Fraction(x) * den) for x in v] for v in vecs])
    return [[Fraction(x, den) for x in r] for r in rows]


def _coords_in(basis, v):
    """Coordinates of v in the rational basis (rows)."""
    return solve(transpose(basis), v)


def _is_integral(v):
    return all(Fraction(x).denominator == 1 for x in v)


def integral_pair(points, f, r):
    """(I, alpha) with alpha = (-1)^m p(b), I = R + R r(b)/alpha."""
    fpoly = _fpoly(f)
    D = fpoly.degree
    r = _coerce(r) if not isinstance(r, IntPoly) else r
    if not points:
        one = EtaleElement.one(fpoly)
        ideal = tuple(tuple(Fraction(int(i == k)) for i in range(D)) for k in range(D))
        return IntegralPair(AlphaClass(one, 1), ideal, r, IntPoly((1,)))
    for pt in points:
        if pt.d is not None or Fraction(pt.x).denominator != 1:
            raise Refusal("integral pairs need integral rational points; "
                          "the Newton-polygon reduction for other data is not implemented")
        pt.check_on(fpoly)
        if r(int(pt.x)) != pt.y:
            raise DomainError(f"r({pt.x}) != {pt.y}")
    m = len(points)
    p = IntPoly.from_roots([int(pt.x) for pt in points])
    alpha = EtaleElement.from_poly(fpoly, p) * ((-1) ** m)
    rb = EtaleElement.from_poly(fpoly, r)
    gen = rb / alpha
    beta = EtaleElement.beta(fpoly)
    gens = []
    cur1, cur2 = EtaleElement.one(fpoly), gen
    for _ in range(D):
        gens.append(list(cur1.coeffs))
        gens.append(list(cur2.coeffs))
        cur1, cur2 = cur1 * beta, cur2 * beta
    ideal = _lattice_from_generators(gens)
    if len(ideal) != D:
        raise VerificationError("ideal lattice is not of full rank")
    pair = IntegralPair(AlphaClass.of(alpha), tuple(tuple(v) for v in ideal), r, p)
    # alpha I^2 = (alpha, r(b), q(b)) with q = (r^2 - f)/p
    q = (r * r - fpoly).exact_div(p)
    lhs = _lattice_from_generators(_product_generators(pair))
    rhs_gens = []
    for g in (alpha, rb, EtaleElement.from_poly(fpoly, q)):
        cur = g
        for _ in range(D):
            rhs_gens.append(list(cur.coeffs))
            cur = cur * beta
    rhs = _lattice_from_generators(rhs_gens)
    if lhs != rhs:
        raise VerificationError("alpha I^2 differs from (alpha, r(b), q(b))", certificate=(lhs, rhs))
    return pair


def _product_generators(pair):
    f = pair.alpha.representative.modulus
    a = pair.alpha.representative
    basis = [EtaleElement(f, v) for v in pair.ideal]
    out = []
    for i, u in enumerate(basis):
        for v in basis[i:]:
            out.append(list((a * u * v).coeffs))
    return out


def ideal_verify(pair):
    """Check that I is an R-module, alpha I^2 is inside R and N(I)^2 = N(alpha)^-1."""
    f = pair.alpha.representative.modulus
    basis = pair.basis_matrix()
    certs = {}
    ok = True
    beta = EtaleElement.beta(f)
    for v in basis:
        w = list((EtaleElement(f, v) * beta).coeffs)
        coords = _coords_in(basis, w)
        if not _is_integral(coords):
            ok = False
            certs["not_R_module"] = (v, w)
            break
    for g in _product_generators(pair):
        if not _is_integral(g):
            ok = False
            certs["alpha_I2_not_in_R"] = g
            break
    nI = abs(det(basis))
    na = norm(pair.alpha.representative)
    certs["N(I)"] = nI
    certs["N(I)^2"] = nI * nI
    certs["N(alpha)^-1"] = 1 / na
    if nI * nI != 1 / na:
        ok = False
        certs["norm_mismatch"] = (nI * nI, 1 / na)
    return ok, certs


def _integer_kernel(rows, width):
    """Z-basis of {v in Z^width : M v = 0} for an integer matrix M (rows)."""
    r = len(rows)
    aug = [[rows[i][j] for i in range(r)] + [int(j == k) for k in range(width)] for j in range(width)]
    red = hnf_rows(aug)
    return [row[r:] for row in red if not any(row[:r])]


def _smith_free_solve(E, b):
    """An integer x with E x = b, or None (E integer k x D)."""
    k = len(E)
    D = len(E[0])
    aug = [[E[i][j] for i in range(k)] + [int(j == c) for c in range(D)] for j in range(D)]
    red = hnf_rows(aug)  # red = U [E^t | I], U unimodular, first block in echelon form
    H = [row[:k] for row in red]
    U = [row[k:] for row in red]
    # E^t = U^-1 H  =>  E = H^t U^-t ; solve H^t y = b then x = U^t y
    piv_rows = [i for i, row in enumerate(H) if any(row)]
    y = [Fraction(0)] * len(H)
    # H is in row echelon form; solve column by column
    col = 0
    for i in piv_rows:
        while col < k and H[i][col] == 0:
            col += 1
        acc = Fraction(b[col]) - sum(H[j][col] * y[j] for j in range(i))
        y[i] = acc / H[i][col]
        if y[i].denominator != 1:
            return None
        col += 1
    x = [sum(U[j][c] * y[j] for j in range(len(H))) for c in range(D)]
    if any(sum(E[i][c] * x[c] for c in range(D)) != b[i] for i in range(k)):
        return None
    return [int(v) for v in x]


def integral_orbit_data(pair, plane):
    """Gram of <,>_alpha on the Z-basis of I and the integral structure of T.

    Returns a dict with the Gram matrix on I (integral and unimodular when the pair
    verifies), the matrix of multiplication by b in the I-basis (integral since I is
    an R-module) and, when the lattice is even, a hyperbolic Z-basis of I extending
    the saturation of the isotropic plane together with the matrix of T in it.
    """
    f = pair.alpha.representative.modulus
    D = f.degree
    n = (D - 2) // 2
    M = transpose(pair.basis_matrix())  # columns = basis of I
    G = gram_alpha(f, pair.alpha).rows()
    GI = matmul(matmul(transpose(M), G), M)
    C = EtaleElement.beta(f).mult_matrix()
    TI = matmul(matmul(inverse(M), C), M)
    out = {"gram_I": GI, "T_I": TI, "gram_integral": all(_is_integral(r) for r in GI),
           "T_I_integral": all(_is_integral(r) for r in TI), "gram_det": det(GI)}
    even = all(GI[i][i].denominator == 1 and GI[i][i] % 2 == 0 for i in range(D))
    out["even"] = even
    if plane is None or not out["gram_integral"]:
        return out
    Minv = inverse(M)
    ycoords = [[sum(Minv[i][j] * v[j] for j in range(D)) for i in range(D)] for v in plane.vectors()]
    # saturation N = span_Q(Y) cap Z^D, in I-coordinates
    import math

    L = []
    for v in ycoords:
        den = 1
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)
        L.append([int(x * den) for x in v])
    from .linalg import nullspace

    ortho = nullspace(L)
    ortho_int = []
    for v in ortho:
        den = 1
        for x in v:
            den = den * x.denominator // math.gcd(den, x.denominator)
        ortho_int.append([int(x * den) for x in v])
    N = _integer_kernel(ortho_int, D) if ortho_int else [[int(i == k) for i in range(D)] for k in range(D)]
    out["isotropic_saturation"] = N
    if not even or len(N) != n + 1:
        return out
    GIi = [[int(x) for x in row] for row in GI]
    E = [[sum(N[a][i] * GIi[i][j] for i in range(D)) for j in range(D)] for a in range(n + 1)]
    U = []
    for j in range(n + 1):
        u = _smith_free_solve(E, [int(i == j) for i in range(n + 1)])
        if u is None:
            out["dual_failed"] = j
            return out
        U.append(u)
    pair_int = lambda u, v: sum(u[i] * GIi[i][j] * v[j] for i in range(D) for j in range(D))
    F = []
    for j in range(n + 1):
        fj = list(U[j])
        for k in range(n + 1):
            c = pair_int(U[j], U[k]) // 2 if k == j else (pair_int(U[j], U[k]) if k < j else 0)
            fj = [x - c * y for x, y in zip(fj, N[k])]
        F.append(fj)
    # second pass: remaining cross terms <f_j, f_k> for k < j vanish by construction; verify
    basis = N + list(reversed(F))
    P = transpose([[Fraction(x) for x in v] for v in basis])
    Gh = matmul(matmul(transpose(P), [[Fraction(x) for x in r] for r in GIi]), P)
    out["hyperbolic_gram"] = Gh
    T = matmul(matmul(inverse(P), TI), P)
    out["T_standard"] = T
    out["T_standard_integral"] = all(_is_integral(r) for r in T)
    out["unimodular_basis"] = abs(det(P)) == 1
    return out
