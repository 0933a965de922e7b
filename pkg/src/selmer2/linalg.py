"""Exact dense linear algebra over Q (lists of lists of Fraction) and over Z."""
from __future__ import annotations

from fractions import Fraction

from .errors import DomainError


def qmat(rows):
    return [[Fraction(x) for x in row] for row in rows]


def identity(n):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r, c=None):
    return [[Fraction(0)] * (r if c is None else c) for _ in range(r)]


def transpose(m):
    return [list(col) for col in zip(*m)]


def matmul(a, b):
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def dot(u, v):
    return sum((x * y for x, y in zip(u, v)), Fraction(0))


def bilinear(g, u, v):
    """u^t g v."""
    return dot(u, matvec(g, v))


def congruence(p, g):
    """P^t G P."""
    return matmul(matmul(transpose(p), g), p)


def matsub(a, b):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def is_symmetric(m):
    n = len(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


def rref(m):
    """Reduced row echelon form and pivot columns."""
    a = [list(map(Fraction, row)) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m):
    return len(rref(m)[1]) if m else 0


def nullspace(m):
    """Basis of {v : m v = 0}."""
    cols = len(m[0])
    red, piv = rref(m)
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for r, pc in enumerate(piv):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(a, b):
    """Solve a x = b for a square invertible a; b a vector or a matrix (list of columns not needed)."""
    n = len(a)
    vec = not isinstance(b[0], (list, tuple))
    rhs = [[x] for x in b] if vec else [list(r) for r in b]
    aug = [list(map(Fraction, a[i])) + list(map(Fraction, rhs[i])) for i in range(n)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise DomainError("singular system")
    sol = [row[n:] for row in red[:n]]
    return [r[0] for r in sol] if vec else sol


def inverse(a):
    n = len(a)
    return solve(a, identity(n))


def det(a):
    """Determinant by fraction-free Bareiss when integral, Gaussian elimination otherwise."""
    n = len(a)
    if n == 0:
        return Fraction(1)
    if all(isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1) for row in a for x in row):
        return Fraction(bareiss_det([[int(x) for x in row] for row in a]))
    m = [list(map(Fraction, row)) for row in a]
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return out


def bareiss_det(a):
    m = [list(row) for row in a]
    n = len(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            sw = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if sw is None:
                return 0
            m[k], m[sw] = m[sw], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def charpoly(a):
    """Characteristic polynomial det(xI - a), low-first Fraction list (Faddeev-LeVerrier)."""
    n = len(a)
    a = qmat(a)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = zeros(n)
    for k in range(1, n + 1):
        am = matmul(a, m)
        m = [[am[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        am = matmul(a, m)
        coeffs[n - k] = -sum(am[i][i] for i in range(n)) / k
    return coeffs


def hnf_rows(rows):
    """Row Hermite normal form (upper triangular, positive pivots) of an integer lattice.

    Returns the nonzero rows; they form a basis of the Z-span of ``rows``.
    """
    a = [list(map(int, r)) for r in rows]
    if not a:
        return []
    cols = len(a[0])
    out = []
    r = 0
    for c in range(cols):
        # gcd-reduce column c among rows r..end
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[i0] = a[i0], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < len(a) and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == len(a):
                break
    out = [row for row in a[:r] if any(row)]
    return out
