"""Brute-force PSO(U)(F_q)-orbits on V_f(F_q) for genus one and very small q.

V(F_q) is parametrized by symmetric B (T = A B since A^{-1} = A).  PSO(U)(F_q) acts
through SO(U)(F_q) together with the similitude h = diag(u, .., u, 1, .., 1) for a
nonsquare u; +-g act identically, so |PSO(U)(F_q)| = |SO(U)(F_q)| and stabilizer
orders are (number of fixing group elements) / 2.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from sympy import isprime

from .errors import DomainError, Refusal
from .factor import factor_mod_p
from .orbits import CycleType, two_torsion_dim
from .poly import IntPoly, _coerce

MAX_Q = 5


@dataclass(frozen=True)
class CensusRow:
    q: int
    f: tuple  # low-first coefficients mod q
    points: int
    orbits: int
    stabilizers: tuple
    distinguished_orbits: int  # orbits with an isotropic span(X, TX) witness
    staircase_orbits: int  # orbits containing a staircase-shaped element
    cycle_type: tuple
    two_torsion: int

    def predicted_orbits(self):
        return 2 ** self.two_torsion

    def predicted_distinguished(self):
        """1 iff f has an odd-degree factor over F_q (the genus is odd here)."""
        return 1 if any(k % 2 for k in self.cycle_type) else 2

    def as_csv_fields(self):
        return [self.q, " ".join(map(str, self.f)), self.points, self.orbits,
                " ".join(map(str, self.stabilizers)), self.distinguished_orbits, self.staircase_orbits,
                " ".join(map(str, self.cycle_type)), self.two_torsion]


CSV_HEADER = ["q", "f_coeffs_low_first", "points", "orbits", "stabilizers",
              "distinguished_orbits", "staircase_orbits", "cycle_type", "two_torsion_dim"]


def rows_to_csv(rows):
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.as_csv_fields())
    return buf.getvalue()


def so_group_order(m, q):
    """|SO(U)(F_q)| for the split form of dimension 2m (group-order formula)."""
    out = q ** (m * (m - 1)) * (q ** m - 1)
    for i in range(1, m):
        out *= q ** (2 * i) - 1
    return out


def _check_params(n, q):
    if n != 1:
        raise Refusal(f"census supports n = 1 only (dim V = {(2 * n + 2) * (2 * n + 3) // 2})",
                      certificate={"estimated_matrices": q ** ((2 * n + 2) * (2 * n + 3) // 2)})
    if not isprime(q) or q == 2 or q > MAX_Q:
        raise Refusal(f"census supports odd primes q <= {MAX_Q}",
                      certificate={"estimated_matrices": q ** 10})


def _antidiag(D):
    return np.fliplr(np.eye(D, dtype=np.int64))


def orthogonal_group(D, q):
    """All g with g^t A g = A over F_q, found column by column."""
    A = _antidiag(D)
    vecs = np.array(np.meshgrid(*[np.arange(q)] * D, indexing="ij")).reshape(D, -1).T
    AV = vecs @ A  # row v -> v^t A
    gram_all = (AV @ vecs.T) % q  # pairing between every pair of vectors
    out = []

    def extend(cols):
        k = len(cols)
        if k == D:
            out.append(np.array([vecs[c] for c in cols]).T)
            return
        ok = gram_all[:, :].diagonal() == A[k, k]
        for j, c in enumerate(cols):
            ok &= gram_all[c] == A[j, k]
        for cand in np.nonzero(ok)[0]:
            extend(cols + [cand])

    extend([])
    return np.array(out, dtype=np.int64)


def _det_int(M):
    """Exact integer determinants of a stack of small square matrices (Leibniz)."""
    k = M.shape[-1]
    total = np.zeros(M.shape[:-2], dtype=np.int64)
    for perm in permutations(range(k)):
        sign = 1
        p = list(perm)
        for i in range(k):
            for j in range(i + 1, k):
                if p[i] > p[j]:
                    sign = -sign
        term = np.ones(M.shape[:-2], dtype=np.int64)
        for i in range(k):
            term = term * M[..., i, p[i]]
        total += sign * term
    return total


def charpoly_mod(T, q):
    """Low-first coefficients of det(x - T) mod q for a stack of D x D integer matrices."""
    from itertools import combinations

    D = T.shape[-1]
    es = []
    for k in range(1, D + 1):
        e = np.zeros(T.shape[0], dtype=np.int64)
        for idx in combinations(range(D), k):
            sub = T[:, idx][:, :, idx]
            e = (e + _det_int(sub)) % q
        es.append(e)
    # det(x - T) = sum_k (-1)^k e_k x^(D-k)
    low = []
    for j in range(D + 1):
        k = D - j
        if k == 0:
            low.append(np.ones(T.shape[0], dtype=np.int64))
        else:
            low.append(((-1) ** k * es[k - 1]) % q)
    return np.stack(low, axis=1)


def _encode(M, q):
    flat = M.reshape(M.shape[0], -1) % q
    w = q ** np.arange(flat.shape[1], dtype=np.int64)
    return flat @ w


def _decode(code, q, D):
    digits = []
    for _ in range(D * D):
        digits.append(code % q)
        code //= q
    return np.array(digits, dtype=np.int64).reshape(D, D)


def _symmetric_batch(start, stop, q, D):
    idx = np.arange(start, stop, dtype=np.int64)
    iu = np.triu_indices(D)
    B = np.zeros((stop - start, D, D), dtype=np.int64)
    for t, (i, j) in enumerate(zip(*iu)):
        digit = idx % q
        idx = idx // q
        B[:, i, j] = digit
        B[:, j, i] = digit
    return B


def _nonsquare(q):
    return next(u for u in range(2, q) if pow(u, (q - 1) // 2, q) == q - 1)


@dataclass
class _Group:
    elems: np.ndarray
    inverses: np.ndarray
    so_order: int


def pso_action(D, q):
    """Matrices realizing the PSO(U)(F_q)-action by conjugation (each class appears twice)."""
    O = orthogonal_group(D, q)
    dets = np.round(np.linalg.det(O.astype(float))).astype(np.int64) % q
    SO = O[dets == 1]
    m = D // 2
    u = _nonsquare(q)
    h = np.diag([u] * m + [1] * m).astype(np.int64)
    hinv = np.diag([pow(u, -1, q)] * m + [1] * m).astype(np.int64)
    A = _antidiag(D)
    # inverse of an isometry: g^{-1} = A g^t A
    inv = np.einsum("ij,njk,kl->nil", A, np.transpose(SO, (0, 2, 1)), A) % q
    elems = np.concatenate([SO, (SO @ h) % q])
    inverses = np.concatenate([inv, (hinv @ inv) % q])
    return _Group(elems, inverses, len(SO))


def _all_matrices(q, D):
    """(char-poly keys, T codes, stack of T) for every self-adjoint T over F_q."""
    total = q ** (D * (D + 1) // 2)
    keys, codes = [], []
    chunk = 200000
    for start in range(0, total, chunk):
        B = _symmetric_batch(start, min(total, start + chunk), q, D)
        T = B[:, ::-1, :]  # A B
        cp = charpoly_mod(T, q)
        keys.append(cp @ (q ** np.arange(D + 1, dtype=np.int64)))
        codes.append(_encode(T, q))
    return np.concatenate(keys), np.concatenate(codes)


def _has_staircase(Ts, D):
    """b_ij = 0 for i + j <= D - 3 (0-indexed), B = A T."""
    Bs = Ts[:, ::-1, :]
    mask = np.ones(len(Ts), dtype=bool)
    for i in range(D):
        for j in range(D):
            if i + j <= D - 3:
                mask &= Bs[:, i, j] == 0
    return mask


def _isotropic_span_witness(T, q):
    """Is there a line X = <v> with span(v, Tv) an isotropic plane?  (genus one only)"""
    D = T.shape[0]
    A = _antidiag(D)
    V = np.array(np.meshgrid(*[np.arange(q)] * D, indexing="ij")).reshape(D, -1).T[1:]
    W = (V @ T.T) % q
    ok = ((np.einsum("ni,ij,nj->n", V, A, V) % q == 0)
          & (np.einsum("ni,ij,nj->n", V, A, W) % q == 0)
          & (np.einsum("ni,ij,nj->n", W, A, W) % q == 0))
    # independence: W is not a multiple of V
    for c in range(q):
        ok &= ~np.all((W - c * V) % q == 0, axis=1)
    return bool(ok.any())


def _orbits_for(codes, group, q, D):
    remaining = set(int(c) for c in codes)
    orbits, stabs, dist, staircase = [], [], 0, 0
    while remaining:
        c0 = min(remaining)
        T0 = _decode(c0, q, D)
        conj = np.einsum("nij,jk,nkl->nil", group.elems, T0, group.inverses) % q
        cs = _encode(conj, q)
        orbit = set(int(x) for x in np.unique(cs))
        if not orbit <= remaining:
            raise AssertionError("orbit leaves the fiber")
        stabs.append(int(np.count_nonzero(cs == c0)) // 2)
        remaining -= orbit
        orbits.append(orbit)
        Ts = np.array([_decode(x, q, D) for x in orbit])
        staircase += int(_has_staircase(Ts, D).any())
        dist += int(_isotropic_span_witness(T0, q))
    return orbits, stabs, dist, staircase


def _row(q, f, codes, group, D):
    orbits, stabs, dist, staircase = _orbits_for(codes, group, q, D)
    fl = factor_mod_p(IntPoly(f), q)
    ct = CycleType.from_factor_list(fl)
    return CensusRow(q, tuple(f), len(codes), len(orbits), tuple(sorted(stabs)), dist, staircase,
                     tuple(sorted(ct.partition)), two_torsion_dim(ct))


def _separable_mod(f, q):
    fl = factor_mod_p(IntPoly(f), q)
    return all(e == 1 for _, e in fl.factors)


def ff_orbit_census(n, q, f):
    """(|V_f(F_q)|, number of PSO-orbits, stabilizer orders) plus the full row."""
    _check_params(n, q)
    D = 2 * n + 2
    f = [c % q for c in _coerce(f).coeffs]
    if len(f) != D + 1 or f[-1] != 1:
        raise DomainError(f"f must be monic of degree {D} mod {q}")
    if not _separable_mod(f, q):
        raise DomainError(f"f is not separable mod {q}")
    keys, codes = _all_matrices(q, D)
    key = sum(c * q ** i for i, c in enumerate(f))
    group = pso_action(D, q)
    row = _row(q, f, codes[keys == key], group, D)
    return row


def ff_census_all(n, q):
    """Census rows for every separable monic f of degree 2n+2 over F_q."""
    _check_params(n, q)
    D = 2 * n + 2
    keys, codes = _all_matrices(q, D)
    order = np.argsort(keys, kind="stable")
    keys, codes = keys[order], codes[order]
    group = pso_action(D, q)
    rows = []
    for idx in range(q ** D):
        f = [(idx // q ** i) % q for i in range(D)] + [1]
        if not _separable_mod(f, q):
            continue
        key = sum(c * q ** i for i, c in enumerate(f))
        lo, hi = np.searchsorted(keys, key), np.searchsorted(keys, key, side="right")
        rows.append(_row(q, f, codes[lo:hi], group, D))
    return rows, group.so_order
