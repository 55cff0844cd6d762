"""Independent brute-force oracles used only by the tests."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd


def det_laplace(M):
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        if M[0][j]:
            minor = [row[:j] + row[j + 1:] for row in M[1:]]
            total += (-1) ** j * M[0][j] * det_laplace(minor)
    return total


def det_fraction(M):
    """Gaussian elimination over the rationals."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    d = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            d = -d
        d *= A[c][c]
        for r in range(c + 1, n):
            q = A[r][c] / A[c][c]
            for k in range(c, n):
                A[r][k] -= q * A[c][k]
    return int(d)


def invariant_factors_by_minors(M):
    """d_k = D_k / D_{k-1} with D_k the gcd of all k x k minors."""
    rows, cols = len(M), len(M[0]) if M else 0
    prev, out = 1, []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                g = gcd(g, det_fraction([[M[r][c] for c in cs] for r in rs]))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


def J(n):
    out = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        out[2 * i][2 * i + 1] = 1
        out[2 * i + 1][2 * i] = -1
    return out


def mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def T(A):
    return [list(r) for r in zip(*A)]


def preserves_form(M):
    n = len(M) // 2
    return mul(mul(T(M), J(n)), M) == J(n)


def omega_matrix(u, v):
    n = len(u) // 2
    Jv = [sum(J(n)[i][k] * v[k] for k in range(2 * n)) for i in range(2 * n)]
    return sum(a * b for a, b in zip(u, Jv))


def rank_fraction(M):
    A = [[Fraction(x) for x in row] for row in M]
    r = 0
    cols = len(A[0]) if A else 0
    for c in range(cols):
        p = next((i for i in range(r, len(A)) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        for i in range(len(A)):
            if i != r and A[i][c]:
                q = A[i][c] / A[r][c]
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        r += 1
    return r


def boundary_rank_betti(bases):
    """Reduced rational Betti numbers of a face-closed complex by dense ranks."""
    bases = dict(bases)
    bases[-1] = [()]
    idx = {k: {s: i for i, s in enumerate(v)} for k, v in bases.items()}
    ranks = {}
    for k in bases:
        if k < 0:
            continue
        M = [[0] * len(bases[k]) for _ in range(len(bases[k - 1]))]
        for j, s in enumerate(bases[k]):
            for i in range(len(s)):
                M[idx[k - 1][s[:i] + s[i + 1:]]][j] = (-1) ** i
        ranks[k] = rank_fraction(M) if M and M[0] else 0
    return {k: len(bases[k]) - ranks.get(k, 0) - ranks.get(k + 1, 0) for k in bases}
