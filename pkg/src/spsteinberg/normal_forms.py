"""Smith and Hermite normal forms over the integers, with unimodular transforms.

Matrices are plain lists of rows holding Python ints, so entries never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def copy_matrix(M: Sequence[Sequence[int]]) -> Matrix:
    return [list(map(int, row)) for row in M]


def transpose(M: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def shape(M: Sequence[Sequence[int]]) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def _symmetric_quotient(a: int, b: int) -> int:
    """Quotient q with |a - q*b| <= |b|/2, which keeps entries small."""
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1 if (r > 0) == (b > 0) else -1
    return q


@dataclass(frozen=True)
class SmithResult:
    """U * M * V == D, with U and V unimodular; U_inv is the inverse of U."""

    D: Matrix
    U: Matrix
    V: Matrix
    U_inv: Matrix
    rank: int

    @property
    def invariants(self) -> list[int]:
        return [self.D[i][i] for i in range(self.rank)]


def smith_form(M: Sequence[Sequence[int]], want_transforms: bool = True) -> SmithResult:
    """Smith normal form with minimal-absolute-value pivoting.

    Without transforms the three returned matrices are empty lists.
    """
    A = copy_matrix(M)
    m, n = shape(A)
    if want_transforms:
        U, V, Ui = identity(m), identity(n), identity(m)
    else:
        U, V, Ui = [], [], []

    def row_addmul(dst: int, src: int, q: int) -> None:
        # row_dst -= q * row_src
        if q == 0:
            return
        ra, rs = A[dst], A[src]
        for j in range(n):
            if rs[j]:
                ra[j] -= q * rs[j]
        if want_transforms:
            ua, us = U[dst], U[src]
            for j in range(m):
                if us[j]:
                    ua[j] -= q * us[j]
            for row in Ui:
                if row[dst]:
                    row[src] += q * row[dst]

    def col_addmul(dst: int, src: int, q: int) -> None:
        if q == 0:
            return
        for row in A:
            if row[src]:
                row[dst] -= q * row[src]
        if want_transforms:
            for row in V:
                if row[src]:
                    row[dst] -= q * row[src]

    def swap_rows(i: int, j: int) -> None:
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        if want_transforms:
            U[i], U[j] = U[j], U[i]
            for row in Ui:
                row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        if i == j:
            return
        for row in A:
            row[i], row[j] = row[j], row[i]
        if want_transforms:
            for row in V:
                row[i], row[j] = row[j], row[i]

    def negate_row(i: int) -> None:
        A[i] = [-x for x in A[i]]
        if want_transforms:
            U[i] = [-x for x in U[i]]
            for row in Ui:
                row[i] = -row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        swap_rows(t, best[1])
        swap_cols(t, best[2])
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    row_addmul(i, t, _symmetric_quotient(A[i][t], p))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    col_addmul(j, t, _symmetric_quotient(A[t][j], p))
                    if A[t][j]:
                        clean = False
            if not clean:
                # a remainder is smaller than the pivot; bring it in
                best = None
                for i in range(t + 1, m):
                    if A[i][t] and (best is None or abs(A[i][t]) < best[0]):
                        best = (abs(A[i][t]), i, None)
                for j in range(t + 1, n):
                    if A[t][j] and (best is None or abs(A[t][j]) < best[0]):
                        best = (abs(A[t][j]), None, j)
                if best[1] is not None:
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[2])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_addmul(t, bad, -1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    return SmithResult(A, U, V, Ui, t)


def smith_invariants(M: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors d_1 | d_2 | ... of M."""
    if not M or not M[0]:
        return []
    return smith_form(M, want_transforms=False).invariants


@dataclass(frozen=True)
class HermiteResult:
    """H == M * V in column echelon form, V unimodular."""

    H: Matrix
    V: Matrix
    rank: int
    pivots: tuple[int, ...]

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(row[j] for row in self.H) for j in range(self.rank)]


def _row_hermite(R: Matrix, ncols: int) -> tuple[Matrix, Matrix, list[int]]:
    """Row-style Hermite form: returns (H, T, pivots) with H == T * R."""
    m = len(R)
    H = copy_matrix(R)
    T = identity(m)
    pivots: list[int] = []
    top = 0
    for c in range(ncols):
        if top >= m:
            break
        while True:
            rows = [i for i in range(top, m) if H[i][c]]
            if not rows:
                break
            piv = min(rows, key=lambda i: abs(H[i][c]))
            H[top], H[piv] = H[piv], H[top]
            T[top], T[piv] = T[piv], T[top]
            p = H[top][c]
            done = True
            for i in range(top + 1, m):
                if H[i][c]:
                    q = H[i][c] // p
                    H[i] = [a - q * b for a, b in zip(H[i], H[top])]
                    T[i] = [a - q * b for a, b in zip(T[i], T[top])]
                    if H[i][c]:
                        done = False
            if done:
                break
        if top < m and H[top][c]:
            if H[top][c] < 0:
                H[top] = [-a for a in H[top]]
                T[top] = [-a for a in T[top]]
            p = H[top][c]
            for i in range(top):
                q = H[i][c] // p
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[top])]
                    T[i] = [a - q * b for a, b in zip(T[i], T[top])]
            pivots.append(c)
            top += 1
    return H, T, pivots


def hermite_form(M: Sequence[Sequence[int]]) -> HermiteResult:
    """Column Hermite normal form H = M * V.

    Nonzero columns come first; column j has its leading entry in row
    pivots[j], positive, with entries to its left in that row reduced into
    [0, pivot). The nonzero columns depend only on the lattice the columns of
    M generate, which makes them a canonical key.
    """
    m, n = shape(M)
    Ht, T, pivots = _row_hermite(transpose(M, n), m)
    return HermiteResult(transpose(Ht, n) if n else [[] for _ in range(m)],
                         transpose(T, n) if n else [], len(pivots), tuple(pivots))


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    A = copy_matrix(M)
    n = len(A)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def solve_integer(A: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """Some integer x with A x == b, or None when no integer solution exists."""
    m, n = shape(A)
    if m == 0:
        return [0] * n
    S = smith_form(A)
    c = [sum(u * bi for u, bi in zip(row, b)) for row in S.U]
    y = [0] * n
    for i in range(S.rank):
        d = S.D[i][i]
        if c[i] % d:
            return None
        y[i] = c[i] // d
    if any(c[i] for i in range(S.rank, m)):
        return None
    return [sum(v * yi for v, yi in zip(row, y)) for row in S.V]


def integer_kernel(A: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Basis of {x in Z^ncols : A x = 0}; the result is saturated."""
    if not A:
        return [tuple(int(i == j) for i in range(ncols)) for j in range(ncols)]
    S = smith_form(A)
    return [tuple(row[j] for row in S.V) for j in range(S.rank, ncols)]
