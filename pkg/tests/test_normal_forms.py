import random

from hypothesis import given, settings, strategies as st

from spsteinberg.normal_forms import (content, determinant, hermite_form, identity, integer_kernel,
                                      matmul, smith_form, smith_invariants, solve_integer, transpose)

from oracles import det_laplace, invariant_factors_by_minors

small = st.integers(-9, 9)


def matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_smith_matches_minors_on_random_6x6():
    rng = random.Random(0)
    for _ in range(100):
        M = [[rng.randint(-9, 9) for _ in range(6)] for _ in range(6)]
        assert smith_invariants(M) == invariant_factors_by_minors(M)


def test_smith_known_example():
    M = [[2, 4, 4], [-6, 6, 12], [10, -4, -16]]
    assert smith_invariants(M) == [2, 6, 12]


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_smith_transforms(M):
    S = smith_form(M)
    assert matmul(matmul(S.U, M), S.V) == S.D
    assert matmul(S.U, S.U_inv) == identity(len(M))
    assert abs(determinant(S.U)) == 1 and abs(determinant(S.V)) == 1
    inv = S.invariants
    assert all(b % a == 0 for a, b in zip(inv, inv[1:]))
    assert all(d > 0 for d in inv)
    for i, row in enumerate(S.D):
        for j, x in enumerate(row):
            assert x == 0 or i == j


@settings(max_examples=150, deadline=None)
@given(matrices(4, 4))
def test_smith_invariants_against_minors(M):
    assert smith_invariants(M) == invariant_factors_by_minors(M)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_hermite_is_column_echelon_and_unimodular(M):
    H = hermite_form(M)
    assert matmul(M, H.V) == H.H
    assert abs(determinant(H.V)) == 1
    cols = H.columns()
    assert len(cols) == H.rank
    prev = -1
    for j, p in enumerate(H.pivots):
        assert p > prev
        prev = p
        assert H.H[p][j] > 0
        assert all(H.H[i][j] == 0 for i in range(p))
        for k in range(j):
            assert 0 <= H.H[p][k] < H.H[p][j]


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_determinant_against_laplace(M):
    assert determinant(M) == det_laplace(M)


@settings(max_examples=150, deadline=None)
@given(matrices(4, 4), st.lists(small, min_size=4, max_size=4))
def test_solve_integer_is_exact(A, x):
    x = x[:len(A[0])]
    b = [sum(a * y for a, y in zip(row, x)) for row in A]
    sol = solve_integer(A, b)
    assert sol is not None
    assert [sum(a * y for a, y in zip(row, sol)) for row in A] == b


def test_solve_integer_reports_no_solution():
    assert solve_integer([[2, 0], [0, 2]], [1, 0]) is None
    assert solve_integer([[1, 1]], [3]) is not None


@settings(max_examples=100, deadline=None)
@given(matrices(3, 5))
def test_integer_kernel(A):
    n = len(A[0])
    K = integer_kernel(A, n)
    for v in K:
        assert all(sum(a * x for a, x in zip(row, v)) == 0 for row in A)
    if K:
        assert smith_invariants([list(v) for v in K]) == [1] * len(K)


def test_content_and_transpose():
    assert content((4, -6, 0)) == 2
    assert content((0, 0)) == 0
    assert transpose([[1, 2, 3]]) == [[1], [2], [3]]
