import itertools
import random

import pytest

from spsteinberg.errors import NotASimplexError, PreconditionError
from spsteinberg.lattice import add, apply, canonical_line, e, f, random_symplectic_matrix, sub
from spsteinberg.simplex_types import (Family, NotASimplex, RelativeContext, augmentation_core, classify,
                                       is_carrying, is_minimal, literal_tags, locate, member_of, rank,
                                       relative_type, rho_reduce, verify_witness, vertex_allowed)

L = canonical_line


def lines(*vs):
    return [L(v) for v in vs]


# ----------------------------------------------------- worked examples


def ia_examples(n, l):
    E = lambda i: e(i, n)
    F = lambda i: f(i, n)
    es = [E(i) for i in range(1, l + 1)]
    out = [("standard", es)]
    if l >= 2:
        out.append(("two_additive", [add(E(1), E(2))] + es))
    out.append(("sigma", es + [F(l)]))
    if l >= 3:
        out.append(("mixed", [add(E(1), E(2))] + es + [F(l)]))
    return out


def baa_examples(n, l):
    E = lambda i: e(i, n)
    es = [E(i) for i in range(1, l + 1)]
    out = []
    if l >= 3:
        out.append(("three_additive", [add(E(1), E(2), E(3))] + es))
        out.append(("double_triple", [add(E(1), E(2)), add(E(1), E(3))] + es))
    if l >= 4:
        out.append(("double_double", [add(E(1), E(2)), add(E(3), E(4))] + es))
    return out


def iaa_examples(n, l):
    E = lambda i: e(i, n)
    F = lambda i: f(i, n)
    es = [E(i) for i in range(1, l + 1)]
    out = []
    if l >= 2:
        out += [
            ("sigma2", es + [F(2), F(1)], lines(E(2), E(1), F(2), F(1))),
            ("skew_additive", es + [sub(F(1), F(2))], lines(E(1), E(2), sub(F(1), F(2)))),
            ("two_skew_additive", [add(E(1), E(2))] + es + [sub(F(1), F(2))],
             lines(add(E(1), E(2)), E(1), E(2), sub(F(1), F(2)))),
            ("skew_sigma2", es + [F(2), sub(F(1), F(2))], lines(E(2), E(1), F(2), sub(F(1), F(2)))),
        ]
    out.append(("sigma_additive", es + [F(l), add(E(l), F(l))], lines(E(l), F(l), add(E(l), F(l)))))
    return out


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_ia_and_baa_examples(n):
    for l in range(1, n + 1):
        for tag, vs in ia_examples(n, l) + baa_examples(n, l):
            t = classify(lines(*vs))
            assert t.tag == tag, (n, l, tag, t)
            assert verify_witness(lines(*vs), t)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_iaa_examples_and_cores(n):
    for l in range(1, n + 1):
        for tag, vs, core in iaa_examples(n, l):
            S = lines(*vs)
            t = classify(S)
            assert t.tag == tag and verify_witness(S, t)
            got, minimal = augmentation_core(S)
            assert set(got) == set(core)
            assert minimal == (l <= 2 if tag != "sigma_additive" else l == 1)


def test_family_membership_examples():
    n = 3
    sigma = lines(e(1, n), e(2, n), e(3, n), f(3, n))
    assert member_of(sigma, Family.I_SIGMA_DELTA)
    assert not member_of(sigma, Family.I_DELTA)
    mixed = lines(add(e(1, n), e(2, n)), e(1, n), e(2, n), e(3, n), f(3, n))
    assert classify(mixed).tag == "mixed"
    assert member_of(mixed, Family.IAA1)
    assert member_of(mixed, Family.IA) and not member_of(mixed, Family.I_SIGMA_DELTA)


def relative_vertex_cases(m, n):
    N = m + n
    ctx = RelativeContext(m=m)
    out = []
    v = L(add(e(2, N), e(3, N)))
    for fam in Family:
        out.append((vertex_allowed(v, ctx, fam), m <= 2))
    w = L(add(f(2, N), f(3, N)))
    for fam in Family:
        if not fam.isotropic_only:
            out.append((vertex_allowed(w, ctx, fam), m <= 1))
    u = L(add(e(3, N), e(4, N)))
    link = RelativeContext(m=m, delta=(L(e(4, N)),))
    hat = RelativeContext(m=m, delta=(L(e(4, N)),), hat=True)
    for fam in Family:
        if fam in (Family.B, Family.I) or m > 3:
            continue
        out.append((member_of([u], fam, link), True))
        out.append((member_of([u], fam, hat), m <= 2))
    fm = L(f(m + 1, N))
    link = RelativeContext(m=m, delta=(L(e(m + 1, N)),))
    hat = RelativeContext(m=m, delta=(L(e(m + 1, N)),), hat=True)
    for fam in Family:
        if fam in (Family.I, Family.I_DELTA, Family.IAA0, Family.B, Family.BA, Family.BAA):
            continue
        out.append((member_of([fm], fam, link), True))
        out.append((member_of([fm], fam, hat), False))
    return out


@pytest.mark.parametrize("m,n", [(0, 4), (1, 3), (2, 2), (3, 1), (3, 2), (4, 1)])
def test_relative_vertex_examples(m, n):
    for got, want in relative_vertex_cases(m, n):
        assert got == want


def relative_type_cases(m, n):
    N = m + n
    E = lambda i: e(i, N)
    F = lambda i: f(i, N)
    ctx = RelativeContext(m=m)
    hat = lambda *d: RelativeContext(m=m, delta=tuple(lines(*d)), hat=True)
    return [
        (lines(E(m + 3), add(E(1), E(2), E(m + 3))), ctx, "three_additive", "external"),
        (lines(E(m + 3), add(E(m + 1), E(m + 2), E(m + 3))), hat(E(m + 1), E(m + 2)), "three_additive",
         "delta_related"),
        (lines(add(E(1), E(m + 2)), add(E(1), E(m + 3)), E(m + 2), E(m + 3)), ctx, "double_triple", "external"),
        (lines(add(E(m + 1), E(m + 2)), add(E(m + 1), E(m + 3)), E(m + 2), E(m + 3)), hat(E(m + 1)),
         "double_triple", "delta_related"),
        (lines(E(m + 1), F(m + 1), E(m + 2), F(m + 2)), ctx, "sigma2", "internal"),
        (lines(E(m + 2), F(m + 2)), hat(E(m + 1), F(m + 1)), "sigma2", "delta_related"),
        (lines(add(E(m + 1), E(m + 2)), E(m + 1), E(m + 2), sub(F(m + 1), F(m + 2))), ctx,
         "two_skew_additive", "internal"),
        (lines(E(m + 1), E(m + 2), sub(F(m + 1), F(m + 2))), hat(add(E(m + 1), E(m + 2))),
         "two_skew_additive", "delta_related"),
    ]


@pytest.mark.parametrize("m,n", [(3, 3), (3, 4), (4, 3)])
def test_relative_type_and_location_examples(m, n):
    for S, ctx, tag, where in relative_type_cases(m, n):
        assert member_of(S, Family.IAA, ctx)
        assert relative_type(S, ctx).tag == tag
        assert is_minimal(S, ctx)
        assert locate(S, ctx) == where


def test_not_a_simplex():
    S = lines(e(1, 2), (1, 0, 2, 0))
    assert classify(S) is NotASimplex
    assert not classify(S)
    with pytest.raises(NotASimplexError):
        augmentation_core(S)


def test_augmentation_core_examples():
    n = 3
    core, minimal = augmentation_core(lines(add(e(1, n), e(2, n)), e(1, n), e(2, n), e(3, n)))
    assert set(core) == set(lines(add(e(1, n), e(2, n)), e(1, n), e(2, n))) and not minimal
    assert augmentation_core(lines(e(1, n), e(2, n))) == ((), False)
    S = lines(e(2, n), f(2, n), add(e(2, n), f(2, n)))
    core, minimal = augmentation_core(S)
    assert set(core) == set(S) and minimal


# ------------------------------------------------- invariance and audits


def test_classification_is_sp_invariant():
    rng = random.Random(4)
    n = 3
    for _ in range(40):
        g = random_symplectic_matrix(n, rng)
        for l in (2, 3):
            for tag, vs in ia_examples(n, l) + baa_examples(n, l):
                assert classify([L(apply(g, v)) for v in vs]).tag == tag
            for tag, vs, _ in iaa_examples(n, l):
                assert classify([L(apply(g, v)) for v in vs]).tag == tag


def enumerated_simplices(n, families=("IAA", "IAA2", "BAA")):
    from spsteinberg.complexes import build_complex

    seen = set()
    for fam in families:
        X = build_complex(fam, n, B=1)
        for s in X.all_simplices():
            seen.add(tuple(X.lines_of(s)))
    return sorted(seen)


@pytest.mark.parametrize("n", [1, 2])
def test_uniqueness_audit(n):
    multi = []
    for S in enumerated_simplices(n):
        tags = literal_tags(S)
        if len(tags) != 1 or classify(S).tag != tags[0]:
            multi.append((S, tags, classify(S).tag))
    assert multi == []


def test_literal_mixed_reading_overlaps_two_skew_additive():
    n = 2
    S = lines(add(e(1, n), e(2, n)), e(1, n), e(2, n), f(2, n))
    assert sorted(literal_tags(S, mixed_literal=True)) == ["mixed", "two_skew_additive"]
    assert literal_tags(S) == ["two_skew_additive"]
    assert classify(S).tag == "two_skew_additive"


FAMILY_CHAINS = [
    (Family.I, Family.I_DELTA, Family.I_SIGMA_DELTA, Family.IA, Family.IAA_STAR, Family.IAA),
    (Family.IAA0, Family.IAA1, Family.IAA15, Family.IAA2),
    (Family.B, Family.BA, Family.BAA),
]


@pytest.mark.parametrize("n", [1, 2])
def test_family_inclusion_chains(n):
    for S in enumerated_simplices(n):
        for chain in FAMILY_CHAINS:
            flags = [member_of(S, fam) for fam in chain]
            assert flags == sorted(flags), (S, chain, flags)


# ------------------------------------------------------- rank and rho


def test_rank_examples():
    N = 3
    assert rank(L(f(N, N)), N) == 1
    assert rank(L(e(1, N)), N) == 0
    assert rank(L(add(e(1, N), (0, 0, 0, 0, 0, 3))), N) == 3


def test_rho_examples():
    n = 2
    s = L(f(2, n))
    assert rho_reduce(L((1, 0, 0, 2)), s, 1) == L(e(1, n))
    assert rho_reduce(L(e(1, n)), s, 1) == L(e(1, n))
    s2 = L((1, 0, 0, 2))
    assert rho_reduce(L((0, 0, 1, 1)), s2, 2) == L((0, 0, 1, 1))
    with pytest.raises(PreconditionError):
        rho_reduce(L(e(1, n)), s2, 1)


def test_carrying_examples():
    N = 3
    s = L((0, 0, 0, 0, 1, 2))
    v1, v2 = (1, 0, 0, 0, 0, 1), (0, 0, 1, 0, 0, 1)
    v0 = add(v1, v2)
    assert is_carrying(lines(v0, v1, v2), s, 2)
    v1b = (1, 0, 0, 0, 0, 2)
    assert not is_carrying(lines(add(v1b, v2), v1b, v2), s, 2)
    assert not is_carrying(lines(add(e(1, N), e(2, N)), e(1, N), e(2, N)), s, 2)


NON_ADDITIVE = ("standard", "sigma", "sigma2", "skew_additive", "skew_sigma2")


def non_additive_instance(rng):
    """(ctx, s, R, tau, Delta') with Delta' a non-additive simplex in the hatted
    link of the standard simplex {s} of the relative complex."""
    while True:
        m, n = rng.randint(0, 2), rng.randint(3, 4)
        N = m + n
        h = random_symplectic_matrix(n, rng, steps=rng.randint(3, 8))
        g = [[int(i == j) for j in range(2 * N)] for i in range(2 * N)]
        for i in range(2 * n):
            for j in range(2 * n):
                g[2 * m + i][2 * m + j] = h[i][j]
        a = lambda i: apply(g, e(m + i, N))
        b = lambda i: apply(g, f(m + i, N))
        s = L(a(1))
        R = rank(s, N)
        if R == 0:
            continue
        tau = rng.choice(NON_ADDITIVE)
        if tau == "standard":
            model = [a(i) for i in range(2, n + 1)][:rng.randint(1, n - 1)]
        elif tau == "sigma":
            model = [a(2), b(2)] + ([a(3)] if rng.random() < 0.5 else [])
        elif tau == "sigma2":
            model = [a(2), b(2), a(3), b(3)]
        elif tau == "skew_additive":
            model = [a(2), a(3), sub(b(2), b(3))]
        else:
            model = [a(3), a(2), b(3), sub(b(2), b(3))]
        sbar = s.rep if s.rep[-1] >= 0 else tuple(-x for x in s.rep)
        verts = []
        for v in model:
            c = rng.randint(-3, 3)
            w = [x + c * y for x, y in zip(v, sbar)]
            for i in range(m):
                w[2 * i] += rng.randint(-2, 2)
            verts.append(L(w))
        ctx = RelativeContext(m=m, delta=(s,), hat=True)
        return ctx, s, R, tau, verts


def rho_type_preservation(samples=500, seed=0):
    rng = random.Random(seed)
    failures = []
    for _ in range(samples):
        ctx, s, R, tau, verts = non_additive_instance(rng)
        assert member_of(verts, Family.IAA, ctx) and relative_type(verts, ctx).tag == tau
        img = [rho_reduce(v, s, R) for v in verts]
        ok = (all(0 <= rank(v, s.genus) < R for v in img) and len(set(img)) == len(verts)
              and member_of(img, Family.IAA, ctx) and relative_type(img, ctx).tag == tau)
        if not ok:
            failures.append((tau, verts, img))
    return failures


def test_rho_preserves_non_additive_types():
    assert rho_type_preservation() == []


def test_rho_rank_bound_property():
    rng = random.Random(11)
    for _ in range(500):
        N = rng.randint(1, 4)
        R = rng.randint(1, 7)
        s_vec = [rng.randint(-4, 4) for _ in range(2 * N)]
        s_vec[-1] = R
        try:
            s = L(s_vec)
        except Exception:
            continue
        if rank(s, N) != R:
            continue
        v = [rng.randint(-20, 20) for _ in range(2 * N)]
        if not any(v):
            continue
        v = L(v)
        if v == s:
            continue
        assert 0 <= rank(rho_reduce(v, s, R), N) < R
