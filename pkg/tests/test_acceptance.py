"""One pass/fail line per acceptance criterion, with wall time and budget.

Run under pytest, or directly with `python3 tests/test_acceptance.py`.
"""

import os
import random
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from spsteinberg.certificates import MODULE_MIN_GENUS, verify_coinvariants, recheck, verify_relation_soundness
from spsteinberg.complexes import build_complex, build_tits_poset, enumerate_lines
from spsteinberg.errors import HypothesisViolation, NotASimplexError
from spsteinberg.homology import boundary_of_simplex_complex, chain_complex, chain_complex_from_bases, homology
from spsteinberg.lattice import e
from spsteinberg.normal_forms import smith_invariants
from spsteinberg.simplex_types import (Family, NotASimplex, augmentation_core, classify, is_minimal, locate,
                                       member_of, relative_type, verify_witness)
from spsteinberg.weyl import all_elements, length_bfs, sign_character

import test_diagram
import test_homology
import test_lattice
import test_simplex_types as st_
from oracles import invariant_factors_by_minors


def criterion_1():
    for n in range(1, 6):
        for l in range(1, n + 1):
            for tag, vs in st_.ia_examples(n, l) + st_.baa_examples(n, l):
                S = st_.lines(*vs)
                t = classify(S)
                if t.tag != tag or not verify_witness(S, t):
                    return False, f"{tag} n={n} l={l} gave {t}"
            for tag, vs, core in st_.iaa_examples(n, l):
                S = st_.lines(*vs)
                got, minimal = augmentation_core(S)
                want_min = l <= 2 if tag != "sigma_additive" else l == 1
                if classify(S).tag != tag or set(got) != set(core) or minimal != want_min:
                    return False, f"{tag} n={n} l={l}"
    for m, n in [(0, 4), (1, 3), (2, 2), (3, 1), (3, 2), (4, 1)]:
        if any(g != w for g, w in st_.relative_vertex_cases(m, n)):
            return False, f"relative vertex example m={m} n={n}"
    for m, n in [(3, 3), (3, 4), (4, 3)]:
        for S, ctx, tag, where in st_.relative_type_cases(m, n):
            if not (member_of(S, Family.IAA, ctx) and relative_type(S, ctx).tag == tag
                    and is_minimal(S, ctx) and locate(S, ctx) == where):
                return False, f"relative type {tag} m={m} n={n}"
    bad = st_.lines(e(1, 2), (1, 0, 2, 0))
    if classify(bad) is not NotASimplex:
        return False, "non-simplex accepted"
    return True, "all worked examples match"


def criterion_2():
    count = test_lattice.extension_instances()
    rng = random.Random(0)
    agree = 0
    for _ in range(100):
        M = [[rng.randint(-9, 9) for _ in range(6)] for _ in range(6)]
        agree += smith_invariants(M) == invariant_factors_by_minors(M)
    return count == 1000 and agree == 100, f"{count}/1000 extensions, {agree}/100 SNF"


def criterion_3():
    for k in range(1, 6):
        H = homology(chain_complex_from_bases(boundary_of_simplex_complex(k)))
        if any(H.betti(d) != (d == k - 1) or H.torsion(d) for d in range(-1, k)):
            return False, f"sphere k={k}"
    checked = 0
    for n in (1, 2):
        for fam in Family:
            X = build_complex(fam, n, B=1)
            if homology(chain_complex(X)).euler_characteristic(reduced=True) != X.euler_characteristic():
                return False, f"Euler {fam.value} n={n}"
            checked += 1
    H = homology(chain_complex(build_tits_poset(enumerate_lines(1, 1))))
    return H.betti(0) == 3, f"spheres k<=5, {checked} complexes, tits H0 rank {H.betti(0)}"


def criterion_4():
    total = 0
    for n in (1, 2):
        for basis in test_homology.random_bases(n):
            if test_homology.apartment_checks(n, basis) != (True, True, True):
                return False, f"basis failed at n={n}"
            total += 1
    return True, f"{total} bases: cycles, nonzero, push forward up to sign"


def criterion_5():
    one = verify_relation_soundness(1, instances=20)
    if not (one["all_bound"] and all(r["difference_cycle_terms"] == 0 for r in one["instances"])):
        return False, "n=1 chains not zero"
    two = verify_relation_soundness(2, instances=20)
    kinds = [r["kind"] for r in two["instances"]]
    ok = two["all_bound"] and kinds.count("b") >= 20 and kinds.count("c") >= 20
    ok = ok and all(r["witness_verified"] for r in two["instances"])
    return ok, f"n=1 {len(one['instances'])} zero chains; n=2 {len(kinds)} instances bound"


def criterion_6():
    sizes = []
    for n in (1, 2, 3):
        W = all_elements(n)
        sizes.append(len(W))
        if any(sign_character(p) != (-1) ** length_bfs(p) for p in W):
            return False, f"mismatch in W_{n}"
    W2 = all_elements(2)
    mult = all(sign_character(a * b) == sign_character(a) * sign_character(b) for a in W2 for b in W2)
    return mult and sizes == [2, 8, 48], f"orders {sizes}, multiplicative on W_2"


def criterion_7():
    fails = {}
    for n in (2, 3):
        for k, v in test_diagram.commutativity_failures(n).items():
            fails[(n,) + k] = v
    return all(v == 0 for v in fails.values()), f"{len(fails)} families x 200 generators, failures {sum(fails.values())}"


def criterion_8():
    passed = 0
    for n in range(1, 5):
        for kind, lo in MODULE_MIN_GENUS.items():
            if n >= lo:
                c = verify_coinvariants(n, kind)
                if not (c.verdict and recheck(c)):
                    return False, f"{kind} n={n}"
                passed += 1
            else:
                try:
                    verify_coinvariants(n, kind)
                    return False, f"{kind} n={n} not rejected"
                except HypothesisViolation:
                    pass
    return passed == 9, f"{passed} certificates, violations rejected"


def criterion_9():
    failures = st_.rho_type_preservation(samples=500)
    return not failures, f"500 non-additive simplices, {len(failures)} failures"


CRITERIA = [
    (1, "classification fidelity", criterion_1, 1),
    (2, "symplectic algebra", criterion_2, 30),
    (3, "homology engine sanity", criterion_3, 60),
    (4, "apartment cycles", criterion_4, 60),
    (5, "relation soundness", criterion_5, 600),
    (6, "Weyl sign", criterion_6, 5),
    (7, "diagram commutativity", criterion_7, 60),
    (8, "coinvariant certificates", criterion_8, 5),
    (9, "retraction map", criterion_9, 30),
]


def evaluate(fn, budget):
    t0 = time.perf_counter()
    ok, detail = fn()
    dt = time.perf_counter() - t0
    return ok and dt < budget, detail, dt


def line(num, name, ok, detail, dt, budget):
    return f"criterion {num} [{'PASS' if ok else 'FAIL'}] {name}: {detail} ({dt:.2f}s, budget {budget}s)"


@pytest.mark.parametrize("num,name,fn,budget", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, name, fn, budget, capsys):
    ok, detail, dt = evaluate(fn, budget)
    with capsys.disabled():
        print("\n" + line(num, name, ok, detail, dt, budget))
    assert ok, detail


if __name__ == "__main__":
    results = []
    for num, name, fn, budget in CRITERIA:
        ok, detail, dt = evaluate(fn, budget)
        results.append(ok)
        print(line(num, name, ok, detail, dt, budget))
    sys.exit(0 if all(results) else 1)
