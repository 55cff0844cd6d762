import pytest

from spsteinberg.certificates import (MODULE_MIN_GENUS, check_relation_instance, coinvariant_generator,
                                      flip_matrix, recheck, relation_cycle, verify_coinvariants,
                                      verify_relation_soundness)
from spsteinberg.complexes import build_tits_poset
from spsteinberg.errors import HypothesisViolation, PreconditionError
from spsteinberg.homology import NoSolution, boundary, chain_complex, solve_boundary
from spsteinberg.lattice import canonical_line, e, f, is_symplectic_matrix
from spsteinberg.normal_forms import identity
from spsteinberg.symbols import FormalSum, presentation_relation

PASSING = [(n, "A") for n in range(1, 5)] + [(n, "A_add") for n in range(2, 5)] + \
          [(n, "A_skew") for n in range(3, 5)]
REJECTED = [(n, kind) for kind, lo in MODULE_MIN_GENUS.items() for n in range(1, lo)]


@pytest.mark.parametrize("n,kind", PASSING)
def test_coinvariant_certificates_pass(n, kind):
    cert = verify_coinvariants(n, kind)
    assert cert.verdict and recheck(cert)
    assert is_symplectic_matrix(cert.phi)
    assert cert.image == -cert.generator
    assert cert.to_json()["verdict"] == "pass"


@pytest.mark.parametrize("n,kind", REJECTED)
def test_coinvariant_hypotheses_enforced(n, kind):
    with pytest.raises(HypothesisViolation):
        verify_coinvariants(n, kind)


def test_certificate_examples():
    assert verify_coinvariants(1, "A").phi == [[0, -1], [1, 0]]
    cert = verify_coinvariants(2, "A_add")
    assert cert.phi == flip_matrix(2, 2) and cert.hypothesis["flipped_pair"] == 2
    with pytest.raises(ValueError):
        coinvariant_generator(3, "B")


def test_recheck_detects_tampering():
    cert = verify_coinvariants(2, "A")
    cert.verdict = False
    assert not recheck(cert)


def test_n1_relation_b_is_literally_zero():
    rel = presentation_relation([e(1, 1), f(1, 1)], "b")
    assert len(rel) == 3
    poset = build_tits_poset(sorted({l for s, _ in rel.items() for l in s.lines}))
    assert relation_cycle(rel, poset).is_zero()
    report = verify_relation_soundness(1, instances=5)
    assert report["all_bound"]
    assert all(r["difference_cycle_terms"] == 0 for r in report["instances"])


def soundness_report(instances=20, seed=0):
    return verify_relation_soundness(2, instances=instances, seed=seed)


def test_n2_relations_bound_with_verified_witnesses():
    report = soundness_report()
    inst = report["instances"]
    assert sum(r["kind"] == "b" for r in inst) >= 20 and sum(r["kind"] == "c" for r in inst) >= 20
    assert report["all_bound"] and not report["needs_enlargement"]
    assert all(r["witness_verified"] for r in inst)


def test_standard_relation_c_instance():
    inst = check_relation_instance("c", identity(4), 2)
    assert inst.bounds and inst.verified


def test_sign_flipped_relation_does_not_bound():
    basis = [e(1, 2), f(1, 2), e(2, 2), f(2, 2)]
    rel = presentation_relation(basis, "c")
    flipped = FormalSum()
    for sym, c in rel.items():
        flipped.add(sym, abs(c))
    lines = sorted({l for s, _ in flipped.items() for l in s.lines})
    poset = build_tits_poset(lines)
    cc = chain_complex(poset)
    z = relation_cycle(flipped, poset)
    assert boundary(cc, z).is_zero() and not z.is_zero()
    assert isinstance(solve_boundary(cc, z), NoSolution)


def test_soundness_refuses_large_genus():
    with pytest.raises(PreconditionError):
        verify_relation_soundness(3)
