"""Checkable certificates: coinvariant vanishing of the apartment modules and
geometric soundness of the presentation relations in small genus."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any, Sequence

from .complexes import build_tits_poset, enumerate_lines
from .errors import HypothesisViolation, MissingSpan, PreconditionError, ResourceLimitExceeded
from .homology import Chain, apartment_cycle, boundary, chain_complex, solve_boundary
from .lattice import Line, apply, e, f, random_symplectic_matrix
from .normal_forms import identity as identity_matrix
from .symbols import AddSymbol, ApartmentSymbol, FormalSum, SkewSymbol, act, presentation_relation
from .weyl import SignedPermutation, all_elements

MODULE_MIN_GENUS = {"A": 1, "A_add": 2, "A_skew": 3}
SOUNDNESS_MAX_GENUS = 2


def flip_matrix(n: int, j: int) -> list[list[int]]:
    """Symplectic matrix with e_j -> f_j, f_j -> -e_j, identity elsewhere."""
    g = identity_matrix(2 * n)
    a, b = 2 * (j - 1), 2 * (j - 1) + 1
    g[a][a] = g[b][b] = 0
    g[b][a] = 1
    g[a][b] = -1
    return g


def _standard_pairs(n: int, start: int) -> tuple:
    out = []
    for i in range(start, n + 1):
        out += [e(i, n), f(i, n)]
    return tuple(out)


def coinvariant_generator(n: int, kind: str) -> tuple[ApartmentSymbol | AddSymbol | SkewSymbol, int]:
    """The cyclic generator of the module and the pair index flipped by phi."""
    if kind not in MODULE_MIN_GENUS:
        raise ValueError(f"unknown module kind {kind!r}")
    if n < MODULE_MIN_GENUS[kind]:
        raise HypothesisViolation(f"{kind} coinvariant argument needs n >= {MODULE_MIN_GENUS[kind]}, got {n}")
    e1, f1 = e(1, n), f(1, n)
    if kind == "A":
        return ApartmentSymbol(_standard_pairs(n, 1)), 1
    if kind == "A_add":
        return AddSymbol((tuple(a + b for a, b in zip(e1, f1)), e1, f1), _standard_pairs(n, 2)), 2
    e2, f2 = e(2, n), f(2, n)
    return SkewSymbol((e1, f1, tuple(a - b for a, b in zip(e2, e1)), f2), _standard_pairs(n, 3)), 3


@dataclass
class Certificate:
    claim: str
    n: int
    module: str
    phi: list[list[int]]
    generator: FormalSum
    image: FormalSum
    verdict: bool
    hypothesis: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "claim": self.claim,
            "n": self.n,
            "module": self.module,
            "phi": self.phi,
            "generator": self.generator.to_json(),
            "image": self.image.to_json(),
            "verdict": "pass" if self.verdict else "fail",
            "hypothesis": self.hypothesis,
            "transcript": "act(phi, generator) + generator == 0 after canonicalization; "
                          "the module is cyclic on the generator, so 2 * generator vanishes "
                          "in coinvariants and the rational coinvariants are zero",
        }


def verify_coinvariants(n: int, kind: str) -> Certificate:
    gen, j = coinvariant_generator(n, kind)
    phi = flip_matrix(n, j)
    g = FormalSum.of(gen)
    img = act(phi, g)
    return Certificate(
        claim=f"coinvariants({kind}, n={n}) (x) Q = 0",
        n=n, module=kind, phi=phi, generator=g, image=img,
        verdict=not (img + g),
        hypothesis={"min_genus": MODULE_MIN_GENUS[kind], "flipped_pair": j},
    )


def recheck(cert: Certificate) -> bool:
    """Re-run the recorded computation and compare with the stored verdict."""
    img = act(cert.phi, cert.generator)
    return img == cert.image and (not (img + cert.generator)) == cert.verdict


# ------------------------------------------------------------ soundness


@dataclass
class SoundnessInstance:
    kind: str
    g: list[list[int]]
    relation: FormalSum
    cycle_size: int
    bounds: bool
    witness_size: int
    verified: bool
    pool_lines: int
    enlarged: bool
    note: str = ""

    def to_json(self) -> dict:
        return {
            "kind": self.kind, "g": self.g, "relation": self.relation.to_json(),
            "difference_cycle_terms": self.cycle_size, "bounds": self.bounds,
            "witness_terms": self.witness_size, "witness_verified": self.verified,
            "pool_lines": self.pool_lines, "enlarged": self.enlarged, "note": self.note,
        }


def _symbol_lines(x: FormalSum) -> list[Line]:
    out = set()
    for s, _ in x.terms.items():
        out.update(s.lines)
    return sorted(out)


def relation_cycle(x: FormalSum, poset) -> Chain:
    """Signed sum of the apartment cycles of the symbols of x."""
    degree = None
    z = None
    for s, c in x.items():
        cyc = apartment_cycle([l.rep for l in s.lines], poset).scaled(c)
        z = cyc if z is None else z + cyc
        degree = cyc.degree
    if z is None:
        return Chain(max(degree or 0, 0))
    return z


def check_relation_instance(kind: str, g: Sequence[Sequence[int]], n: int, B_extra: int = 0,
                            pi: SignedPermutation | None = None) -> SoundnessInstance:
    """Build the relation for the translated standard basis, fill its
    difference cycle in the Tits poset on the relation's lines, and retry
    once with every line of height <= B_extra added if no filling exists."""
    basis = [apply(g, v) for v in _standard_pairs(n, 1)]
    rel = presentation_relation(basis, kind, pi)
    lines = _symbol_lines(rel)
    attempts = [(lines, False)]
    if B_extra > 0:
        attempts.append((sorted(set(lines) | set(enumerate_lines(n, B_extra).lines)), True))
    note = ""
    for pool, enlarged in attempts:
        try:
            poset = build_tits_poset(pool)
            z = relation_cycle(rel, poset) if rel else Chain(n - 1)
        except MissingSpan as exc:
            note = f"missing span: {exc}"
            continue
        cc = chain_complex(poset)
        x = solve_boundary(cc, z)
        if isinstance(x, Chain):
            ok = boundary(cc, x) == z
            return SoundnessInstance(kind, [list(r) for r in g], rel, len(z.coeffs), True,
                                     len(x.coeffs), ok, len(pool), enlarged)
        note = f"no filling: {x.reason} {x.detail}".strip()
    return SoundnessInstance(kind, [list(r) for r in g], rel, len(z.coeffs), False, 0, False,
                             len(attempts[-1][0]), len(attempts) > 1, note)


def verify_relation_soundness(n: int, instances: int = 20, seed: int = 0, B_extra: int = 0,
                              kinds: Sequence[str] = ("b", "c")) -> dict:
    """Seeded random Sp translates of the standard instances; the first
    instance of each kind uses the identity."""
    if n not in (1, 2):
        raise PreconditionError(f"relation soundness is only run for n <= {SOUNDNESS_MAX_GENUS}")
    rng = random.Random(seed)
    results: list[SoundnessInstance] = []
    for kind in kinds:
        if kind == "c" and n < 2:
            continue
        for i in range(instances):
            g = identity_matrix(2 * n) if i == 0 else random_symplectic_matrix(n, rng)
            if kind == "a":
                elems = all_elements(n)
                results.append(check_relation_instance(kind, g, n, B_extra, rng.choice(elems)))
            else:
                results.append(check_relation_instance(kind, g, n, B_extra))
    return {
        "n": n, "seed": seed, "B_extra": B_extra,
        "instances": [r.to_json() for r in results],
        "all_bound": all(r.bounds and r.verified for r in results),
        "needs_enlargement": [i for i, r in enumerate(results) if not r.bounds],
    }
