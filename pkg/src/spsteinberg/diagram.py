"""Maps between direct sums of apartment modules indexed by minimal simplices,
and the two symbol-level commutativity checks."""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from .errors import PreconditionError
from .lattice import Line, apply, canonical_line, omega, random_symplectic_matrix, e, f
from .simplex_types import classify
from .symbols import (AddSymbol, ApartmentSymbol, FormalSum, SkewSymbol, beta_gamma,
                      skew_chain_reps)

SigmaKey = tuple[Line, Line]


class IndexedSum:
    """Element of a direct sum of modules indexed by sigma simplices {v < w}."""

    def __init__(self) -> None:
        self.parts: dict[SigmaKey, FormalSum] = {}

    def add(self, key: Iterable[Line], x: FormalSum, coeff: int = 1) -> "IndexedSum":
        k = tuple(sorted(key))
        total = self.parts.get(k, FormalSum()) + x * coeff
        if total:
            self.parts[k] = total
        else:
            self.parts.pop(k, None)
        return self

    def __add__(self, other: "IndexedSum") -> "IndexedSum":
        out = IndexedSum()
        for src in (self, other):
            for k, x in src.parts.items():
                out.add(k, x)
        return out

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IndexedSum) and self.parts == other.parts

    def __bool__(self) -> bool:
        return bool(self.parts)

    def __repr__(self) -> str:
        return " (+) ".join(f"{{{k[0]!r},{k[1]!r}}}: {x!r}" for k, x in sorted(self.parts.items()))


def _sign(a: Line, b: Line) -> int:
    return 1 if a < b else -1


def _as_sum(x: FormalSum | ApartmentSymbol | AddSymbol | SkewSymbol) -> FormalSum:
    return x if isinstance(x, FormalSum) else FormalSum.of(x)


def _require_type(delta: Sequence[Line], tag: str) -> tuple[Line, ...]:
    lines = tuple(sorted(canonical_line(v) for v in delta))
    t = classify(lines)
    if not t or t.tag != tag:
        raise PreconditionError(f"{list(lines)} is not a {tag} simplex")
    return lines


def _require_complement(delta: Sequence[Line], x: FormalSum) -> None:
    for sym, _ in x.terms.items():
        lines = sym.lines if isinstance(sym, ApartmentSymbol) else sym.core + sym.tail.lines
        if any(omega(a.rep, b.rep) for a in delta for b in lines):
            raise PreconditionError(f"{sym!r} is not in the complement of {list(delta)}")


def _with_prefix(prefix: Sequence[Line], x: FormalSum, coeff: int = 1) -> FormalSum:
    return FormalSum((ApartmentSymbol(tuple(prefix) + s.lines), c * coeff) for s, c in x.terms.items())


def sigma2_pairs(delta: Sequence[Line]) -> tuple[SigmaKey, SigmaKey]:
    lines = _require_type(delta, "sigma2")
    pairs = [(a, b) for i, a in enumerate(lines) for b in lines[i + 1:] if omega(a.rep, b.rep)]
    return pairs[0], pairs[1]


def skew_path(delta: Sequence[Line]) -> tuple[Line, Line, Line, Line]:
    """The core order z0 - z1 - z2 - z3 of a skew-sigma^2 simplex; of the two
    path orientations the one with the smaller sort key is used."""
    lines = _require_type(delta, "skew_sigma2")
    nbrs = {l: [m for m in lines if m != l and omega(l.rep, m.rep)] for l in lines}
    ends = sorted(l for l in lines if len(nbrs[l]) == 1)
    path = [ends[0]]
    while len(path) < 4:
        path.append(next(m for m in nbrs[path[-1]] if m not in path))
    return tuple(path)


def skew_inserted_pairs(core: Sequence[Line]) -> list[tuple[SigmaKey, tuple[Line, Line]]]:
    """(z-pair, inserted pair) for the three sigma simplices of a skew core,
    both in the order written in the definition."""
    r = skew_chain_reps(core)
    a = canonical_line(tuple(x + y for x, y in zip(r[0], r[2])))
    b = canonical_line(tuple(x + y for x, y in zip(r[1], r[3])))
    z0, z1, z2, z3 = core
    return [((z0, z1), (a, z3)), ((z1, z2), (a, b)), ((z2, z3), (z0, b))]


def partial_sigma2(delta: Sequence[Line], x: FormalSum | ApartmentSymbol) -> IndexedSum:
    x = _as_sum(x)
    p, q = sigma2_pairs(delta)
    _require_complement(p + q, x)
    out = IndexedSum()
    out.add(q, _with_prefix(p, x))
    out.add(p, _with_prefix(q, x))
    return out


def partial_skew(delta: Sequence[Line], x: FormalSum | ApartmentSymbol, literal: bool = False) -> IndexedSum:
    """With literal=False each summand carries the orientation sign of its
    z-pair times that of its inserted pair, so that sorting both pairs into
    vertex order reproduces the written pair order."""
    x = _as_sum(x)
    core = skew_path(delta)
    _require_complement(core, x)
    out = IndexedSum()
    for zpair, ins in skew_inserted_pairs(core):
        eps = 1 if literal else _sign(*zpair) * _sign(*ins)
        out.add(zpair, _with_prefix(tuple(sorted(ins)), x), eps)
    return out


def partial_add(delta: Sequence[Line], x: FormalSum | ApartmentSymbol) -> IndexedSum:
    x = _as_sum(x)
    z0, z1, z2 = _require_type(delta, "sigma_additive")
    _require_complement((z0, z1, z2), x)
    out = IndexedSum()
    out.add((z1, z2), x)
    out.add((z0, z2), x, -1)
    out.add((z0, z1), x)
    return out


def partial_sigma(delta: Sequence[Line], x: FormalSum | ApartmentSymbol) -> FormalSum:
    x = _as_sum(x)
    pair = _require_type(delta, "sigma")
    _require_complement(pair, x)
    return _with_prefix(pair, x)


def partial_sigma_sum(y: IndexedSum) -> FormalSum:
    out = FormalSum()
    for key, x in y.parts.items():
        out = out + partial_sigma(key, x)
    return out


def partial_sigma_add(delta: Sequence[Line], y: FormalSum | AddSymbol) -> FormalSum:
    y = _as_sum(y)
    pair = _require_type(delta, "sigma")
    _require_complement(pair, y)
    return FormalSum((AddSymbol(s.core, pair + s.tail.lines), -c) for s, c in y.terms.items())


def partial_sigma_skew(delta: Sequence[Line], y: FormalSum | SkewSymbol) -> FormalSum:
    y = _as_sum(y)
    pair = _require_type(delta, "sigma")
    _require_complement(pair, y)
    return FormalSum((SkewSymbol(s.core, pair + s.tail.lines), c) for s, c in y.terms.items())


def pi_sigma2(delta: Sequence[Line], x: FormalSum | ApartmentSymbol) -> FormalSum:
    sigma2_pairs(delta)
    return FormalSum()


def pi_skew(delta: Sequence[Line], x: FormalSum | ApartmentSymbol) -> FormalSum:
    x = _as_sum(x)
    core = skew_path(delta)
    _require_complement(core, x)
    return FormalSum((SkewSymbol(core, s.lines), c) for s, c in x.terms.items())


def pi_add(delta: Sequence[Line], x: FormalSum | ApartmentSymbol) -> FormalSum:
    x = _as_sum(x)
    core = _require_type(delta, "sigma_additive")
    _require_complement(core, x)
    return FormalSum((AddSymbol(core, s.lines), c) for s, c in x.terms.items())


def diagram_map(name: str, delta: Sequence[Line], x, literal: bool = False):
    """Dispatch by name: partial_sigma2, partial_skew, partial_add,
    partial_sigma, partial_sigma_add, partial_sigma_skew, pi_sigma2, pi_skew,
    pi_add."""
    table = {
        "partial_sigma2": partial_sigma2, "partial_add": partial_add,
        "partial_sigma": partial_sigma, "partial_sigma_add": partial_sigma_add,
        "partial_sigma_skew": partial_sigma_skew, "pi_sigma2": pi_sigma2,
        "pi_skew": pi_skew, "pi_add": pi_add,
    }
    if name == "partial_skew":
        return partial_skew(delta, x, literal=literal)
    if name not in table:
        raise ValueError(f"unknown diagram map {name!r}")
    return table[name](delta, x)


_PI = {"sigma2": pi_sigma2, "skew_sigma2": pi_skew, "sigma_additive": pi_add}


def _partial(tag: str, delta, x, literal: bool) -> IndexedSum:
    if tag == "sigma2":
        return partial_sigma2(delta, x)
    if tag == "skew_sigma2":
        return partial_skew(delta, x, literal=literal)
    return partial_add(delta, x)


def commutativity_one(tag: str, delta: Sequence[Line], x: FormalSum | ApartmentSymbol,
                      literal: bool = False) -> tuple[FormalSum, FormalSum]:
    """(beta + gamma)(pi_tag(x)) and partial_sigma(partial_tag(x))."""
    lhs = beta_gamma(_PI[tag](delta, x))
    rhs = partial_sigma_sum(_partial(tag, delta, x, literal))
    return lhs, rhs


def commutativity_two(delta: Sequence[Line], y: FormalSum | AddSymbol | SkewSymbol) -> tuple[FormalSum, FormalSum]:
    """(beta + gamma)(partial_sigma^{add/skew}(y)) and partial_sigma((beta + gamma)(y))."""
    y = _as_sum(y)
    lifted = FormalSum()
    for s, c in y.terms.items():
        lift = partial_sigma_add if isinstance(s, AddSymbol) else partial_sigma_skew
        lifted = lifted + lift(delta, s) * c
    return beta_gamma(lifted), partial_sigma(delta, beta_gamma(y))


def _image(g, vectors) -> tuple[Line, ...]:
    return tuple(canonical_line(apply(g, v)) for v in vectors)


def _standard_tail(n: int, start: int) -> list:
    out = []
    for i in range(start, n + 1):
        out += [e(i, n), f(i, n)]
    return out


def random_generator_one(tag: str, n: int, rng: random.Random):
    """A Sp-translate of the standard (Delta, apartment symbol) pair of the
    given minimal type, with Delta in the first one or two hyperbolic pairs."""
    g = random_symplectic_matrix(n, rng)
    if tag == "sigma2":
        if n < 2:
            raise PreconditionError("sigma2 generators need n >= 2")
        delta = [e(1, n), f(1, n), e(2, n), f(2, n)]
        tail = _standard_tail(n, 3)
    elif tag == "skew_sigma2":
        if n < 2:
            raise PreconditionError("skew generators need n >= 2")
        e1, f1, e2, f2 = e(1, n), f(1, n), e(2, n), f(2, n)
        delta = [e1, f1, tuple(a - b for a, b in zip(e2, e1)), f2]
        tail = _standard_tail(n, 3)
    elif tag == "sigma_additive":
        e1, f1 = e(1, n), f(1, n)
        delta = [tuple(a + b for a, b in zip(e1, f1)), e1, f1]
        tail = _standard_tail(n, 2)
    else:
        raise ValueError(f"unknown generator type {tag!r}")
    tail_lines = list(_image(g, tail))
    pairs = [tail_lines[i:i + 2] for i in range(0, len(tail_lines), 2)]
    rng.shuffle(pairs)
    for p in pairs:
        if rng.random() < 0.5:
            p.reverse()
    return _image(g, delta), ApartmentSymbol(tuple(l for p in pairs for l in p))


def random_generator_two(kind: str, n: int, rng: random.Random):
    """(sigma simplex Delta, augmented symbol in its complement)."""
    g = random_symplectic_matrix(n, rng)
    delta = _image(g, [e(1, n), f(1, n)])
    if kind == "add":
        if n < 2:
            raise PreconditionError("add generators in a complement need n >= 2")
        e2, f2 = e(2, n), f(2, n)
        core = _image(g, [tuple(a + b for a, b in zip(e2, f2)), e2, f2])
        perm = list(range(3))
        rng.shuffle(perm)
        sym = AddSymbol(tuple(core[i] for i in perm), _image(g, _standard_tail(n, 3)))
    elif kind == "skew":
        if n < 3:
            raise PreconditionError("skew generators in a complement need n >= 3")
        e2, f2, e3, f3 = e(2, n), f(2, n), e(3, n), f(3, n)
        core = _image(g, [e2, f2, tuple(a - b for a, b in zip(e3, e2)), f3])
        if rng.random() < 0.5:
            core = tuple(reversed(core))
        sym = SkewSymbol(core, _image(g, _standard_tail(n, 4)))
    else:
        raise ValueError(f"unknown generator kind {kind!r}")
    return delta, sym
