"""Formal symbols of the apartment modules, their canonical forms, the
symplectic group action and the maps beta and gamma."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from .errors import PairingPatternError, PreconditionError
from .lattice import Line, Vector, apply, canonical_line, is_symplectic_matrix, omega
from .weyl import SignedPermutation, relabel_positions, sign_character


def _lines(xs: Iterable[Line | Sequence[int]]) -> tuple[Line, ...]:
    return tuple(canonical_line(x) for x in xs)


def _keys(lines: Sequence[Line]) -> tuple:
    return tuple(l.key for l in lines)


def _check_pairs(lines: Sequence[Line]) -> None:
    if len(lines) % 2:
        raise PairingPatternError("an apartment symbol needs an even number of lines")
    if len(set(lines)) != len(lines):
        raise PairingPatternError("repeated line in a symbol")
    for i, a in enumerate(lines):
        for j in range(i + 1, len(lines)):
            want = 1 if (i % 2 == 0 and j == i + 1) else 0
            if abs(omega(a.rep, lines[j].rep)) != want:
                raise PairingPatternError(f"lines {a} and {lines[j]} break the pairing pattern")


def _orthogonal(a: Sequence[Line], b: Sequence[Line]) -> None:
    if any(omega(x.rep, y.rep) for x in a for y in b):
        raise PairingPatternError("core and tail are not orthogonal")


def _sort_pairs(lines: Sequence[Line]) -> tuple[tuple[Line, ...], int]:
    """Sort inside each pair (-1 per swap), then the pairs by their first
    line (sign of that permutation); the result is the lexicographic minimum
    over all signed relabellings."""
    sign = 1
    pairs = []
    for i in range(0, len(lines), 2):
        a, b = lines[i], lines[i + 1]
        if b < a:
            a, b = b, a
            sign = -sign
        pairs.append((a, b))
    order = sorted(range(len(pairs)), key=lambda i: pairs[i][0])
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j]:
                sign = -sign
    return tuple(l for i in order for l in pairs[i]), sign


@dataclass(frozen=True)
class ApartmentSymbol:
    """[v_1, w_1, ..., v_k, w_k]; k = 0 is the generator of A(0) = Z."""

    lines: tuple[Line, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "lines", _lines(self.lines))
        _check_pairs(self.lines)

    @property
    def genus(self) -> int:
        return len(self.lines) // 2

    def sort_key(self) -> tuple:
        return (0, _keys(self.lines))

    def canonical(self) -> tuple["ApartmentSymbol", int]:
        lines, sign = _sort_pairs(self.lines)
        return ApartmentSymbol(lines), sign

    def relabel(self, pi: SignedPermutation) -> tuple["ApartmentSymbol", int]:
        """The relabelled symbol and the sign relating it to this one."""
        pos = relabel_positions(pi)
        return ApartmentSymbol(tuple(self.lines[p] for p in pos)), sign_character(pi)

    def map(self, g) -> "ApartmentSymbol":
        return ApartmentSymbol(tuple(canonical_line(apply(g, l.rep)) for l in self.lines))

    def __repr__(self) -> str:
        return "[" + ", ".join(map(repr, self.lines)) + "]"

    def to_json(self) -> dict:
        return {"kind": "A", "lines": [list(map(str, l.rep)) for l in self.lines]}


def _check_sigma_additive(core: Sequence[Line]) -> None:
    from .simplex_types import classify

    t = classify(core)
    if len(core) != 3 or not t or t.tag != "sigma_additive":
        raise PairingPatternError(f"{list(core)} is not a sigma-additive triple")


@dataclass(frozen=True)
class AddSymbol:
    """[z_0, z_1, z_2] * [v_2, w_2, ...]."""

    core: tuple[Line, ...]
    tail: ApartmentSymbol

    def __post_init__(self) -> None:
        object.__setattr__(self, "core", _lines(self.core))
        if not isinstance(self.tail, ApartmentSymbol):
            object.__setattr__(self, "tail", ApartmentSymbol(self.tail))
        _check_sigma_additive(self.core)
        _orthogonal(self.core, self.tail.lines)

    @property
    def genus(self) -> int:
        return 1 + self.tail.genus

    def sort_key(self) -> tuple:
        return (1, _keys(self.core), _keys(self.tail.lines))

    def canonical(self) -> tuple["AddSymbol", int]:
        order = sorted(range(3), key=lambda i: self.core[i])
        sign = 1
        for i in range(3):
            for j in range(i + 1, 3):
                if order[i] > order[j]:
                    sign = -sign
        tail, ts = self.tail.canonical()
        return AddSymbol(tuple(self.core[i] for i in order), tail), sign * ts

    def map(self, g) -> "AddSymbol":
        return AddSymbol(tuple(canonical_line(apply(g, l.rep)) for l in self.core), self.tail.map(g))

    def __repr__(self) -> str:
        return "[" + ", ".join(map(repr, self.core)) + "]*" + repr(self.tail)

    def to_json(self) -> dict:
        return {"kind": "A_add", "core": [list(map(str, l.rep)) for l in self.core], "tail": self.tail.to_json()}


def skew_chain_reps(core: Sequence[Line]) -> tuple[Vector, ...]:
    """Representatives with omega(z0, z1) = omega(z1, z2) = omega(z2, z3) = 1.

    Starting from the stored representative of z0, each later sign is forced;
    the result is unique up to a global sign.
    """
    reps = [core[0].rep]
    for l in core[1:]:
        w = omega(reps[-1], l.rep)
        if abs(w) != 1:
            raise PairingPatternError("consecutive core lines must pair to +-1")
        reps.append(l.rep if w == 1 else tuple(-x for x in l.rep))
    return tuple(reps)


def _check_skew(core: Sequence[Line]) -> None:
    if len(core) != 4 or len(set(core)) != 4:
        raise PairingPatternError("a skew core has four distinct lines")
    skew_chain_reps(core)
    for i, j in ((0, 2), (0, 3), (1, 3)):
        if omega(core[i].rep, core[j].rep):
            raise PairingPatternError("non-consecutive core lines must be orthogonal")


@dataclass(frozen=True)
class SkewSymbol:
    """[z_0, z_1, z_2, z_3] * [v_3, w_3, ...] with a +1 pairing chain."""

    core: tuple[Line, ...]
    tail: ApartmentSymbol

    def __post_init__(self) -> None:
        object.__setattr__(self, "core", _lines(self.core))
        if not isinstance(self.tail, ApartmentSymbol):
            object.__setattr__(self, "tail", ApartmentSymbol(self.tail))
        _check_skew(self.core)
        _orthogonal(self.core, self.tail.lines)

    @property
    def genus(self) -> int:
        return 2 + self.tail.genus

    @property
    def reps(self) -> tuple[Vector, ...]:
        return skew_chain_reps(self.core)

    def sort_key(self) -> tuple:
        return (2, _keys(self.core), _keys(self.tail.lines))

    def canonical(self) -> tuple["SkewSymbol", int]:
        rev = tuple(reversed(self.core))
        core = min(self.core, rev, key=_keys)
        tail, ts = self.tail.canonical()
        return SkewSymbol(core, tail), ts

    def map(self, g) -> "SkewSymbol":
        return SkewSymbol(tuple(canonical_line(apply(g, l.rep)) for l in self.core), self.tail.map(g))

    def __repr__(self) -> str:
        return "[" + ", ".join(map(repr, self.core)) + "]*" + repr(self.tail)

    def to_json(self) -> dict:
        return {"kind": "A_skew", "core": [list(map(str, l.rep)) for l in self.core], "tail": self.tail.to_json()}


Symbol = Union[ApartmentSymbol, AddSymbol, SkewSymbol]


def canonicalize(sym: Symbol) -> tuple[Symbol, int]:
    return sym.canonical()


def orbit(sym: Symbol) -> Iterator[tuple[Symbol, int]]:
    """Every relabelling allowed by the defining relations, with its sign."""
    from .weyl import all_elements

    if isinstance(sym, ApartmentSymbol):
        if sym.genus == 0:
            yield sym, 1
            return
        for pi in all_elements(sym.genus):
            yield sym.relabel(pi)
        return
    tails = list(orbit(sym.tail))
    if isinstance(sym, AddSymbol):
        for perm in itertools.permutations(range(3)):
            s = 1
            for i in range(3):
                for j in range(i + 1, 3):
                    if perm[i] > perm[j]:
                        s = -s
            for t, ts in tails:
                yield AddSymbol(tuple(sym.core[i] for i in perm), t), s * ts
        return
    for core in (sym.core, tuple(reversed(sym.core))):
        for t, ts in tails:
            yield SkewSymbol(core, t), ts


def canonicalize_by_orbit(sym: Symbol) -> tuple[Symbol, int]:
    """Exhaustive scan for the orbit element with the smallest sort key."""
    best = min(orbit(sym), key=lambda p: p[0].sort_key())
    return best


class FormalSum:
    """Integer combination of canonical symbols; zero terms are dropped."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[Symbol, int]] | None = None):
        self.terms: dict[Symbol, int] = {}
        for sym, c in terms or ():
            self.add(sym, c)

    def add(self, sym: Symbol, coeff: int = 1) -> "FormalSum":
        if not coeff:
            return self
        can, s = sym.canonical()
        v = self.terms.get(can, 0) + s * coeff
        if v:
            self.terms[can] = v
        else:
            self.terms.pop(can, None)
        return self

    @classmethod
    def of(cls, sym: Symbol, coeff: int = 1) -> "FormalSum":
        return cls([(sym, coeff)])

    def __add__(self, other: "FormalSum") -> "FormalSum":
        out = FormalSum(self.terms.items())
        for s, c in other.terms.items():
            out.add(s, c)
        return out

    def __neg__(self) -> "FormalSum":
        return FormalSum((s, -c) for s, c in self.terms.items())

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + (-other)

    def __mul__(self, k: int) -> "FormalSum":
        return FormalSum((s, k * c) for s, c in self.terms.items())

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> list[tuple[Symbol, int]]:
        return sorted(self.terms.items(), key=lambda p: p[0].sort_key())

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " ".join(f"{'+' if c > 0 else '-'}{abs(c) if abs(c) != 1 else ''}{s!r}" for s, c in self.items())

    def to_json(self) -> list:
        return [{"coeff": c, "symbol": s.to_json()} for s, c in self.items()]


def act(g: Sequence[Sequence[int]], x: FormalSum | Symbol) -> FormalSum:
    """Termwise image under a symplectic matrix, re-canonicalized."""
    if not is_symplectic_matrix(g):
        raise PreconditionError("matrix does not preserve the symplectic form")
    if not isinstance(x, FormalSum):
        x = FormalSum.of(x)
    return FormalSum((s.map(g), c) for s, c in x.terms.items())


def beta(x: AddSymbol | FormalSum) -> FormalSum:
    """[z1, z2, tail] - [z1, z0, tail] - [z0, z2, tail]."""
    if isinstance(x, FormalSum):
        out = FormalSum()
        for s, c in x.terms.items():
            out = out + beta(s) * c
        return out
    z0, z1, z2 = x.core
    t = x.tail.lines
    return FormalSum([
        (ApartmentSymbol((z1, z2) + t), 1),
        (ApartmentSymbol((z1, z0) + t), -1),
        (ApartmentSymbol((z0, z2) + t), -1),
    ])


def gamma_lines(x: SkewSymbol) -> tuple[Line, Line]:
    """The inserted lines <z0 + z2> and <z1 + z3> for the +1 chain reps."""
    r = x.reps
    return (canonical_line(tuple(a + b for a, b in zip(r[0], r[2]))),
            canonical_line(tuple(a + b for a, b in zip(r[1], r[3]))))


def gamma(x: SkewSymbol | FormalSum) -> FormalSum:
    if isinstance(x, FormalSum):
        out = FormalSum()
        for s, c in x.terms.items():
            out = out + gamma(s) * c
        return out
    z0, z1, z2, z3 = x.core
    a, b = gamma_lines(x)
    t = x.tail.lines
    return FormalSum([
        (ApartmentSymbol((z0, z1, a, z3) + t), 1),
        (ApartmentSymbol((z1, z2, a, b) + t), 1),
        (ApartmentSymbol((z2, z3, z0, b) + t), 1),
    ])


def beta_gamma(x: FormalSum) -> FormalSum:
    out = FormalSum()
    for s, c in x.terms.items():
        if isinstance(s, AddSymbol):
            out = out + beta(s) * c
        elif isinstance(s, SkewSymbol):
            out = out + gamma(s) * c
        else:
            raise PreconditionError(f"{s!r} is not an augmented symbol")
    return out


def presentation_relation(basis: Sequence[Vector], kind: str, pi: SignedPermutation | None = None) -> FormalSum:
    """Left side minus right side of a presentation relation for a basis
    (v_1, w_1, ..., v_n, w_n) given as vectors.

    kind 'a' needs a signed permutation; 'b' needs n >= 1; 'c' needs n >= 2.
    """
    vecs = [tuple(v) for v in basis]
    n = len(vecs) // 2
    lines = tuple(canonical_line(v) for v in vecs)
    base = ApartmentSymbol(lines)
    if kind == "a":
        if pi is None or pi.n != n:
            raise PreconditionError("relation (a) needs a signed permutation of the right rank")
        other, s = base.relabel(pi)
        return FormalSum([(base, 1), (other, -s)])
    if kind == "b":
        if n < 1:
            raise PreconditionError("relation (b) needs n >= 1")
        v1, w1 = vecs[0], vecs[1]
        u = canonical_line(tuple(a + b for a, b in zip(v1, w1)))
        rest = lines[2:]
        return FormalSum([
            (base, 1),
            (ApartmentSymbol((lines[0], u) + rest), -1),
            (ApartmentSymbol((u, lines[1]) + rest), -1),
        ])
    if kind == "c":
        if n < 2:
            raise PreconditionError("relation (c) needs n >= 2")
        v1, w1, v2, w2 = vecs[:4]
        p = canonical_line(tuple(a - b for a, b in zip(w1, w2)))
        q = canonical_line(tuple(a + b for a, b in zip(v1, v2)))
        rest = lines[4:]
        return FormalSum([
            (base, 1),
            (ApartmentSymbol((lines[0], p, q, lines[3]) + rest), -1),
            (ApartmentSymbol((p, lines[2], q, lines[1]) + rest), -1),
        ])
    raise ValueError(f"unknown relation kind {kind!r}")


theoremB_relation = presentation_relation


def skew_from_basis(basis: Sequence[Vector]) -> SkewSymbol:
    """Skew symbol whose gamma image is minus relation (c) for the basis:
    z0 = v1, z1 = w1 - w2, z2 = v2, z3 = w2."""
    v1, w1, v2, w2 = [tuple(v) for v in basis[:4]]
    z1 = tuple(a - b for a, b in zip(w1, w2))
    return SkewSymbol((v1, z1, v2, w2), tuple(canonical_line(v) for v in basis[4:]))


def add_from_basis(basis: Sequence[Vector]) -> AddSymbol:
    """Add symbol whose beta image is relation (b): core (<v1+w1>, v1, w1)."""
    v1, w1 = tuple(basis[0]), tuple(basis[1])
    u = tuple(a + b for a, b in zip(v1, w1))
    return AddSymbol((u, v1, w1), tuple(canonical_line(v) for v in basis[2:]))
