"""Integer linear algebra on Z^{2n} with the standard symplectic form.

Coordinates are interleaved as (e_1, f_1, e_2, f_2, ..., e_n, f_n), so the
Gram matrix of the form is block diagonal with blocks [[0, 1], [-1, 0]].
Vectors are tuples of Python ints; the genus is half their length.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property, total_ordering
from typing import Iterable, Sequence

from .errors import (
    GenusMismatch,
    NotASummand,
    PairingPatternError,
    PreconditionError,
    ZeroVectorError,
)
from .normal_forms import (
    Matrix,
    content,
    hermite_form,
    integer_kernel,
    matmul,
    smith_form,
    smith_invariants,
    solve_integer,
    transpose,
)

Vector = tuple[int, ...]


def genus_of(v: Sequence[int]) -> int:
    if len(v) % 2 or not v:
        raise GenusMismatch(f"vector of odd or zero length {len(v)}")
    return len(v) // 2


def as_vector(v: Iterable[int]) -> Vector:
    out = tuple(int(x) for x in v)
    genus_of(out)
    return out


def e(i: int, n: int) -> Vector:
    """The basis vector e_i (1-based) of Z^{2n}."""
    v = [0] * (2 * n)
    v[2 * i - 2] = 1
    return tuple(v)


def f(i: int, n: int) -> Vector:
    """The basis vector f_i (1-based) of Z^{2n}."""
    v = [0] * (2 * n)
    v[2 * i - 1] = 1
    return tuple(v)


def add(*vectors: Sequence[int]) -> Vector:
    return tuple(sum(xs) for xs in zip(*vectors))


def scale(c: int, v: Sequence[int]) -> Vector:
    return tuple(c * x for x in v)


def sub(u: Sequence[int], v: Sequence[int]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def omega(u: Sequence[int], v: Sequence[int]) -> int:
    if len(u) != len(v):
        raise GenusMismatch(f"genus {len(u) // 2} vs {len(v) // 2}")
    total = 0
    for i in range(0, len(u), 2):
        total += u[i] * v[i + 1] - u[i + 1] * v[i]
    return total


def gram_matrix(n: int) -> Matrix:
    J = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        J[2 * i][2 * i + 1] = 1
        J[2 * i + 1][2 * i] = -1
    return J


def format_vector(v: Sequence[int]) -> str:
    """Human readable form such as 'e1+2f2'."""
    parts = []
    for idx, c in enumerate(v):
        if not c:
            continue
        name = f"{'ef'[idx % 2]}{idx // 2 + 1}"
        if c == 1:
            term = name
        elif c == -1:
            term = "-" + name
        else:
            term = f"{c}{name}"
        if parts and not term.startswith("-"):
            term = "+" + term
        parts.append(term)
    return "".join(parts) or "0"


def _leading_index(v: Sequence[int]) -> int:
    for i, x in enumerate(v):
        if x:
            return i
    raise ZeroVectorError("zero vector has no line")


@total_ordering
@dataclass(frozen=True, eq=False)
class Line:
    """A rank-1 summand, stored by its primitive representative whose first
    nonzero coordinate is positive.

    Lines are totally ordered by (index of first nonzero coordinate, rep), so
    e_1 < f_1 < e_2 < ... on the basis lines.
    """

    rep: Vector
    key: tuple = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "key", (_leading_index(self.rep), self.rep))

    @property
    def genus(self) -> int:
        return len(self.rep) // 2

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Line) and self.rep == other.rep

    def __hash__(self) -> int:
        return hash(self.rep)

    def __lt__(self, other: "Line") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return f"<{format_vector(self.rep)}>"


def canonical_line(v: Sequence[int] | Line) -> Line:
    if isinstance(v, Line):
        return v
    v = as_vector(v)
    g = content(v)
    if g == 0:
        raise ZeroVectorError("the zero vector spans no line")
    lead = v[_leading_index(v)]
    if lead < 0:
        g = -g
    return Line(tuple(x // g for x in v))


def line(*coords: int) -> Line:
    return canonical_line(coords)


@dataclass(frozen=True)
class Lattice:
    """A submodule of Z^{2n}, stored by its column Hermite basis.

    Equal lattices have equal bases, so `basis` doubles as a canonical key.
    """

    basis: tuple[Vector, ...]
    genus: int

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], genus: int | None = None) -> "Lattice":
        vecs = [as_vector(v) for v in vectors]
        if genus is None:
            if not vecs:
                raise GenusMismatch("genus needed for an empty generating set")
            genus = len(vecs[0]) // 2
        for v in vecs:
            if len(v) != 2 * genus:
                raise GenusMismatch(f"vector of genus {len(v) // 2} in genus {genus}")
        if not vecs:
            return cls((), genus)
        H = hermite_form(transpose(vecs))
        return cls(tuple(H.columns()), genus)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def dim(self) -> int:
        return 2 * self.genus

    def matrix(self) -> Matrix:
        """Generators as the columns of a 2n x rank matrix."""
        return transpose(list(self.basis), self.rank) if self.basis else [[] for _ in range(self.dim)]

    def contains(self, v: Sequence[int]) -> bool:
        if not self.basis:
            return not any(v)
        return solve_integer(self.matrix(), list(v)) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(v) for v in other.basis)

    def is_isotropic(self) -> bool:
        b = self.basis
        return all(omega(b[i], b[j]) == 0 for i in range(len(b)) for j in range(i + 1, len(b)))

    def __repr__(self) -> str:
        return "Lattice<" + ", ".join(format_vector(v) for v in self.basis) + ">"


@dataclass(frozen=True)
class SummandKind:
    kind: str
    value: int | None = None

    def __str__(self) -> str:
        return self.kind if self.value is None else f"{self.kind}({self.value})"


NOT_SUMMAND = SummandKind("not_summand")


def _require_nonzero(L: Lattice) -> None:
    if L.rank == 0:
        raise ZeroVectorError("zero lattice")


def is_summand_of_vectors(vectors: Sequence[Sequence[int]]) -> bool:
    """True iff the vectors are independent and span a direct summand."""
    if not vectors:
        return True
    inv = smith_invariants([list(v) for v in vectors])
    return len(inv) == len(vectors) and all(d == 1 for d in inv)


def classify_summand(L: Lattice) -> SummandKind:
    _require_nonzero(L)
    inv = smith_invariants(list(map(list, L.basis)))
    if any(d != 1 for d in inv):
        return NOT_SUMMAND
    if L.is_isotropic():
        return SummandKind("isotropic_summand", L.rank)
    gram = [[omega(u, v) for v in L.basis] for u in L.basis]
    if L.rank % 2 == 0 and abs(_det(gram)) == 1:
        return SummandKind("symplectic_summand", L.rank // 2)
    return SummandKind("summand_mixed")


def _det(M: Matrix) -> int:
    from .normal_forms import determinant

    return determinant(M)


def saturate(L: Lattice) -> Lattice:
    """(Q-span of L) intersected with Z^{2n}."""
    _require_nonzero(L)
    S = smith_form(L.matrix())
    cols = [tuple(row[j] for row in S.U_inv) for j in range(S.rank)]
    return Lattice.span(cols, L.genus)


def saturation_index(L: Lattice) -> int:
    """Index of L in its saturation: the product of its invariant factors."""
    out = 1
    for d in smith_invariants(list(map(list, L.basis))):
        out *= d
    return out


def symplectic_complement(L: Lattice) -> Lattice:
    if L.rank == 0:
        return Lattice.span([e(i, L.genus) for i in range(1, L.genus + 1)]
                            + [f(i, L.genus) for i in range(1, L.genus + 1)], L.genus)
    J = gram_matrix(L.genus)
    # omega(x, b) = x^T J b, so the conditions are rows (J b)^T
    rows = [[sum(J[i][k] * b[k] for k in range(L.dim)) for i in range(L.dim)] for b in L.basis]
    kernel = integer_kernel(rows, L.dim)
    return Lattice.span(kernel, L.genus) if kernel else Lattice((), L.genus)


@dataclass(frozen=True)
class SymplecticBasis:
    """Vectors (v_1, w_1, ..., v_k, w_k) with omega(v_i, w_i) = 1 and all
    other pairings zero, spanning a summand of Z^{2n}."""

    vectors: tuple[Vector, ...]
    ambient_genus: int

    def __post_init__(self) -> None:
        check_symplectic_family(self.vectors, self.ambient_genus)

    @property
    def genus(self) -> int:
        return len(self.vectors) // 2

    @property
    def pairs(self) -> list[tuple[Vector, Vector]]:
        return [(self.vectors[2 * i], self.vectors[2 * i + 1]) for i in range(self.genus)]

    def matrix(self) -> Matrix:
        return transpose(list(self.vectors), len(self.vectors))

    def lines(self) -> tuple[Line, ...]:
        return tuple(canonical_line(v) for v in self.vectors)

    @classmethod
    def standard(cls, n: int) -> "SymplecticBasis":
        vecs = []
        for i in range(1, n + 1):
            vecs += [e(i, n), f(i, n)]
        return cls(tuple(vecs), n)

    @classmethod
    def from_matrix(cls, M: Sequence[Sequence[int]]) -> "SymplecticBasis":
        return cls(tuple(tuple(c) for c in transpose(M)), len(M) // 2)


def check_symplectic_family(vectors: Sequence[Vector], genus: int) -> None:
    if len(vectors) % 2:
        raise PairingPatternError("odd number of vectors")
    for v in vectors:
        if len(v) != 2 * genus:
            raise GenusMismatch(f"vector of genus {len(v) // 2} in genus {genus}")
    k = len(vectors)
    for a in range(k):
        for b in range(a + 1, k):
            want = 1 if (a % 2 == 0 and b == a + 1) else 0
            if omega(vectors[a], vectors[b]) != want:
                raise PairingPatternError(f"omega(vector {a}, vector {b}) != {want}")
    if k and not is_summand_of_vectors(vectors):
        raise NotASummand("vectors do not span a direct summand")


def is_symplectic_matrix(M: Sequence[Sequence[int]]) -> bool:
    n2 = len(M)
    if n2 % 2 or any(len(r) != n2 for r in M):
        return False
    J = gram_matrix(n2 // 2)
    return matmul(matmul(transpose(M), J), M) == J


def apply(M: Sequence[Sequence[int]], v: Sequence[int]) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def _project_off_pair(x: Vector, v: Vector, w: Vector) -> Vector:
    # kills the <v, w> component when omega(v, w) = 1
    a, b = omega(x, w), omega(x, v)
    return tuple(xi - a * vi + b * wi for xi, vi, wi in zip(x, v, w))


def _solve_partner(rows: list[Vector], targets: list[int], L_basis: list[Vector]) -> Vector | None:
    """Find w in the span of L_basis with omega(rows[j], w) == targets[j]."""
    A = [[omega(r, b) for b in L_basis] for r in rows]
    c = solve_integer(A, targets)
    if c is None:
        return None
    return tuple(sum(ci * b[k] for ci, b in zip(c, L_basis)) for k in range(len(rows[0])))


def extend_to_symplectic_basis(
    isotropic: Sequence[Sequence[int]] = (),
    pairs: Sequence[tuple[Sequence[int], Sequence[int]]] = (),
    genus: int | None = None,
) -> SymplecticBasis:
    """Complete isotropic vectors v_1..v_m and symplectic pairs to a full basis.

    The result starts (v_1, w_1, ..., v_m, w_m) with new partners w_i, then
    the given pairs in order, then fresh pairs spanning what is left.
    """
    iso = [as_vector(v) for v in isotropic]
    prs = [(as_vector(v), as_vector(w)) for v, w in pairs]
    everything = iso + [x for p in prs for x in p]
    if genus is None:
        if not everything:
            raise PreconditionError("genus needed for empty input")
        genus = len(everything[0]) // 2
    for v in everything:
        if len(v) != 2 * genus:
            raise GenusMismatch(f"vector of genus {len(v) // 2} in genus {genus}")
    for i, u in enumerate(iso):
        for x in iso[i + 1:] + [x for p in prs for x in p]:
            if omega(u, x):
                raise PairingPatternError("isotropic vectors must pair to zero with all inputs")
    for i, (v, w) in enumerate(prs):
        if omega(v, w) != 1:
            raise PairingPatternError(f"pair {i} has omega {omega(v, w)}, expected 1")
        for j, (v2, w2) in enumerate(prs):
            if j != i and any(omega(a, b) for a in (v, w) for b in (v2, w2)):
                raise PairingPatternError(f"pairs {i} and {j} are not orthogonal")
    if everything and not is_summand_of_vectors(everything):
        raise NotASummand("input does not span a direct summand")

    pair_span = Lattice.span([x for p in prs for x in p], genus)
    L = list(symplectic_complement(pair_span).basis)
    out: list[Vector] = []
    for i, v in enumerate(iso):
        w = _solve_partner(iso[i:], [1] + [0] * (len(iso) - i - 1), L)
        if w is None:
            raise NotASummand("no integral partner; input is not a summand")
        out += [v, w]
        L = _reduce_basis([_project_off_pair(x, v, w) for x in L], genus)
    for v, w in prs:
        out += [v, w]
    while L:
        v = L[0]
        w = _solve_partner([v], [1], L)
        if w is None:
            raise NotASummand("remaining lattice is not unimodular")
        out += [v, w]
        L = _reduce_basis([_project_off_pair(x, v, w) for x in L], genus)
    return SymplecticBasis(tuple(out), genus)


def _reduce_basis(vectors: list[Vector], genus: int) -> list[Vector]:
    vectors = [v for v in vectors if any(v)]
    if not vectors:
        return []
    return list(Lattice.span(vectors, genus).basis)


def primitive_for_form(vec: Sequence[int], m: int) -> tuple[Vector, int]:
    """Return (e', a) with e = a*e' modulo <e_1..e_m> and {e_1..e_m, e'}
    extendable to a symplectic basis.

    Then omega(e, v) = a*omega(e', v) for every v orthogonal to e_1..e_m.
    """
    v = as_vector(vec)
    n = len(v) // 2
    if m > n:
        raise PreconditionError(f"m = {m} exceeds the genus {n}")
    for i in range(1, m + 1):
        if omega(v, e(i, n)):
            raise PreconditionError(f"omega(e, e_{i}) != 0")
    # saturating <e_1..e_m, e> splits off the e_i-coordinates
    proj = tuple(0 if (k % 2 == 0 and k // 2 < m) else x for k, x in enumerate(v))
    a = content(proj)
    if a == 0:
        raise PreconditionError("e lies in <e_1, ..., e_m>")
    return tuple(x // a for x in proj), a


def random_symplectic_matrix(n: int, rng: random.Random, steps: int = 6, max_entry: int | None = None) -> Matrix:
    """Product of random transvections x -> x + c*omega(u, x)*u with small u.

    With max_entry set, products whose entries exceed it are resampled.
    """
    while True:
        M = [[int(i == j) for j in range(2 * n)] for i in range(2 * n)]
        for _ in range(steps):
            u = [rng.choice((-1, 0, 0, 1)) for _ in range(2 * n)]
            if not any(u):
                continue
            c = rng.choice((-1, 1))
            # T = I + c * u (J^T u)^T, since omega(u, x) = -(J u) . x
            Ju = [sum(row[k] * u[k] for k in range(2 * n)) for row in gram_matrix(n)]
            T = [[int(i == j) - c * u[i] * Ju[j] for j in range(2 * n)] for i in range(2 * n)]
            M = matmul(T, M)
        if max_entry is None or all(abs(x) <= max_entry for row in M for x in row):
            return M


def vector_to_json(v: Sequence[int]) -> list[str]:
    return [str(int(x)) for x in v]


def vector_from_json(data: Sequence[str | int]) -> Vector:
    return as_vector(int(x) for x in data)
