"""Integer simplicial homology, boundary solving and apartment cycles.

Boundary matrices are sparse column maps. Invariant factors come from a
unit-pivot elimination pass followed by a dense Smith form on what is left.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .complexes import FiniteComplex, PosetComplex, SpanMap, span_of
from .errors import MissingSpan, NotACycle, PreconditionError
from .lattice import Line, SymplecticBasis, Vector, canonical_line
from .normal_forms import smith_form, smith_invariants

Simplex = tuple[int, ...]
SparseColumns = list[dict[int, int]]

CHECK_PRIMES = (2147483647, 1000000007)


def permutation_sign(seq: Sequence) -> int:
    """Sign of the permutation sorting `seq` (entries distinct)."""
    sign = 1
    s = list(seq)
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            if s[i] > s[j]:
                sign = -sign
    return sign


@dataclass
class ChainComplexZ:
    """bases[k] lists the oriented k-simplices; boundaries[k] maps degree k
    to degree k-1 as one sparse column per k-simplex. In the reduced
    complex, degree -1 has the single empty simplex."""

    bases: dict[int, list[Simplex]]
    boundaries: dict[int, SparseColumns]
    reduced: bool
    index: dict[int, dict[Simplex, int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.index = {k: {s: i for i, s in enumerate(b)} for k, b in self.bases.items()}

    @property
    def degrees(self) -> list[int]:
        return sorted(self.bases)

    def rank_of(self, k: int) -> int:
        return len(self.bases.get(k, []))

    def dense(self, k: int) -> list[list[int]]:
        rows = self.rank_of(k - 1)
        cols = self.boundaries.get(k, [])
        M = [[0] * len(cols) for _ in range(rows)]
        for j, col in enumerate(cols):
            for i, v in col.items():
                M[i][j] = v
        return M


@dataclass
class Chain:
    """A sparse integer chain keyed by oriented simplex tuples."""

    degree: int
    coeffs: dict[Simplex, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.coeffs = {s: c for s, c in self.coeffs.items() if c}

    def __add__(self, other: "Chain") -> "Chain":
        if self.degree != other.degree:
            raise PreconditionError("chains of different degree")
        out = dict(self.coeffs)
        for s, c in other.coeffs.items():
            out[s] = out.get(s, 0) + c
        return Chain(self.degree, out)

    def __neg__(self) -> "Chain":
        return Chain(self.degree, {s: -c for s, c in self.coeffs.items()})

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def scaled(self, k: int) -> "Chain":
        return Chain(self.degree, {s: k * c for s, c in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Chain) and self.degree == other.degree and self.coeffs == other.coeffs

    def to_json(self, cc: ChainComplexZ) -> dict:
        idx = cc.index[self.degree]
        return {"degree": self.degree, "coefficients": {str(idx[s]): c for s, c in sorted(self.coeffs.items())}}


@dataclass(frozen=True)
class NoSolution:
    """z is not a boundary; reason is 'rational' (not in the span over Q)
    or 'torsion' (in the span over Q but not over Z)."""

    reason: str
    detail: str = ""

    def __bool__(self) -> bool:
        return False


@dataclass(frozen=True)
class HomologySummary:
    groups: dict[int, tuple[int, tuple[int, ...]]]

    def betti(self, k: int) -> int:
        return self.groups.get(k, (0, ()))[0]

    def torsion(self, k: int) -> tuple[int, ...]:
        return self.groups.get(k, (0, ()))[1]

    def is_trivial(self) -> bool:
        return all(b == 0 and not t for b, t in self.groups.values())

    def euler_characteristic(self, reduced: bool) -> int:
        chi = sum((1 if k % 2 == 0 else -1) * b for k, (b, _) in self.groups.items())
        return chi + 1 if reduced else chi

    def to_json(self) -> dict:
        return {str(k): {"betti": b, "torsion": list(t)} for k, (b, t) in sorted(self.groups.items())}


# ------------------------------------------------------------ construction


def _simplices_by_degree(X: FiniteComplex | PosetComplex) -> dict[int, list[Simplex]]:
    out: dict[int, list[Simplex]] = {}
    for s in X.all_simplices():
        out.setdefault(len(s) - 1, []).append(tuple(s))
    return out


def chain_complex(X: FiniteComplex | PosetComplex, reduced: bool = True) -> ChainComplexZ:
    return chain_complex_from_bases(_simplices_by_degree(X), reduced)


def chain_complex_from_bases(bases: dict[int, list[Simplex]], reduced: bool = True) -> ChainComplexZ:
    bases = {k: list(v) for k, v in bases.items() if k >= 0}
    if reduced:
        bases[-1] = [()]
    cc = ChainComplexZ(bases, {}, reduced)
    for k in sorted(bases):
        if k < 0 or (k == 0 and not reduced):
            continue
        lower = cc.index.get(k - 1, {})
        cols = []
        for s in bases[k]:
            col = {}
            for i in range(len(s)):
                face = s[:i] + s[i + 1:]
                if face not in lower:
                    raise PreconditionError(f"face {face} of {s} missing; complex is not face-closed")
                col[lower[face]] = (-1) ** i
            cols.append(col)
        cc.boundaries[k] = cols
    for k in sorted(cc.boundaries):
        if k - 1 in cc.boundaries and not _composes_to_zero(cc.boundaries[k - 1], cc.boundaries[k]):
            raise RuntimeError(f"boundary squared is nonzero in degree {k}")
    return cc


def _composes_to_zero(lower: SparseColumns, upper: SparseColumns) -> bool:
    for col in upper:
        acc: dict[int, int] = {}
        for i, v in col.items():
            for r, w in lower[i].items():
                acc[r] = acc.get(r, 0) + v * w
        if any(acc.values()):
            return False
    return True


def boundary(cc: ChainComplexZ, z: Chain) -> Chain:
    if z.degree not in cc.boundaries:
        return Chain(z.degree - 1)
    lower = cc.bases[z.degree - 1]
    idx = cc.index[z.degree]
    out: dict[Simplex, int] = {}
    for s, c in z.coeffs.items():
        for r, v in cc.boundaries[z.degree][idx[s]].items():
            out[lower[r]] = out.get(lower[r], 0) + c * v
    return Chain(z.degree - 1, out)


# ------------------------------------------------------ sparse elimination


def sparse_invariants(cols: SparseColumns, nrows: int) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix."""
    col_map = {j: dict(c) for j, c in enumerate(cols) if c}
    row_map: dict[int, dict[int, int]] = {}
    for j, c in col_map.items():
        for i, v in c.items():
            row_map.setdefault(i, {})[j] = v
    units = 0
    progress = True
    while progress:
        progress = False
        for j in sorted(col_map, key=lambda j: len(col_map[j])):
            col = col_map.get(j)
            if not col:
                col_map.pop(j, None)
                continue
            best = None
            for i, v in col.items():
                if abs(v) == 1 and (best is None or len(row_map[i]) < len(row_map[best])):
                    best = i
            if best is None:
                continue
            p = col[best]
            prow = row_map[best]
            for i, v in list(col.items()):
                if i == best:
                    continue
                q = v * p  # row_i -= q * row_p clears (i, j)
                row = row_map[i]
                for jj, w in prow.items():
                    nv = row.get(jj, 0) - q * w
                    if nv:
                        row[jj] = nv
                        col_map[jj][i] = nv
                    else:
                        row.pop(jj, None)
                        col_map[jj].pop(i, None)
            for jj in prow:
                if jj != j:
                    col_map[jj].pop(best, None)
            del row_map[best]
            del col_map[j]
            units += 1
            progress = True
    rest_cols = [j for j, c in col_map.items() if c]
    rest_rows = sorted({i for j in rest_cols for i in col_map[j]})
    if not rest_cols:
        return [1] * units
    ri = {r: k for k, r in enumerate(rest_rows)}
    M = [[0] * len(rest_cols) for _ in rest_rows]
    for k, j in enumerate(rest_cols):
        for i, v in col_map[j].items():
            M[ri[i]][k] = v
    return [1] * units + smith_invariants(M)


def rank_mod_p(cols: SparseColumns, p: int) -> int:
    rows_pivot: dict[int, dict[int, int]] = {}
    rank = 0
    for col in cols:
        v = {i: x % p for i, x in col.items() if x % p}
        while v:
            lead = max(v)
            if lead not in rows_pivot:
                inv = pow(v[lead], -1, p)
                rows_pivot[lead] = {i: x * inv % p for i, x in v.items()}
                rank += 1
                break
            piv = rows_pivot[lead]
            c = v[lead]
            for i, x in piv.items():
                nv = (v.get(i, 0) - c * x) % p
                if nv:
                    v[i] = nv
                else:
                    v.pop(i, None)
    return rank


def rational_rank(cols: SparseColumns) -> int:
    """Rank over Q estimated from ranks modulo large primes.

    Each modular rank is a lower bound that is exact for all but finitely
    many primes; the maximum over the check primes is reported.
    """
    return max(rank_mod_p(cols, p) for p in CHECK_PRIMES)


# ---------------------------------------------------------------- homology


def homology(cc: ChainComplexZ) -> HomologySummary:
    invariants = {k: sparse_invariants(cols, cc.rank_of(k - 1)) for k, cols in cc.boundaries.items()}
    groups = {}
    for k in cc.degrees:
        rk_k = len(invariants.get(k, []))
        inv_up = invariants.get(k + 1, [])
        betti = cc.rank_of(k) - rk_k - len(inv_up)
        groups[k] = (betti, tuple(d for d in inv_up if d > 1))
    return HomologySummary(groups)


def rational_betti(cc: ChainComplexZ) -> dict[int, int]:
    ranks = {k: rational_rank(cols) for k, cols in cc.boundaries.items()}
    return {k: cc.rank_of(k) - ranks.get(k, 0) - ranks.get(k + 1, 0) for k in cc.degrees}


# ------------------------------------------------------- boundary solving


def _solvable_mod_p(cols: SparseColumns, target: dict[int, int], p: int) -> bool:
    return rank_mod_p(cols, p) == rank_mod_p(list(cols) + [target], p)


def solve_boundary(cc: ChainComplexZ, z: Chain) -> Chain | NoSolution:
    """Some x with boundary(x) == z, or NoSolution."""
    if not boundary(cc, z).is_zero() and z.degree in cc.boundaries:
        raise NotACycle("input chain is not a cycle")
    if z.is_zero():
        return Chain(z.degree + 1)
    cols = cc.boundaries.get(z.degree + 1, [])
    if not cols:
        return NoSolution("rational", "no simplices one degree up")
    idx = cc.index[z.degree]
    target = {idx[s]: c for s, c in z.coeffs.items()}
    for p in CHECK_PRIMES:
        if not _solvable_mod_p(cols, target, p):
            return NoSolution("rational", f"no solution modulo {p}")
    # only rows touched by the columns matter; restrict to keep the dense step small
    used_rows = sorted({i for c in cols for i in c} | set(target))
    ri = {r: k for k, r in enumerate(used_rows)}
    A = [[0] * len(cols) for _ in used_rows]
    for j, c in enumerate(cols):
        for i, v in c.items():
            A[ri[i]][j] = v
    b = [0] * len(used_rows)
    for i, v in target.items():
        b[ri[i]] = v
    S = smith_form(A)
    c = [sum(u * x for u, x in zip(row, b)) for row in S.U]
    y = [0] * len(cols)
    for i in range(S.rank):
        d = S.D[i][i]
        if c[i] % d:
            return NoSolution("torsion", f"invariant factor {d} does not divide")
        y[i] = c[i] // d
    if any(c[i] for i in range(S.rank, len(used_rows))):
        return NoSolution("rational", "outside the column span")
    x = [sum(v * yi for v, yi in zip(row, y)) for row in S.V]
    upper = cc.bases[z.degree + 1]
    sol = Chain(z.degree + 1, {upper[j]: v for j, v in enumerate(x)})
    if boundary(cc, sol) != z:
        raise RuntimeError("boundary solver produced a wrong filling")
    return sol


def class_is_zero(cc: ChainComplexZ, z: Chain) -> bool:
    return isinstance(solve_boundary(cc, z), Chain)


# -------------------------------------------------------- apartment cycles


def cross_polytope_cycle(k: int, sign: int = 1) -> dict[tuple[tuple[int, int], ...], int]:
    """The fundamental cycle of the k-fold join of 0-spheres.

    Vertex (i, 0) stands for v_i and (i, 1) for w_i. Each top simplex is
    listed in join order (one vertex per pair, pairs ascending) with the
    product of +1 for v and -1 for w, times `sign` for the empty base class.
    """
    out = {}
    for picks in itertools.product((0, 1), repeat=k):
        coeff = sign
        for p in picks:
            coeff *= -1 if p else 1
        out[tuple((i, p) for i, p in enumerate(picks))] = coeff
    return out


def _basis_lines(basis: SymplecticBasis | Sequence[Vector]) -> list[tuple[Line, Line]]:
    vecs = basis.vectors if isinstance(basis, SymplecticBasis) else list(basis)
    lines = [canonical_line(v) for v in vecs]
    return [(lines[2 * i], lines[2 * i + 1]) for i in range(len(lines) // 2)]


def subdivide(ordered: Sequence) -> list[tuple[int, tuple[frozenset, ...]]]:
    """Barycentric subdivision of an ordered simplex as signed flags of faces."""
    out = []
    for perm in itertools.permutations(range(len(ordered))):
        sign = permutation_sign(perm)
        flag = tuple(frozenset(ordered[i] for i in perm[:j + 1]) for j in range(len(perm)))
        out.append((sign, flag))
    return out


def apartment_cycle(basis: SymplecticBasis | Sequence[Vector], target: FiniteComplex | PosetComplex,
                    sign: int = 1) -> Chain:
    """Image of the cross-polytope fundamental class under the basis.

    For a FiniteComplex the cross-polytope simplices map to simplices on the
    basis lines; for a PosetComplex each simplex is subdivided and every face
    is sent to the saturated span of its lines.
    """
    pairs = _basis_lines(basis)
    k = len(pairs)
    xi = cross_polytope_cycle(k, sign)
    out: dict[Simplex, int] = {}
    if isinstance(target, FiniteComplex):
        for simplex, c in xi.items():
            lines = [pairs[i][p] for i, p in simplex]
            if not all(l in target.pool for l in lines):
                raise MissingSpan(f"vertex of {lines} missing from the target")
            idx = [target.pool.index(l) for l in lines]
            key = tuple(sorted(idx))
            if key not in target.tags:
                raise MissingSpan(f"simplex {lines} missing from the target")
            out[key] = out.get(key, 0) + c * permutation_sign(idx)
        return Chain(k - 1, out)
    for simplex, c in xi.items():
        lines = [pairs[i][p] for i, p in simplex]
        for s, flag in subdivide(lines):
            key = []
            for face in flag:
                j = target.index_of(span_of(face))
                if j is None:
                    raise MissingSpan(f"span of {sorted(face)} missing from the target poset")
                key.append(j)
            key_t = tuple(key)
            out[key_t] = out.get(key_t, 0) + c * s
    return Chain(k - 1, out)


def pushforward_subdivision(f: SpanMap, z: Chain) -> Chain:
    """Push a chain on X through its barycentric subdivision along the span map.

    Flags whose image repeats an element are degenerate and dropped.
    """
    out: dict[Simplex, int] = {}
    for simplex, c in z.coeffs.items():
        for s, flag in subdivide(simplex):
            img = tuple(f.vertex_map[tuple(sorted(face))] for face in flag)
            if len(set(img)) < len(img):
                continue
            if list(img) != sorted(img):
                raise RuntimeError("span map is not order preserving")
            out[img] = out.get(img, 0) + c * s
    return Chain(z.degree, out)


def boundary_of_simplex_complex(k: int) -> dict[int, list[Simplex]]:
    """Faces of the k-simplex on vertices 0..k, excluding the top face."""
    return {d: list(itertools.combinations(range(k + 1), d + 1)) for d in range(k)}


def full_simplex(k: int) -> dict[int, list[Simplex]]:
    return {d: list(itertools.combinations(range(k + 1), d + 1)) for d in range(k + 1)}
