"""Height-bounded finite instances of the complex families, their links and
rank filters, the truncated symplectic Tits building, and the span map."""

from __future__ import annotations

import hashlib
import itertools
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import MissingSpan, NotASimplexError, PreconditionError, ResourceLimitExceeded
from .lattice import (
    Lattice,
    Line,
    Vector,
    canonical_line,
    content,
    omega,
    saturate,
    symplectic_complement,
    vector_from_json,
    vector_to_json,
)
from .simplex_types import (
    ABSOLUTE,
    Family,
    RelativeContext,
    classify,
    member_of,
    rank,
    type_allowed,
    underlying,
    vertex_allowed,
)

log = logging.getLogger(__name__)

CANDIDATE_LIMIT = 10**7
CACHE_VERSION = "1"


@dataclass(frozen=True)
class VertexPool:
    lines: tuple[Line, ...]
    genus: int
    height_bound: int
    relative_m: int = 0

    def index(self, l: Line) -> int:
        return self._positions[l]

    @property
    def _positions(self) -> dict[Line, int]:
        cache = self.__dict__.get("_pos")
        if cache is None:
            cache = {l: i for i, l in enumerate(self.lines)}
            object.__setattr__(self, "_pos", cache)
        return cache

    def __len__(self) -> int:
        return len(self.lines)

    def __contains__(self, l: Line) -> bool:
        return l in self._positions


def _primitive_canonical_vectors(dim: int, B: int) -> Iterable[Vector]:
    for v in itertools.product(range(-B, B + 1), repeat=dim):
        lead = next((x for x in v if x), 0)
        if lead > 0 and content(v) == 1:
            yield v


def enumerate_lines(n: int, B: int, ctx: RelativeContext = ABSOLUTE,
                    family: Family | None = None) -> VertexPool:
    """All lines of genus m+n with coordinates in [-B, B] passing the
    relative vertex conditions, in the global line order."""
    if n < 1:
        raise PreconditionError("genus must be positive")
    genus = n + ctx.m
    if B <= 0:
        log.warning("height bound %d gives an empty pool", B)
        return VertexPool((), genus, B, ctx.m)
    lines = sorted(
        Line(v) for v in _primitive_canonical_vectors(2 * genus, B)
        if vertex_allowed(Line(v), ctx, family)
    )
    return VertexPool(tuple(lines), genus, B, ctx.m)


@dataclass
class FiniteComplex:
    """Simplices are sorted tuples of pool indices, grouped by dimension,
    each tagged with the type of its underlying simplex."""

    pool: VertexPool
    family: str
    simplices: dict[int, list[tuple[int, ...]]]
    tags: dict[tuple[int, ...], str]
    ctx: RelativeContext = ABSOLUTE
    max_dim: int | None = None

    @property
    def dimension(self) -> int:
        return max((d for d, s in self.simplices.items() if s), default=-1)

    def f_vector(self) -> list[int]:
        return [len(self.simplices.get(d, [])) for d in range(self.dimension + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.f_vector()))

    def lines_of(self, s: Sequence[int]) -> tuple[Line, ...]:
        return tuple(self.pool.lines[i] for i in s)

    def all_simplices(self) -> list[tuple[int, ...]]:
        return [s for d in sorted(self.simplices) for s in self.simplices[d]]

    def contains(self, s: Iterable[int]) -> bool:
        return tuple(sorted(s)) in self.tags

    def simplex_of_lines(self, lines: Iterable[Line]) -> tuple[int, ...]:
        return tuple(sorted(self.pool.index(canonical_line(l)) for l in lines))

    def line_sets(self) -> set[frozenset[Line]]:
        return {frozenset(self.lines_of(s)) for s in self.tags}

    def to_json(self) -> dict:
        simp = {}
        for d in sorted(self.simplices):
            if d == 0:
                simp["0"] = [[s[0], self.tags[s]] for s in self.simplices[0]]
            else:
                simp[str(d)] = [list(s) + [self.tags[s]] for s in self.simplices[d]]
        return {
            "genus": self.pool.genus,
            "height_bound": self.pool.height_bound,
            "relative_m": self.pool.relative_m,
            "family": self.family,
            "vertices": [vector_to_json(l.rep) for l in self.pool.lines],
            "simplices": simp,
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteComplex":
        lines = tuple(Line(vector_from_json(v)) for v in data["vertices"])
        pool = VertexPool(lines, data["genus"], data["height_bound"], data.get("relative_m", 0))
        simplices: dict[int, list[tuple[int, ...]]] = {}
        tags: dict[tuple[int, ...], str] = {}
        for d, items in data["simplices"].items():
            out = []
            for item in items:
                s = tuple(int(x) for x in item[:-1])
                out.append(s)
                tags[s] = item[-1]
            simplices[int(d)] = out
        return cls(pool, data["family"], simplices, tags, RelativeContext(m=pool.relative_m))


def _member_batch(args) -> list[str | None]:
    lines_list, family, ctx = args
    out = []
    for lines in lines_list:
        base = underlying(lines, ctx)
        t = classify(base)
        out.append(t.tag if t and type_allowed(t, family) else None)
    return out


def _evaluate(candidates: list[tuple[Line, ...]], family: Family, ctx: RelativeContext,
              workers: int) -> list[str | None]:
    if workers <= 1 or len(candidates) < 256:
        return _member_batch((candidates, family, ctx))
    size = max(64, len(candidates) // (4 * workers))
    batches = [(candidates[i:i + size], family, ctx) for i in range(0, len(candidates), size)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        results = list(ex.map(_member_batch, batches))
    return [t for r in results for t in r]


def build_on_lines(lines: Sequence[Line], family: Family | str, ctx: RelativeContext = ABSOLUTE,
                   max_dim: int | None = None, workers: int = 1, height_bound: int = 0,
                   limit: int = CANDIDATE_LIMIT) -> FiniteComplex:
    """Full subcomplex of the family on the given vertices.

    Candidates of size k+1 are extensions of k-simplices by a larger common
    neighbour whose every k-face is present; each candidate is then decided by
    an exact membership test.
    """
    family = Family.parse(family) if isinstance(family, str) else family
    lines = tuple(sorted(set(lines)))
    genus = lines[0].genus if lines else ctx.m
    pool = VertexPool(lines, genus, height_bound, ctx.m)
    tags: dict[tuple[int, ...], str] = {}
    simplices: dict[int, list[tuple[int, ...]]] = {}
    candidates_seen = 0

    verts = [(i,) for i, l in enumerate(lines)]
    vtags = _evaluate([(l,) for l in lines], family, ctx, workers)
    level = [s for s, t in zip(verts, vtags) if t]
    for s, t in zip(verts, vtags):
        if t:
            tags[s] = t
    if level:
        simplices[0] = level
    nbrs: dict[int, set[int]] = {s[0]: set() for s in level}
    d = 0
    while level and (max_dim is None or d < max_dim):
        d += 1
        cand: list[tuple[int, ...]] = []
        for s in level:
            if d == 1:
                ext = (j for j in nbrs if j > s[0])
            else:
                common = set.intersection(*(nbrs[i] for i in s))
                ext = (j for j in common if j > s[-1])
            for j in sorted(ext):
                t = s + (j,)
                if d > 1 and any(t[:k] + t[k + 1:] not in tags for k in range(len(t) - 1)):
                    continue
                cand.append(t)
        candidates_seen += len(cand)
        if candidates_seen > limit:
            raise ResourceLimitExceeded(
                f"candidate count {candidates_seen} exceeds {limit}",
                {"family": family.value, "genus": genus, "vertices": len(lines),
                 "dimension_reached": d, "candidates": candidates_seen},
            )
        results = _evaluate([tuple(lines[i] for i in t) for t in cand], family, ctx, workers)
        level = [t for t, r in zip(cand, results) if r]
        for t, r in zip(cand, results):
            if r:
                tags[t] = r
        if d == 1:
            for a, b in level:
                nbrs[a].add(b)
                nbrs[b].add(a)
        if level:
            simplices[d] = level
    return FiniteComplex(pool, family.value, simplices, tags, ctx, max_dim)


def build_complex(family: Family | str, n: int, m: int = 0, B: int = 1, max_dim: int | None = None,
                  delta: Sequence[Line] = (), hat: bool = False, workers: int = 1,
                  limit: int = CANDIDATE_LIMIT) -> FiniteComplex:
    family = Family.parse(family) if isinstance(family, str) else family
    ctx = RelativeContext(m=m, delta=tuple(sorted(delta)), hat=hat)
    pool = enumerate_lines(n, B, ctx, family)
    X = build_on_lines(pool.lines, family, ctx, max_dim, workers, B, limit)
    X.pool = VertexPool(X.pool.lines, n + m, B, m)
    return X


def brute_force_simplices(lines: Sequence[Line], family: Family | str, ctx: RelativeContext = ABSOLUTE,
                          max_size: int | None = None) -> set[frozenset[Line]]:
    """Every subset passing member_of; the oracle for small builds."""
    lines = sorted(set(lines))
    top = len(lines) if max_size is None else min(max_size, len(lines))
    out = set()
    for k in range(1, top + 1):
        for sub in itertools.combinations(lines, k):
            if member_of(sub, family, ctx):
                out.add(frozenset(sub))
    return out


def _subcomplex(X: FiniteComplex, keep: Callable[[Line], bool], ctx: RelativeContext | None = None) -> FiniteComplex:
    kept = [i for i, l in enumerate(X.pool.lines) if keep(l)]
    remap = {old: new for new, old in enumerate(kept)}
    pool = VertexPool(tuple(X.pool.lines[i] for i in kept), X.pool.genus, X.pool.height_bound, X.pool.relative_m)
    simplices: dict[int, list[tuple[int, ...]]] = {}
    tags = {}
    for d in sorted(X.simplices):
        lst = []
        for s in X.simplices[d]:
            if all(i in remap for i in s):
                t = tuple(remap[i] for i in s)
                lst.append(t)
                tags[t] = X.tags[s]
        if lst:
            simplices[d] = lst
    return FiniteComplex(pool, X.family, simplices, tags, ctx or X.ctx, X.max_dim)


def restrict(X: FiniteComplex, mode: str, R: int | float | None = None) -> FiniteComplex:
    """Full subcomplex on vertices of rank < R, rank <= R, or inside W.

    W is <e_1, f_1, ..., e_N, f_N> with f_N removed, i.e. rank 0.
    """
    N = X.pool.genus
    if mode == "rank_lt":
        return _subcomplex(X, lambda l: rank(l, N) < R)
    if mode == "rank_le":
        return _subcomplex(X, lambda l: rank(l, N) <= R)
    if mode == "W":
        return _subcomplex(X, lambda l: l.rep[2 * N - 1] == 0)
    raise ValueError(f"unknown restriction {mode!r}")


def link_of(X: FiniteComplex, delta: Iterable[Line | int], hat: bool = False) -> FiniteComplex:
    """(Hatted) link of a simplex, read off the simplices of X containing it.

    Tags carry over from the larger simplex, which is the relative type.
    """
    dl = tuple(sorted(X.pool.lines[x] if isinstance(x, int) else canonical_line(x) for x in delta))
    ds = X.simplex_of_lines(dl) if all(l in X.pool for l in dl) else None
    if ds is None or ds not in X.tags:
        raise NotASimplexError(f"{list(dl)} is not a simplex of the complex")
    ctx = RelativeContext(m=X.ctx.m, delta=tuple(sorted(set(X.ctx.delta) | set(dl))), hat=hat or X.ctx.hat,
                          isotropic_summand=X.ctx.isotropic_summand)
    dset = set(ds)
    rest_lines = [l for i, l in enumerate(X.pool.lines) if i not in dset]
    if hat:
        rest_lines = [l for l in rest_lines if vertex_allowed(l, ctx)]
    keep = set(rest_lines)
    pool = VertexPool(tuple(sorted(keep)), X.pool.genus, X.pool.height_bound, X.pool.relative_m)
    simplices: dict[int, list[tuple[int, ...]]] = {}
    tags = {}
    k = len(ds)
    for s in X.all_simplices():
        if len(s) <= k or not dset.issubset(s):
            continue
        rest = [X.pool.lines[i] for i in s if i not in dset]
        if not all(l in keep for l in rest):
            continue
        t = tuple(sorted(pool.index(l) for l in rest))
        tags[t] = X.tags[s]
        simplices.setdefault(len(t) - 1, []).append(t)
    for d in simplices:
        simplices[d].sort()
    max_dim = None if X.max_dim is None else X.max_dim - k
    return FiniteComplex(pool, X.family, simplices, tags, ctx, max_dim)


def complement_lines(lines: Iterable[Line], delta: Iterable[Line]) -> list[Line]:
    """Lines of the pool lying in the symplectic complement of span(delta)."""
    d = [l.rep for l in delta]
    return [l for l in lines if all(omega(l.rep, x) == 0 for x in d)]


# ------------------------------------------------------------ Tits building


@dataclass
class PosetComplex:
    """Order complex of a finite poset of saturated isotropic lattices.

    Elements are sorted by (rank, Hermite basis), so increasing index tuples
    are exactly the flags ordered by increasing rank.
    """

    elements: list[Lattice]
    chains: dict[int, list[tuple[int, ...]]]
    genus: int
    _index: dict[tuple, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._index = {L.basis: i for i, L in enumerate(self.elements)}

    def index_of(self, L: Lattice) -> int | None:
        return self._index.get(L.basis)

    @property
    def dimension(self) -> int:
        return max((d for d, s in self.chains.items() if s), default=-1)

    def f_vector(self) -> list[int]:
        return [len(self.chains.get(d, [])) for d in range(self.dimension + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.f_vector()))

    def all_simplices(self) -> list[tuple[int, ...]]:
        return [s for d in sorted(self.chains) for s in self.chains[d]]

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "family": "tits",
            "elements": [[vector_to_json(v) for v in L.basis] for L in self.elements],
            "chains": {str(d): [list(c) for c in cs] for d, cs in sorted(self.chains.items())},
        }


def _less(a: Lattice, b: Lattice) -> bool:
    return a.rank < b.rank and b.contains_lattice(a)


def build_tits_poset(lines: Sequence[Line] | VertexPool, extra_spans: Iterable[Lattice] = (),
                     limit: int = CANDIDATE_LIMIT) -> PosetComplex:
    """Saturations of spans of isotropic independent subsets of the pool,
    plus the supplied lattices, with their order complex."""
    if isinstance(lines, VertexPool):
        lines = lines.lines
    lines = sorted(set(lines))
    extras = list(extra_spans)
    genus = lines[0].genus if lines else (extras[0].genus if extras else 0)
    found: dict[tuple, Lattice] = {}
    iso = {l: {m for m in lines if m != l and omega(l.rep, m.rep) == 0} for l in lines}
    count = 0

    def grow(current: list[Line], rank_now: int) -> None:
        nonlocal count
        count += 1
        if count > limit:
            raise ResourceLimitExceeded("Tits poset enumeration too large", {"subsets": count})
        L = saturate(Lattice.span([l.rep for l in current], genus))
        if L.rank != len(current):
            return
        found.setdefault(L.basis, L)
        if L.rank == genus:
            return
        cands = set.intersection(*(iso[l] for l in current))
        for m in sorted(cands):
            if m > current[-1]:
                grow(current + [m], rank_now + 1)

    for l in lines:
        grow([l], 1)
    for L in extras:
        S = saturate(L)
        if not S.is_isotropic():
            raise PreconditionError(f"{S} is not isotropic")
        found.setdefault(S.basis, S)
    elements = sorted(found.values(), key=lambda L: (L.rank, L.basis))
    below = [[j for j in range(i) if _less(elements[j], elements[i])] for i in range(len(elements))]
    chains: dict[int, list[tuple[int, ...]]] = {0: [(i,) for i in range(len(elements))]} if elements else {}
    level = chains.get(0, [])
    d = 0
    while level:
        nxt = []
        for c in level:
            top = c[-1]
            for j in range(top + 1, len(elements)):
                if top in below[j]:
                    nxt.append(c + (j,))
        d += 1
        if nxt:
            chains[d] = sorted(nxt)
        level = nxt
    return PosetComplex(elements, chains, genus)


def span_of(lines: Iterable[Line]) -> Lattice:
    lines = list(lines)
    return saturate(Lattice.span([l.rep for l in lines], lines[0].genus))


@dataclass(frozen=True)
class SpanMap:
    """Vertex map from the barycentric subdivision of X to a Tits poset."""

    source: FiniteComplex
    target: PosetComplex
    vertex_map: dict[tuple[int, ...], int]

    def is_order_preserving(self) -> bool:
        for s, img in self.vertex_map.items():
            for k in range(len(s)):
                face = s[:k] + s[k + 1:]
                if face and not (self.vertex_map[face] == img
                                 or _less(self.target.elements[self.vertex_map[face]], self.target.elements[img])):
                    return False
        return True


def span_map(X: FiniteComplex, target: PosetComplex | None = None) -> SpanMap:
    """Send each simplex of an IAA^(0)-type complex to the saturation of its span."""
    if X.family not in (Family.IAA0.value, Family.I.value, Family.I_DELTA.value, Family.BAA.value,
                        Family.B.value, Family.BA.value):
        raise PreconditionError(f"span map needs an isotropic family, got {X.family}")
    spans = {}
    for s in X.all_simplices():
        L = span_of(X.lines_of(s))
        if not L.is_isotropic():
            raise RuntimeError(f"span of {X.lines_of(s)} is not isotropic")
        spans[s] = L
    if target is None:
        target = build_tits_poset(X.pool.lines, spans.values())
    vmap = {}
    for s, L in spans.items():
        i = target.index_of(L)
        if i is None:
            raise MissingSpan(f"{L} missing from the target poset")
        vmap[s] = i
    return SpanMap(X, target, vmap)


# ------------------------------------------------------------------ caching


def cache_key(family: str, n: int, m: int, B: int, max_dim: int | None, extra: str = "") -> str:
    from . import __version__

    payload = json.dumps({"family": family, "n": n, "m": m, "B": B, "max_dim": max_dim,
                          "extra": extra, "version": __version__, "cache": CACHE_VERSION}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:20]


def cached_build(cache_dir: str | None, family: str, n: int, m: int, B: int, max_dim: int | None,
                 workers: int = 1, limit: int = CANDIDATE_LIMIT) -> tuple[FiniteComplex, bool]:
    """Build or load from `cache_dir`; returns (complex, loaded_from_cache)."""
    path = None
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        path = os.path.join(cache_dir, f"complex-{cache_key(family, n, m, B, max_dim)}.json")
        if os.path.exists(path):
            with open(path) as fh:
                return FiniteComplex.from_json(json.load(fh)), True
    X = build_complex(family, n, m, B, max_dim, workers=workers, limit=limit)
    if path:
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            json.dump(X.to_json(), fh, sort_keys=True)
        os.replace(tmp, path)
    return X, False
