"""Simplex types of sets of lines, complex-family membership, and the rank
reduction map.

`classify` works structurally: it reads the pattern of unimodular pairings
(the "sigma graph") and the integer relations among the isotropic vertices.
`literal_tags` instead tries every index assignment against the defining
conditions and is used as an oracle in tests and audits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import GenusMismatch, NotASimplexError, PreconditionError
from .lattice import (
    Line,
    Vector,
    canonical_line,
    e,
    is_summand_of_vectors,
    omega,
)
from .normal_forms import solve_integer, transpose

ISOTROPIC_TAGS = ("standard", "two_additive", "three_additive", "double_triple", "double_double")
PAIRED_TAGS = ("sigma", "skew_additive", "two_skew_additive", "sigma2", "skew_sigma2", "sigma_additive")
BASE_TAGS = (
    "standard", "two_additive", "three_additive", "double_triple", "double_double",
    "sigma", "mixed", "sigma2", "skew_additive", "two_skew_additive", "skew_sigma2", "sigma_additive",
)
MINIMAL_SIZE = {
    "sigma": 2, "skew_additive": 3, "two_skew_additive": 4,
    "sigma2": 4, "skew_sigma2": 4, "sigma_additive": 3,
}
NON_ADDITIVE_TAGS = ("standard", "sigma", "sigma2", "skew_additive", "skew_sigma2")


def composite_tag(tau: str, tau_prime: str) -> str:
    return f"composite({tau},{tau_prime})"


@dataclass(frozen=True)
class SimplexType:
    """A type tag with a witness.

    `order` is the index assignment (v_0, ..., v_k) under which the defining
    conditions of `tag` hold. For composite and mixed types, `parts` holds the
    types of the isotropic remainder and of the paired core.
    """

    tag: str
    order: tuple[Line, ...]
    parts: tuple["SimplexType", "SimplexType"] | None = None

    def __bool__(self) -> bool:
        return True

    @property
    def pair(self) -> tuple[str, str | None]:
        """The (tau, tau') description used by the intermediate complexes."""
        if self.tag in ISOTROPIC_TAGS:
            return self.tag, None
        if self.tag in PAIRED_TAGS:
            return "standard", self.tag
        return self.parts[0].tag, self.parts[1].tag

    @property
    def lines(self) -> frozenset[Line]:
        return frozenset(self.order)

    def to_json(self) -> dict:
        out = {"type": self.tag, "witness": [list(map(str, l.rep)) for l in self.order]}
        if self.parts:
            out["parts"] = [p.to_json() for p in self.parts]
        return out


class _NotASimplex:
    tag = "not_a_simplex"

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return "NotASimplex"

    def to_json(self) -> dict:
        return {"type": self.tag}


NotASimplex = _NotASimplex()


# ---------------------------------------------------------------- primitives


def _reps(lines: Iterable[Line]) -> list[Vector]:
    return [l.rep for l in lines]


def _is_standard(vecs: Sequence[Vector]) -> bool:
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            if omega(vecs[i], vecs[j]):
                return False
    return is_summand_of_vectors(vecs)


def _signed_sum(target: Vector, parts: Sequence[Vector]) -> tuple[int, ...] | None:
    """Signs s with target == sum(s_i * parts_i), if any."""
    for signs in itertools.product((1, -1), repeat=len(parts)):
        if all(t == sum(s * p[k] for s, p in zip(signs, parts)) for k, t in enumerate(target)):
            return signs
    return None


def _coefficients(target: Vector, basis: Sequence[Vector]) -> list[int] | None:
    if not basis:
        return None
    return solve_integer(transpose(list(basis), len(basis)), list(target))


def _unit_support(coeffs: Sequence[int] | None) -> list[int] | None:
    """Indices of nonzero coefficients when all of them are +-1."""
    if coeffs is None or any(abs(c) > 1 for c in coeffs):
        return None
    return [i for i, c in enumerate(coeffs) if c]


# ------------------------------------------------------- literal definitions


def _orth_pattern(vecs: Sequence[Vector], unit_pairs: Iterable[tuple[int, int]]) -> bool:
    """|omega| == 1 on the listed index pairs and 0 on all others."""
    want = {frozenset(p) for p in unit_pairs}
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            w = abs(omega(vecs[i], vecs[j]))
            if w != (1 if frozenset((i, j)) in want else 0):
                return False
    return True


def _without(vecs: Sequence[Vector], *idx: int) -> list[Vector]:
    drop = {i % len(vecs) for i in idx}
    return [v for i, v in enumerate(vecs) if i not in drop]


def literal_check(tag: str, vecs: Sequence[Vector], mixed_literal: bool = False) -> bool:
    """Whether the defining conditions of a base type hold for the given
    index assignment v = (v_0, ..., v_k) of representatives."""
    k = len(vecs) - 1
    v = vecs
    if tag == "standard":
        return _is_standard(v)
    if tag == "two_additive":
        return k >= 2 and _signed_sum(v[0], [v[1], v[2]]) is not None and _is_standard(v[1:])
    if tag == "three_additive":
        return k >= 3 and _signed_sum(v[0], v[1:4]) is not None and _is_standard(v[1:])
    if tag == "double_triple":
        return (k >= 4 and _signed_sum(v[0], [v[2], v[3]]) is not None
                and _signed_sum(v[1], [v[2], v[4]]) is not None and _is_standard(v[2:]))
    if tag == "double_double":
        return (k >= 5 and _signed_sum(v[0], [v[2], v[3]]) is not None
                and _signed_sum(v[1], [v[4], v[5]]) is not None and _is_standard(v[2:]))
    if tag == "sigma":
        return (k >= 1 and abs(omega(v[k], v[k - 1])) == 1
                and all(omega(v[k], v[i]) == 0 for i in range(k - 1))
                and _is_standard(v[:k]))
    if tag == "mixed":
        if k < 3:
            return False
        ok = literal_check("sigma", v[1:]) and literal_check("two_additive", v[:k])
        # the pairing vertex must also be orthogonal to v_0, see decisions
        return ok and (mixed_literal or omega(v[k], v[0]) == 0)
    if tag == "sigma2":
        return (k >= 3 and _orth_pattern(v, [(k - 1, k - 3), (k, k - 2)])
                and _is_standard(_without(v, k - 1, k)))
    if tag == "skew_additive":
        return k >= 2 and _orth_pattern(v, [(k, 0), (k, 1)]) and _is_standard(v[:k])
    if tag == "two_skew_additive":
        return (k >= 3 and _signed_sum(v[0], [v[1], v[2]]) is not None
                and _orth_pattern(v, [(k, 0), (k, 1)]) and _is_standard(_without(v, 0, k)))
    if tag == "skew_sigma2":
        return (k >= 3 and _orth_pattern(v, [(k - 1, k - 3), (k, k - 3), (k, k - 2)])
                and _is_standard(_without(v, k - 1, k)))
    if tag == "sigma_additive":
        return (k >= 2 and _signed_sum(v[k], [v[k - 1], v[k - 2]]) is not None
                and _orth_pattern(v, [(k - 2, k - 1), (k - 2, k), (k - 1, k)])
                and _is_standard(_without(v, k - 1, k)))
    raise ValueError(f"unknown base tag {tag!r}")


def literal_is(tag: str, lines: Sequence[Line], mixed_literal: bool = False) -> bool:
    """Set-level literal test: some index assignment satisfies the definition."""
    vecs = _reps(lines)
    return any(literal_check(tag, list(p), mixed_literal) for p in itertools.permutations(vecs))


def literal_composite(tau: str, tau_prime: str, lines: Sequence[Line]) -> bool:
    size = MINIMAL_SIZE[tau_prime]
    lines = list(lines)
    for core in itertools.combinations(lines, size):
        rest = [l for l in lines if l not in core]
        if not rest:
            continue
        if any(omega(r.rep, c.rep) for r in rest for c in core):
            continue
        if literal_is(tau_prime, core) and literal_is(tau, rest):
            return True
    return False


def literal_tags(lines: Sequence[Line], mixed_literal: bool = False) -> list[str]:
    """Every tag whose definition the set satisfies, found by exhaustive search.

    Composite (tau, tau') tags are only listed when no base tag matches,
    mirroring the precedence used by `classify`.
    """
    lines = sorted(set(lines))
    found = [t for t in BASE_TAGS if literal_is(t, lines, mixed_literal)]
    if found:
        return found
    return [composite_tag(a, b) for b in PAIRED_TAGS for a in ISOTROPIC_TAGS
            if literal_composite(a, b, lines)]


# --------------------------------------------------------- structured search


def _isotropic_type(lines: tuple[Line, ...]) -> SimplexType | None:
    """Standard or additive type of an isotropic set, or None."""
    vecs = _reps(lines)
    if _is_standard(vecs):
        return SimplexType("standard", lines)
    n = len(lines)
    for a in range(n):
        rest = [i for i in range(n) if i != a]
        basis = [vecs[i] for i in rest]
        if not _is_standard(basis):
            continue
        supp = _unit_support(_coefficients(vecs[a], basis))
        if supp is None or len(supp) not in (2, 3):
            return None
        core = [rest[i] for i in supp]
        others = [i for i in rest if i not in core]
        tag = "two_additive" if len(core) == 2 else "three_additive"
        return SimplexType(tag, tuple(lines[i] for i in [a] + core + others))
    for a, b in itertools.combinations(range(n), 2):
        rest = [i for i in range(n) if i not in (a, b)]
        basis = [vecs[i] for i in rest]
        if not _is_standard(basis):
            continue
        sa = _unit_support(_coefficients(vecs[a], basis))
        sb = _unit_support(_coefficients(vecs[b], basis))
        if sa is None or sb is None or len(sa) != 2 or len(sb) != 2:
            continue
        sa, sb = [rest[i] for i in sa], [rest[i] for i in sb]
        shared = set(sa) & set(sb)
        if len(shared) == 1:
            (c,) = shared
            tail = [sa[0] if sa[1] == c else sa[1], sb[0] if sb[1] == c else sb[1]]
            head = [a, b, c] + tail
            tag = "double_triple"
        elif not shared:
            head = [a, b] + sa + sb
            tag = "double_double"
        else:
            continue
        others = [i for i in rest if i not in head]
        return SimplexType(tag, tuple(lines[i] for i in head + others))
    return None


def _sigma_graph(lines: Sequence[Line]) -> dict[Line, set[Line]] | None:
    """Adjacency of unimodular pairings; None if some pairing exceeds 1."""
    adj: dict[Line, set[Line]] = {}
    for a, b in itertools.combinations(lines, 2):
        w = abs(omega(a.rep, b.rep))
        if w > 1:
            return None
        if w == 1:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
    return adj


def _paired_cores(adj: dict[Line, set[Line]], isolated: Sequence[Line]):
    """Candidate (tau', core order) pairs read off the sigma graph.

    Each order is an index assignment of the core under which the definition
    of tau' holds except for the final summand condition.
    """
    verts = sorted(adj)
    edges = sorted({tuple(sorted((a, b))) for a in adj for b in adj[a]})
    deg = {v: len(adj[v]) for v in verts}
    if len(edges) == 1:
        a, b = edges[0]
        return [("sigma", (a, b)), ("sigma", (b, a))]
    if len(edges) == 2:
        if len(verts) == 4:
            (a, b), (c, d) = edges
            # order (v_{k-3}, v_{k-2}, v_{k-1}, v_k): pairs (k-1, k-3), (k, k-2)
            return [("sigma2", (x, y, xp, yp)) for x, xp in ((a, b), (b, a)) for y, yp in ((c, d), (d, c))]
        center = next(v for v in verts if deg[v] == 2)
        p, q = sorted(adj[center])
        out = []
        for v0, v1 in ((p, q), (q, p)):
            for x in isolated:
                if _signed_sum(v0.rep, [v1.rep, x.rep]) is not None:
                    out.append(("two_skew_additive", (v0, v1, x, center)))
        out += [("skew_additive", (p, q, center))]
        return out
    if len(edges) == 3:
        if len(verts) == 3:
            out = []
            for vk in verts:
                o1, o2 = sorted(v for v in verts if v != vk)
                for vk1, vk2 in ((o1, o2), (o2, o1)):
                    out.append(("sigma_additive", (vk2, vk1, vk)))
            return out
        if len(verts) == 4 and sorted(deg.values()) == [1, 1, 2, 2]:
            ends = [v for v in verts if deg[v] == 1]
            out = []
            for x in ends:
                (y,) = adj[x]
                (z,) = adj[y] - {x}
                (w,) = adj[z] - {y}
                # path x-y-z-w as (v_{k-3}, v_{k-2}, v_{k-1}, v_k) = (y, w, x, z)
                out.append(("skew_sigma2", (y, w, x, z)))
            return out
    return []


def _core_check(tag: str, core: Sequence[Line]) -> bool:
    return literal_check(tag, _reps(core))


def _classify_uncached(lines: tuple[Line, ...]) -> SimplexType | _NotASimplex:
    adj = _sigma_graph(lines)
    if adj is None:
        return NotASimplex
    if not adj:
        t = _isotropic_type(lines)
        return t if t is not None else NotASimplex
    isolated = [l for l in lines if l not in adj]
    candidates = _paired_cores(adj, isolated)
    if not candidates:
        return NotASimplex
    found: list[tuple[str, SimplexType, SimplexType]] = []
    for tau_prime, core in candidates:
        if not _core_check(tau_prime, core):
            continue
        rest = tuple(l for l in lines if l not in core)
        if not rest:
            return SimplexType(tau_prime, tuple(core))
        rest_type = _isotropic_type(rest)
        if rest_type is None:
            continue
        core_type = SimplexType(tau_prime, tuple(core))
        if rest_type.tag == "standard":
            # base type when the whole set minus the removed vertices is standard
            order = _base_order(tau_prime, core, rest)
            if literal_check(tau_prime, _reps(order)):
                return SimplexType(tau_prime, order)
        if rest_type.tag == "two_additive" and tau_prime == "sigma":
            order = rest_type.order + tuple(core)
            return SimplexType("mixed", order, (rest_type, core_type))
        found.append((rest_type.tag, rest_type, core_type))
    # candidates are ordered so that a relation among the path ends joins the core
    if found:
        tau, rest_type, core_type = found[0]
        return SimplexType(composite_tag(tau, core_type.tag),
                           rest_type.order + core_type.order, (rest_type, core_type))
    return NotASimplex


def _base_order(tag: str, core: Sequence[Line], rest: Sequence[Line]) -> tuple[Line, ...]:
    """Merge a core assignment with the remaining vertices into v_0..v_k."""
    rest = tuple(rest)
    core = tuple(core)
    if tag in ("skew_additive",):
        return core[:2] + rest + core[2:]
    if tag == "two_skew_additive":
        return core[:3] + rest + core[3:]
    return rest + core


@lru_cache(maxsize=1 << 18)
def _classify_cached(lines: tuple[Line, ...]) -> SimplexType | _NotASimplex:
    return _classify_uncached(lines)


def _normalize(lines: Iterable[Line | Sequence[int]]) -> tuple[Line, ...]:
    out = sorted({canonical_line(l) for l in lines})
    if not out:
        raise PreconditionError("empty simplex candidate")
    g = out[0].genus
    if any(l.genus != g for l in out):
        raise GenusMismatch("lines of different genus")
    return tuple(out)


def classify(lines: Iterable[Line | Sequence[int]]) -> SimplexType | _NotASimplex:
    """Type of a set of lines, or NotASimplex.

    Base types take precedence; mixed is reported for the (two_additive,
    sigma) pattern; other (tau, tau') patterns come back as composite tags.
    """
    return _classify_cached(_normalize(lines))


def verify_witness(lines: Iterable[Line], t: SimplexType) -> bool:
    """Re-check a classification result against the defining conditions."""
    if set(_normalize(lines)) != set(t.order) or len(t.order) != len(set(t.order)):
        return False
    if t.tag in BASE_TAGS:
        return literal_check(t.tag, _reps(t.order))
    rest_type, core_type = t.parts
    core, rest = core_type.order, rest_type.order
    if len(core) != MINIMAL_SIZE[core_type.tag]:
        return False
    if any(omega(r.rep, c.rep) for r in rest for c in core):
        return False
    return (literal_check(core_type.tag, _reps(core)) and literal_check(rest_type.tag, _reps(rest))
            and t.tag == composite_tag(rest_type.tag, core_type.tag))


# ------------------------------------------------------ augmentation core


def augmentation_core(lines: Iterable[Line]) -> tuple[tuple[Line, ...], bool]:
    """(core, minimal): the smallest face of the same type; empty if standard."""
    lines = _normalize(lines)
    t = classify(lines)
    if not t:
        raise NotASimplexError(f"{list(lines)} is not a simplex")
    core = _core_of(t)
    return tuple(sorted(core)), (len(core) > 0 and len(core) == len(lines))


def _core_of(t: SimplexType) -> set[Line]:
    o = t.order
    k = len(o) - 1
    if t.tag == "standard":
        return set()
    if t.tag == "two_additive":
        return set(o[:3])
    if t.tag == "three_additive":
        return set(o[:4])
    if t.tag == "double_triple":
        return set(o[:5])
    if t.tag == "double_double":
        return set(o[:6])
    if t.tag == "sigma":
        return {o[k - 1], o[k]}
    if t.tag in ("sigma2", "skew_sigma2"):
        return set(o[k - 3:])
    if t.tag == "skew_additive":
        return {o[0], o[1], o[k]}
    if t.tag == "two_skew_additive":
        return {o[0], o[1], o[2], o[k]}
    if t.tag == "sigma_additive":
        return set(o[k - 2:])
    rest_type, core_type = t.parts
    return _core_of(rest_type) | set(core_type.order)


# ----------------------------------------------------------------- families


class Family(str, Enum):
    B = "B"
    BA = "BA"
    BAA = "BAA"
    I = "I"
    I_DELTA = "I_delta"
    I_SIGMA_DELTA = "I_sigma_delta"
    IA = "IA"
    IAA_STAR = "IAA_star"
    IAA = "IAA"
    IAA0 = "IAA0"
    IAA1 = "IAA1"
    IAA15 = "IAA1.5"
    IAA2 = "IAA2"

    @classmethod
    def parse(cls, name: str) -> "Family":
        aliases = {
            "i^delta": cls.I_DELTA, "i^{sigma,delta}": cls.I_SIGMA_DELTA, "iaa*": cls.IAA_STAR,
            "iaa^(0)": cls.IAA0, "iaa^(1)": cls.IAA1, "iaa^(1.5)": cls.IAA15, "iaa^(2)": cls.IAA2,
            "iaa(0)": cls.IAA0, "iaa(1)": cls.IAA1, "iaa(1.5)": cls.IAA15, "iaa(2)": cls.IAA2,
        }
        key = name.strip()
        for fam in cls:
            if fam.value.lower() == key.lower() or fam.name.lower() == key.lower():
                return fam
        if key.lower() in aliases:
            return aliases[key.lower()]
        raise ValueError(f"unknown family {name!r}")

    @property
    def isotropic_only(self) -> bool:
        return self in (Family.B, Family.BA, Family.BAA)


_BASE_MEMBERS = {
    Family.I: {"standard"},
    Family.I_DELTA: {"standard", "two_additive"},
    Family.I_SIGMA_DELTA: {"standard", "two_additive", "sigma"},
    Family.IA: {"standard", "two_additive", "sigma", "mixed"},
    Family.B: {"standard"},
    Family.BA: {"standard", "two_additive"},
    Family.BAA: set(ISOTROPIC_TAGS),
}
_BASE_MEMBERS[Family.IAA_STAR] = _BASE_MEMBERS[Family.IA] | set(ISOTROPIC_TAGS)
_BASE_MEMBERS[Family.IAA] = set(BASE_TAGS)
_PAIRED_ALLOWED = {
    Family.IAA0: {None},
    Family.IAA1: {None, "sigma"},
    Family.IAA15: {None, "sigma", "skew_additive", "two_skew_additive"},
    Family.IAA2: {None} | set(PAIRED_TAGS),
}


def type_allowed(t: SimplexType, family: Family) -> bool:
    if family in _PAIRED_ALLOWED:
        return t.pair[1] in _PAIRED_ALLOWED[family]
    return t.tag in _BASE_MEMBERS[family]


def family_tags(family: Family) -> set[str]:
    """Tags of simplices in a family (composites included for IAA^(i))."""
    if family in _PAIRED_ALLOWED:
        out = set(ISOTROPIC_TAGS)
        for tp in _PAIRED_ALLOWED[family] - {None}:
            out.add(tp)
            out |= {composite_tag(tau, tp) for tau in ISOTROPIC_TAGS if (tau, tp) != ("two_additive", "sigma")}
            if tp == "sigma":
                out.add("mixed")
        return out
    return set(_BASE_MEMBERS[family])


@dataclass(frozen=True)
class RelativeContext:
    """Frozen lines e_1..e_m, an optional base simplex, and the hat flag.

    `isotropic_summand` is the summand V used by the B families; it defaults
    to <e_1, ..., e_N>.
    """

    m: int = 0
    delta: tuple[Line, ...] = ()
    hat: bool = False
    isotropic_summand: tuple[Vector, ...] | None = None

    def frozen(self, genus: int) -> tuple[Line, ...]:
        return tuple(canonical_line(e(i, genus)) for i in range(1, self.m + 1))


ABSOLUTE = RelativeContext()


def _in_span(v: Vector, gens: Sequence[Vector]) -> bool:
    if not gens:
        return not any(v)
    return solve_integer(transpose(list(gens), len(gens)), list(v)) is not None


def _in_rational_span(v: Vector, gens: Sequence[Vector]) -> bool:
    from .normal_forms import smith_invariants

    if not gens:
        return not any(v)
    return len(smith_invariants([list(g) for g in gens] + [list(v)])) == len(smith_invariants([list(g) for g in gens]))


def _default_isotropic(genus: int) -> tuple[Vector, ...]:
    return tuple(e(i, genus) for i in range(1, genus + 1))


def vertex_allowed(v: Line, ctx: RelativeContext, family: Family | None = None) -> bool:
    """Vertex conditions of the relative complex (and of the hatted link)."""
    g = v.genus
    frozen = ctx.frozen(g)
    if v in frozen or v in ctx.delta:
        return False
    fr = [l.rep for l in frozen]
    if ctx.m and _in_rational_span(v.rep, fr):
        return False
    if any(omega(x, v.rep) for x in fr):
        return False
    if ctx.hat:
        gens = fr + [d.rep for d in ctx.delta]
        if _in_rational_span(v.rep, gens):
            return False
        if any(omega(d.rep, v.rep) for d in ctx.delta):
            return False
    if family is not None and family.isotropic_only:
        V = ctx.isotropic_summand or _default_isotropic(g)
        if not _in_span(v.rep, V):
            return False
    return True


def underlying(lines: Iterable[Line], ctx: RelativeContext, genus: int | None = None) -> tuple[Line, ...]:
    lines = tuple(lines)
    g = lines[0].genus if lines else (ctx.delta[0].genus if ctx.delta else genus)
    if g is None:
        return ()
    return tuple(sorted(set(ctx.frozen(g)) | set(ctx.delta) | set(lines)))


def member_of(lines: Iterable[Line | Sequence[int]], family: Family | str, ctx: RelativeContext = ABSOLUTE) -> bool:
    """Whether the set is a simplex of the family, read in the relative context."""
    family = Family.parse(family) if isinstance(family, str) else family
    lines = tuple(sorted({canonical_line(l) for l in lines}))
    if not lines:
        return True
    if not all(vertex_allowed(v, ctx, family) for v in lines):
        return False
    t = classify(underlying(lines, ctx))
    return bool(t) and type_allowed(t, family)


def relative_type(lines: Iterable[Line | Sequence[int]], ctx: RelativeContext = ABSOLUTE) -> SimplexType | _NotASimplex:
    """Type of the underlying simplex of a simplex of a relative complex or link."""
    return classify(underlying(_normalize(lines), ctx))


def is_minimal(lines: Iterable[Line | Sequence[int]], ctx: RelativeContext = ABSOLUTE) -> bool:
    """No proper face has the same relative type."""
    lines = _normalize(lines)
    t = relative_type(lines, ctx)
    if not t:
        raise NotASimplexError(f"{list(lines)} is not a simplex")
    for k in range(len(lines)):
        for face in itertools.combinations(lines, k):
            base = underlying(face, ctx, lines[0].genus)
            if not base:
                continue
            ft = classify(base)
            if ft and ft.tag == t.tag:
                return False
    return True


def locate(lines: Iterable[Line], ctx: RelativeContext) -> str:
    """'internal', 'external' or 'delta_related' for a simplex of a relative link."""
    lines = tuple(sorted({canonical_line(l) for l in lines}))
    base = underlying(lines, ctx)
    t = classify(base)
    if not t:
        raise NotASimplexError("underlying set is not a simplex")
    core, _ = augmentation_core(base)
    core = set(core)
    if core & set(ctx.delta):
        return "delta_related"
    if core & set(ctx.frozen(lines[0].genus)):
        return "external"
    return "internal"


# ------------------------------------------------------- rank and reduction


def rank(v: Line, m_plus_n: int) -> int:
    """|omega(e_N, v)|, the absolute f_N-coordinate, with N = m + n."""
    if v.genus != m_plus_n:
        raise GenusMismatch(f"line of genus {v.genus} in genus {m_plus_n}")
    return abs(v.rep[2 * m_plus_n - 1])


def nonnegative_rep(v: Line) -> Vector:
    """The representative whose f_N-coordinate is nonnegative."""
    return v.rep if v.rep[-1] >= 0 else tuple(-x for x in v.rep)


def rho_reduce(v: Line, s: Line, R: int) -> Line:
    """Replace v by <v - a*s> with a = floor(rk(v)/R) so the rank drops below R."""
    N = v.genus
    if R <= 0 or rank(s, N) != R:
        raise PreconditionError(f"rank(s) = {rank(s, N)} but R = {R}")
    vb, sb = nonnegative_rep(v), nonnegative_rep(s)
    a = vb[-1] // R
    if a == 0:
        return v
    w = tuple(x - a * y for x, y in zip(vb, sb))
    if not any(w):
        raise PreconditionError("v equals s")
    return canonical_line(w)


def carrying_from_ranks(r0: int, r1: int, r2: int, R: int) -> bool:
    if R <= 0:
        raise PreconditionError("R must be positive")
    return r0 // R != r1 // R + r2 // R


def is_carrying(core: Sequence[Line], s: Line, R: int) -> bool:
    """Carrying test for a 2-additive triple, using rank >= 0 representatives."""
    if len(core) != 3:
        raise PreconditionError("a carrying core has three lines")
    N = s.genus
    if R <= 0 or rank(s, N) != R:
        raise PreconditionError(f"rank(s) = {rank(s, N)} but R = {R}")
    reps = [nonnegative_rep(l) for l in core]
    for i in range(3):
        j, k = [x for x in range(3) if x != i]
        # rank-0 representatives carry no sign constraint
        for sj in ((1, -1) if reps[j][-1] == 0 else (1,)):
            for sk in ((1, -1) if reps[k][-1] == 0 else (1,)):
                if reps[i] == tuple(sj * a + sk * b for a, b in zip(reps[j], reps[k])):
                    return carrying_from_ranks(reps[i][-1], reps[j][-1], reps[k][-1], R)
    raise PreconditionError("no vertex is the sum of the other two")
