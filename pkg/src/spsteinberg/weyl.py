"""Signed permutations (the type C Weyl group) and their sign character."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import HypothesisViolation

BFS_LIMIT = 3


@dataclass(frozen=True)
class SignedPermutation:
    """images[i-1] is the signed image of i; a negative value is a barred label."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(abs(x) for x in self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"{self.images} is not a signed permutation")

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, a: int) -> int:
        """Image of a signed label; bar commutes with the map."""
        x = self.images[abs(a) - 1]
        return x if a > 0 else -x

    def __mul__(self, other: "SignedPermutation") -> "SignedPermutation":
        """Composition: (self * other)(a) = self(other(a))."""
        return SignedPermutation(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> "SignedPermutation":
        out = [0] * self.n
        for i, x in enumerate(self.images, start=1):
            out[abs(x) - 1] = i if x > 0 else -i
        return SignedPermutation(tuple(out))

    @classmethod
    def identity(cls, n: int) -> "SignedPermutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def simple(cls, i: int, n: int) -> "SignedPermutation":
        """s_i swaps i and i+1 for i < n; s_n swaps n and its bar."""
        img = list(range(1, n + 1))
        if i < n:
            img[i - 1], img[i] = img[i], img[i - 1]
        elif i == n:
            img[n - 1] = -n
        else:
            raise ValueError(f"no simple reflection s_{i} in rank {n}")
        return cls(tuple(img))

    @classmethod
    def longest(cls, n: int) -> "SignedPermutation":
        return cls(tuple(-i for i in range(1, n + 1)))

    def __repr__(self) -> str:
        return "(" + " ".join(str(x) if x > 0 else f"{-x}'" for x in self.images) + ")"


def generators(n: int) -> list[SignedPermutation]:
    return [SignedPermutation.simple(i, n) for i in range(1, n + 1)]


def all_elements(n: int) -> list[SignedPermutation]:
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            out.append(SignedPermutation(tuple(s * p for s, p in zip(signs, perm))))
    return out


def _perm_sign(values: list[int]) -> int:
    sign = 1
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if values[i] > values[j]:
                sign = -sign
    return sign


def sign_character(pi: SignedPermutation) -> int:
    """Sign of the underlying permutation times (-1) per barred image."""
    bars = sum(1 for x in pi.images if x < 0)
    return _perm_sign([abs(x) for x in pi.images]) * (-1) ** bars


@lru_cache(maxsize=None)
def _bfs_lengths(n: int) -> dict[tuple[int, ...], int]:
    start = SignedPermutation.identity(n)
    gens = generators(n)
    dist = {start.images: 0}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        for s in gens:
            q = p * s
            if q.images not in dist:
                dist[q.images] = dist[p.images] + 1
                queue.append(q)
    return dist


def length_bfs(pi: SignedPermutation) -> int:
    """Word length in the simple reflections, by breadth-first search."""
    if pi.n > BFS_LIMIT:
        raise HypothesisViolation(f"breadth-first length only for n <= {BFS_LIMIT}")
    return _bfs_lengths(pi.n)[pi.images]


def relabel_positions(pi: SignedPermutation) -> list[int]:
    """Positions read when relabelling a 2k-tuple (x_1, x_1', ..., x_k, x_k').

    Entry 2(i-1) takes the slot of label pi(i) and entry 2(i-1)+1 the slot
    of its bar.
    """

    def slot(a: int) -> int:
        return 2 * (abs(a) - 1) + (0 if a > 0 else 1)

    out = []
    for i in range(1, pi.n + 1):
        out += [slot(pi(i)), slot(-pi(i))]
    return out
