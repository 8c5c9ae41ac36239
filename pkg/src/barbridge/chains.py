"""Simplices and finite-field chains."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .errors import InputError

Simplex = tuple[int, ...]


def simplex(vertices: Iterable[int]) -> Simplex:
    """Validate and sort a vertex collection into a simplex."""
    s = tuple(sorted(int(v) for v in vertices))
    if not s:
        raise InputError("a simplex needs at least one vertex")
    if any(v < 0 for v in s) or len(set(s)) != len(s):
        raise InputError(f"invalid simplex {s}")
    return s


def facets(s: Simplex) -> Iterator[tuple[int, Simplex]]:
    """Yield ``(sign, facet)`` pairs; a vertex's facet is the empty simplex."""
    for i in range(len(s)):
        yield (-1 if i % 2 else 1), s[:i] + s[i + 1 :]


def faces(s: Simplex, max_dim: int | None = None) -> Iterator[Simplex]:
    top = len(s) if max_dim is None else min(len(s), max_dim + 1)
    for size in range(1, top + 1):
        yield from combinations(s, size)


class Chain(Mapping[Simplex, int]):
    """Immutable formal sum of simplices with GF(p) coefficients."""

    __slots__ = ("_terms", "p", "_hash")

    def __init__(self, terms: Mapping[Simplex, int] | Iterable[Simplex] = (), p: int = 2) -> None:
        items = terms.items() if isinstance(terms, Mapping) else ((s, 1) for s in terms)
        acc: dict[Simplex, int] = {}
        for s, c in items:
            s = tuple(s)
            acc[s] = (acc.get(s, 0) + int(c)) % p
        self._terms = {s: c for s, c in sorted(acc.items()) if c}
        self.p = p
        self._hash = None

    def __getitem__(self, s: Simplex) -> int:
        return self._terms[s]

    def __iter__(self) -> Iterator[Simplex]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Chain):
            return self.p == other.p and self._terms == other._terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*{list(s)}" for s, c in self._terms.items())
        return f"Chain({body or '0'}; GF({self.p}))"

    def _check(self, other: "Chain") -> None:
        if other.p != self.p:
            raise InputError("chains over different fields")

    def __add__(self, other: "Chain") -> "Chain":
        self._check(other)
        out = dict(self._terms)
        for s, c in other._terms.items():
            out[s] = out.get(s, 0) + c
        return Chain(out, self.p)

    def __neg__(self) -> "Chain":
        return Chain({s: -c for s, c in self._terms.items()}, self.p)

    def __sub__(self, other: "Chain") -> "Chain":
        return self + (-other)

    def __mul__(self, c: int) -> "Chain":
        return Chain({s: c * x for s, x in self._terms.items()}, self.p)

    __rmul__ = __mul__

    @property
    def dim(self) -> int | None:
        dims = {len(s) - 1 for s in self._terms}
        if len(dims) > 1:
            raise InputError("chain mixes dimensions")
        return dims.pop() if dims else None

    def boundary(self) -> "Chain":
        """Signed boundary; vertices map to the empty simplex (augmentation)."""
        out: dict[Simplex, int] = {}
        for s, c in self._terms.items():
            for sign, f in facets(s):
                out[f] = out.get(f, 0) + sign * c
        return Chain(out, self.p)

    def is_cycle(self) -> bool:
        return not self.boundary()

    def vertices(self) -> set[int]:
        return {v for s in self._terms for v in s}

    def shift(self, offset: int) -> "Chain":
        return Chain({tuple(v + offset for v in s): c for s, c in self._terms.items()}, self.p)

    def to_list(self) -> list[tuple[list[int], int]]:
        return [(list(s), c) for s, c in self._terms.items()]
