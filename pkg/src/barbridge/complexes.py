"""Filtered simplicial complexes: clique, witness, intersection and cross complexes."""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

import numpy as np

from .chains import Simplex, facets
from .errors import InputError


@dataclass(frozen=True)
class ParameterScale:
    """Strictly increasing parameter values; grade ``l`` (1-based) has value ``values[l-1]``."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise InputError("a scale needs at least one value")
        if any(not math.isfinite(v) for v in vals):
            raise InputError("scale values must be finite")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise InputError("scale values must be strictly increasing")
        object.__setattr__(self, "values", vals)

    @property
    def N(self) -> int:
        return len(self.values)

    def value(self, grade: int) -> float:
        """Value at ``grade``; ``N + 1`` is infinity."""
        if grade == self.N + 1:
            return math.inf
        if not 1 <= grade <= self.N:
            raise InputError(f"grade {grade} outside 1..{self.N + 1}")
        return self.values[grade - 1]

    def grade_of(self, value: float) -> int:
        """Exact grade of a value present on the scale."""
        i = bisect_left(self.values, value)
        if i == self.N or self.values[i] != value:
            raise InputError(f"value {value!r} is not on the scale")
        return i + 1

    def grade_at(self, value: float) -> int:
        """Largest grade whose value is <= ``value`` (0 if none)."""
        return bisect_right(self.values, value)

    def check_grade(self, grade: int) -> int:
        if not isinstance(grade, (int, np.integer)) or not 1 <= grade <= self.N:
            raise InputError(f"grade {grade!r} outside 1..{self.N}")
        return int(grade)


class GradedComplex:
    """A simplicial filtration indexed by grades of a ``ParameterScale``.

    Simplices are stored per dimension in filtration order: grade first,
    then lexicographic vertex order.
    """

    def __init__(
        self,
        scale: ParameterScale,
        grades: Mapping[Simplex, int],
        max_dim: int,
        n_vertices: int | None = None,
        check: bool = True,
    ) -> None:
        if max_dim < 0:
            raise InputError("max_dim must be non-negative")
        self.scale = scale
        self.max_dim = int(max_dim)
        self._grade: dict[Simplex, int] = {}
        by_dim: list[list[tuple[Simplex, int]]] = [[] for _ in range(self.max_dim + 1)]
        for s, g in grades.items():
            s = tuple(int(v) for v in s)
            d = len(s) - 1
            if d < 0 or d > self.max_dim:
                continue
            g = int(g)
            if not 1 <= g <= scale.N:
                raise InputError(f"grade {g} of {s} outside 1..{scale.N}")
            self._grade[s] = g
            by_dim[d].append((s, g))
        for lst in by_dim:
            lst.sort(key=lambda t: (t[1], t[0]))
        self._by_dim = tuple(tuple(lst) for lst in by_dim)
        top = max((v for s in self._grade for v in s), default=-1) + 1
        self.n_vertices = top if n_vertices is None else int(n_vertices)
        if self.n_vertices < top:
            raise InputError("vertex id exceeds the vertex universe")
        if check:
            self._check_closure()

    def _check_closure(self) -> None:
        for s, g in self._grade.items():
            if any(v2 <= v1 for v1, v2 in zip(s, s[1:])):
                raise InputError(f"simplex {s} is not strictly increasing")
            if len(s) == 1:
                continue
            for _, f in facets(s):
                fg = self._grade.get(f)
                if fg is None or fg > g:
                    raise InputError(f"face {f} of {s} missing or entering later")

    def __len__(self) -> int:
        return len(self._grade)

    def __contains__(self, s: object) -> bool:
        return s in self._grade

    def __repr__(self) -> str:
        counts = [len(x) for x in self._by_dim]
        return f"GradedComplex(N={self.scale.N}, counts={counts})"

    def grade(self, s: Simplex) -> int:
        try:
            return self._grade[s]
        except KeyError:
            raise InputError(f"simplex {s} not in complex") from None

    def value(self, s: Simplex) -> float:
        return self.scale.value(self.grade(s))

    def simplices(self, dim: int) -> tuple[tuple[Simplex, int], ...]:
        """``(simplex, grade)`` pairs of one dimension in filtration order."""
        if dim < 0 or dim > self.max_dim:
            return ()
        return self._by_dim[dim]

    def at(self, grade: int) -> set[Simplex]:
        return {s for s, g in self._grade.items() if g <= grade}

    def grades(self) -> dict[Simplex, int]:
        return dict(self._grade)

    def is_complete(self) -> bool:
        """True when every vertex subset up to ``max_dim`` is present."""
        n = self.n_vertices
        return len(self) == sum(math.comb(n, d + 1) for d in range(self.max_dim + 1))


def _check_matrix(M: np.ndarray, square: bool) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.size == 0:
        raise InputError("expected a non-empty 2-d matrix")
    if not np.all(np.isfinite(M)):
        raise InputError("matrix entries must be finite")
    if np.any(M < 0):
        raise InputError("matrix entries must be non-negative")
    if square:
        if M.shape[0] != M.shape[1]:
            raise InputError(f"dissimilarity matrix must be square, got {M.shape}")
        if not np.array_equal(M, M.T):
            raise InputError("dissimilarity matrix must be symmetric")
        if np.any(np.diag(M) != 0):
            raise InputError("dissimilarity matrix must have a zero diagonal")
    return M


def _grades_of(scale: ParameterScale, values: np.ndarray) -> np.ndarray:
    return np.searchsorted(np.asarray(scale.values), values) + 1


def clique_complex(M, max_dim: int) -> GradedComplex:
    """Clique filtration: a simplex enters at the largest pairwise dissimilarity.

    Vertices enter at grade 1; the scale is the sorted distinct off-diagonal values.
    """
    M = _check_matrix(M, square=True)
    n = M.shape[0]
    iu = np.triu_indices(n, 1)
    off = np.unique(M[iu])
    scale = ParameterScale(tuple(off) if off.size else (0.0,))
    grades: dict[Simplex, int] = {(v,): 1 for v in range(n)}
    for d in range(1, max_dim + 1):
        combos = np.array(list(combinations(range(n), d + 1)), dtype=np.intp)
        if combos.size == 0:
            break
        vals = np.zeros(len(combos))
        for a, b in combinations(range(d + 1), 2):
            np.maximum(vals, M[combos[:, a], combos[:, b]], out=vals)
        for s, g in zip(map(tuple, combos.tolist()), _grades_of(scale, vals).tolist()):
            grades[s] = g
    return GradedComplex(scale, grades, max_dim, n_vertices=n, check=False)


def witness_values(B: np.ndarray, simplices: np.ndarray) -> np.ndarray:
    """``min_c max_{r in s} B[r, c]`` for each row of ``simplices``."""
    return B[simplices].max(axis=1).min(axis=1)


def witness_complex(B, max_dim: int) -> GradedComplex:
    """Witness (Dowker) filtration on the rows of ``B``, witnessed by its columns.

    The scale is the sorted distinct entries of ``B``.
    """
    B = _check_matrix(B, square=False)
    n = B.shape[0]
    scale = ParameterScale(tuple(np.unique(B)))
    grades: dict[Simplex, int] = {}
    for d in range(0, max_dim + 1):
        combos = np.array(list(combinations(range(n), d + 1)), dtype=np.intp)
        if combos.size == 0:
            break
        vals = witness_values(B, combos)
        for s, g in zip(map(tuple, combos.tolist()), _grades_of(scale, vals).tolist()):
            grades[s] = g
    return GradedComplex(scale, grades, max_dim, n_vertices=n, check=False)


def jitter_ties(M, symmetric: bool | None = None) -> np.ndarray:
    """Break ties deterministically by adding ``i * eps`` by flattened index.

    Symmetric matrices are perturbed through their upper triangle so they
    stay symmetric, and the diagonal is left at zero.
    """
    M = np.asarray(M, dtype=float)
    if symmetric is None:
        symmetric = M.ndim == 2 and M.shape[0] == M.shape[1] and np.array_equal(M, M.T)
    step = np.finfo(float).eps * max(1.0, float(np.abs(M).max(initial=0.0)))
    if symmetric:
        n = M.shape[0]
        out = M.copy()
        iu = np.triu_indices(n, 1)
        out[iu] += step * np.arange(1, len(iu[0]) + 1)
        out.T[iu] = out[iu]
        return out
    return M + step * np.arange(M.size).reshape(M.shape)


def intersection_filtration(Z: GradedComplex, psi: int, Y: GradedComplex) -> GradedComplex:
    """Simplices of ``Z`` at grade ``psi`` that lie in ``Y``, graded by ``Y``."""
    if Z.n_vertices != Y.n_vertices:
        raise InputError(f"vertex universes differ ({Z.n_vertices} vs {Y.n_vertices})")
    Z.scale.check_grade(psi)
    max_dim = min(Z.max_dim, Y.max_dim)
    grades = {s: Y.grade(s) for s in Z.at(psi) if len(s) - 1 <= max_dim and s in Y}
    return GradedComplex(Y.scale, grades, max_dim, n_vertices=Y.n_vertices, check=False)


@dataclass(frozen=True)
class CrossComplex:
    """Complex on landmarks ``0..n-1`` and witnesses ``n..n+m-1`` at one parameter."""

    complex: GradedComplex
    n_landmarks: int
    n_witnesses: int

    def side(self, v: int) -> str:
        return "landmark" if v < self.n_landmarks else "witness"

    @property
    def tags(self) -> tuple[str, ...]:
        return tuple(self.side(v) for v in range(self.n_landmarks + self.n_witnesses))

    def pure(self, side: str) -> set[Simplex]:
        return {s for s in self.complex.at(1) if all(self.side(v) == side for v in s)}


def cross_complex_at(B, eps: float, max_dim: int) -> CrossComplex:
    """All ``s_P + s_Q`` with every landmark-witness pair related at ``eps``, plus faces."""
    B = _check_matrix(B, square=False)
    if eps < 0:
        raise InputError("eps must be non-negative")
    n, m = B.shape
    rel = B <= eps
    found: dict[Simplex, int] = {}

    def landmark_sets(size: int) -> Iterable[tuple[tuple[int, ...], np.ndarray]]:
        for sp in combinations(range(n), size):
            common = np.flatnonzero(rel[list(sp)].all(axis=0))
            if common.size:
                yield sp, common

    for a in range(1, max_dim + 2):
        for sp, common in landmark_sets(a):
            found[sp] = 1
            for b in range(1, max_dim + 2 - a):
                for sq in combinations(common.tolist(), b):
                    found[sp + tuple(n + q for q in sq)] = 1
    for b in range(1, max_dim + 2):
        for sq in combinations(range(m), b):
            if rel[:, list(sq)].all(axis=1).any():
                found[tuple(n + q for q in sq)] = 1
    cx = GradedComplex(ParameterScale((float(eps),)), found, max_dim, n_vertices=n + m, check=False)
    return CrossComplex(cx, n, m)
