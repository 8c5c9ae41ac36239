"""Reduced persistent homology with an explicit interval decomposition.

The decomposition is the one the reduction induces: a finite bar is
represented by the reduced boundary column that kills it, an infinite bar
by the basis column of its creator. Both are cycles born exactly at the
bar's birth grade, which is what makes the per-grade queries below a
triangular solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .chains import Chain, Simplex, facets
from .complexes import GradedComplex
from .errors import InputError
from .linalg import GF2, FieldSpec, SparseMatrix, reduce_columns


@dataclass(frozen=True, order=True)
class Bar:
    """Half-open grade interval ``[birth, death)``; ``death == N + 1`` is infinite."""

    birth: int
    death: int
    id: int
    dim: int

    def __post_init__(self) -> None:
        if not self.birth < self.death:
            raise InputError(f"bar needs birth < death, got [{self.birth}, {self.death})")

    def alive(self, grade: int) -> bool:
        return self.birth <= grade < self.death

    def __str__(self) -> str:
        return f"#{self.id}[{self.birth},{self.death})"


@dataclass(frozen=True)
class BarRepresentation:
    """A class written as nonzero coefficients on bars alive at ``at``."""

    at: int
    terms: tuple[tuple[int, int], ...]  # (coefficient, bar id), sorted by bar id

    @classmethod
    def from_coefficients(cls, at: int, coeffs: Mapping[int, int], p: int) -> "BarRepresentation":
        return cls(at, tuple((c % p, b) for b, c in sorted(coeffs.items()) if c % p))

    def coefficients(self) -> dict[int, int]:
        return {b: c for c, b in self.terms}

    def bar_ids(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)


def _order(items: tuple[tuple[Simplex, int], ...], rng: np.random.Generator | None) -> list[Simplex]:
    if rng is None:
        return [s for s, _ in items]
    keys = rng.random(len(items))
    return [s for _, _, s in sorted((g, keys[i], s) for i, (s, g) in enumerate(items))]


class PersistenceResult:
    """Barcode in one degree with representatives and reduction data.

    Build with :func:`compute_persistence`.
    """

    def __init__(self, complex: GradedComplex, k: int, field: FieldSpec, tie_seed: int | None = None) -> None:
        if k < 0:
            raise InputError("homology degree must be non-negative")
        if complex.max_dim < k + 1:
            raise InputError(f"complex capped at dimension {complex.max_dim}; degree {k} needs {k + 1}")
        self.complex = complex
        self.k = k
        self.field = field
        self._ops = field.ops()
        rng = None if tie_seed is None else np.random.default_rng(tie_seed)
        ops, p = self._ops, field.p

        self._rows = [()] if k == 0 else _order(complex.simplices(k - 1), rng)
        self._cells = _order(complex.simplices(k), rng)
        self._cofaces = _order(complex.simplices(k + 1), rng)
        row_ix = {s: i for i, s in enumerate(self._rows)}
        self._index = {s: i for i, s in enumerate(self._cells)}
        self._cell_grade = [complex.grade(s) for s in self._cells]
        self._coface_grade = [complex.grade(s) for s in self._cofaces]

        def column(s: Simplex, ix: Mapping[Simplex, int]) -> dict[int, int]:
            return {ix[f]: sign % p for sign, f in facets(s)}

        self._D0 = [ops.from_dict(column(s, row_ix)) for s in self._cells]
        self._D1 = [ops.from_dict(column(s, self._index)) for s in self._cofaces]
        self._R0, self._V0, _ = reduce_columns(self._D0, ops)
        self._R1, self._V1, pivots = reduce_columns(self._D1, ops)

        N = complex.scale.N
        raw: list[tuple[int, int, int, object]] = []
        for j in range(len(self._cells)):
            if self._R0[j]:
                continue
            i = pivots.get(j)
            birth = self._cell_grade[j]
            if i is None:
                raw.append((birth, N + 1, j, self._V0[j]))
            elif self._coface_grade[i] > birth:
                raw.append((birth, self._coface_grade[i], j, self._R1[i]))
        raw.sort(key=lambda t: (t[0], t[1], t[2]))
        self.barcode: tuple[Bar, ...] = tuple(Bar(b, d, n, k) for n, (b, d, _, _) in enumerate(raw))
        self._reps = [vec for *_, vec in raw]
        self._tables: dict[int, dict[int, tuple[object, dict[int, int]]]] = {}

    # basic accessors

    @property
    def N(self) -> int:
        return self.complex.scale.N

    def __repr__(self) -> str:
        return f"PersistenceResult(k={self.k}, GF({self.field.p}), bars={[str(b) for b in self.barcode]})"

    def bar(self, bar: Bar | int) -> Bar:
        bid = bar.id if isinstance(bar, Bar) else int(bar)
        if not 0 <= bid < len(self.barcode):
            raise InputError(f"unknown bar id {bid}")
        found = self.barcode[bid]
        if isinstance(bar, Bar) and (bar.birth, bar.death) != (found.birth, found.death):
            raise InputError(f"bar {bar} does not belong to this barcode")
        return found

    def bar_values(self, bar: Bar | int) -> tuple[float, float]:
        b = self.bar(bar)
        return self.complex.scale.value(b.birth), self.complex.scale.value(b.death)

    def representative(self, bar: Bar | int) -> Chain:
        return self._to_chain(self._reps[self.bar(bar).id])

    def bars_alive_at(self, grade: int) -> tuple[Bar, ...]:
        grade = self.complex.scale.check_grade(grade)
        return tuple(b for b in self.barcode if b.alive(grade))

    def betti(self, grade: int) -> int:
        return len(self.bars_alive_at(grade))

    def reduction(self) -> dict[str, SparseMatrix]:
        """Boundary matrices in degrees k and k+1 with their ``R`` and ``V``."""
        ops = self._ops

        def mat(cols, rows: int) -> SparseMatrix:
            return SparseMatrix(rows, len(cols), tuple(ops.to_dict(c) for c in cols))

        nr, nc, nf = len(self._rows), len(self._cells), len(self._cofaces)
        return {
            "D_k": mat(self._D0, nr), "R_k": mat(self._R0, nr), "V_k": mat(self._V0, nc),
            "D_k1": mat(self._D1, nc), "R_k1": mat(self._R1, nc), "V_k1": mat(self._V1, nf),
        }

    def cells(self) -> tuple[Simplex, ...]:
        """Degree-k simplices in the column order used by the reduction."""
        return tuple(self._cells)

    # chain conversion

    def _to_chain(self, vec) -> Chain:
        return Chain({self._cells[i]: c for i, c in self._ops.to_dict(vec).items()}, self.field.p)

    def _to_vec(self, z: Chain, grade: int | None = None):
        if not isinstance(z, Chain):
            raise InputError("expected a Chain")
        if z.p != self.field.p:
            raise InputError(f"chain over GF({z.p}) used with GF({self.field.p})")
        out = {}
        for s, c in z.items():
            i = self._index.get(s)
            if i is None:
                raise InputError(f"simplex {s} is not a {self.k}-simplex of the complex")
            if grade is not None and self._cell_grade[i] > grade:
                raise InputError(f"simplex {s} enters at grade {self._cell_grade[i]} > {grade}")
            out[i] = c
        return self._ops.from_dict(out)

    # per-grade solves

    def _table(self, grade: int):
        table = self._tables.get(grade)
        if table is not None:
            return table
        ops, p = self._ops, self.field.p
        table = {}
        for i, col in enumerate(self._R1):
            if col and self._coface_grade[i] <= grade:
                table[ops.low(col)] = (col, {})
        for bar in self.barcode:
            if not bar.alive(grade):
                continue
            vec, combo = self._reps[bar.id], {bar.id: 1}
            while vec:
                low = ops.low(vec)
                hit = table.get(low)
                if hit is None:
                    table[low] = (vec, combo)
                    break
                c = (-ops.coeff(vec, low) * pow(ops.coeff(hit[0], low), -1, p)) % p
                vec = ops.axpy(vec, c, hit[0])
                combo = _combine(combo, c, hit[1], p)
            else:
                raise InputError(f"representatives alive at grade {grade} are dependent")
        self._tables[grade] = table
        return table

    def _coordinates(self, vec, grade: int) -> dict[int, int] | None:
        ops, p = self._ops, self.field.p
        table = self._table(grade)
        coeffs: dict[int, int] = {}
        while vec:
            low = ops.low(vec)
            hit = table.get(low)
            if hit is None:
                return None
            c = (ops.coeff(vec, low) * pow(ops.coeff(hit[0], low), -1, p)) % p
            vec = ops.axpy(vec, -c, hit[0])
            coeffs = _combine(coeffs, c, hit[1], p)
        return coeffs

    def bar_representation(self, z: Chain, grade: int) -> BarRepresentation:
        """Coefficients of ``[z]`` on the bars alive at ``grade``; empty iff ``z`` bounds."""
        grade = self.complex.scale.check_grade(grade)
        vec = self._to_vec(z, grade)
        if not z.is_cycle():
            raise InputError("chain is not a cycle")
        coeffs = self._coordinates(vec, grade)
        if coeffs is None:
            raise InputError("cycle is not spanned at this grade")
        return BarRepresentation.from_coefficients(grade, coeffs, self.field.p)

    def is_boundary(self, z: Chain, grade: int) -> bool:
        return not self.bar_representation(z, grade)

    def class_birth_death(self, rep: BarRepresentation) -> tuple[int, int]:
        """Birth and death grades of a nonzero class: the max over its bars."""
        if not rep:
            raise InputError("the zero class has no birth or death")
        bars = [self.bar(b) for b in rep.bar_ids()]
        return max(b.birth for b in bars), max(b.death for b in bars)

    def terminal_class(self, bar: Bar | int) -> tuple[int, Chain]:
        """Last grade the bar is alive and its representative there."""
        b = self.bar(bar)
        return min(b.death - 1, self.N), self.representative(b)

    def with_representatives(self, reps: Mapping[int, Chain]) -> "PersistenceResult":
        """Same barcode with some representatives replaced (a change of decomposition)."""
        clone = object.__new__(PersistenceResult)
        clone.__dict__.update(self.__dict__)
        clone._reps = list(self._reps)
        for bid, chain in reps.items():
            b = self.bar(bid)
            clone._reps[b.id] = self._to_vec(chain, b.birth)
        clone._tables = {}
        return clone


def _combine(a: dict[int, int], c: int, b: dict[int, int], p: int) -> dict[int, int]:
    """``a + c*b`` on coefficient dicts."""
    if not c or not b:
        return a
    out = dict(a)
    for k, v in b.items():
        x = (out.get(k, 0) + c * v) % p
        if x:
            out[k] = x
        else:
            out.pop(k, None)
    return out


def compute_persistence(
    X: GradedComplex, k: int, field: FieldSpec = GF2, tie_seed: int | None = None
) -> PersistenceResult:
    """Reduced persistent homology of ``X`` in degree ``k``.

    ``tie_seed`` shuffles the order of equal-grade simplices, which must not
    change the barcode.
    """
    return PersistenceResult(X, k, field, tie_seed)


def bars_by_rank(result: PersistenceResult) -> list[Bar]:
    """Bars sorted by value length (longest first), then birth."""
    scale = result.complex.scale

    def key(b: Bar):
        return (-(scale.value(b.death) - scale.value(b.birth)), b.birth, b.id)

    return sorted(result.barcode, key=key)


def chain_from_terms(terms: Iterable[tuple[Iterable[int], int]], p: int = 2) -> Chain:
    return Chain({tuple(sorted(s)): c for s, c in terms}, p)
