"""Changes of interval decomposition at a fixed grade.

A change is an invertible matrix on the bars alive at a grade whose
off-diagonal support is limited to pairs ``(r, c)`` with
``birth_r <= birth_c < death_r <= death_c``. Bars are kept in the order
given; callers that pass them sorted by ``(birth, death)`` ascending get
upper-triangular matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Mapping, Sequence

import numpy as np

from .chains import Chain
from .errors import AssumptionViolation, InputError
from .linalg import GF2, FieldSpec
from .persistence import Bar, BarRepresentation, PersistenceResult

DEFAULT_CAP = 1 << 16


def may_map(r: Bar, c: Bar) -> bool:
    """Whether bar ``c`` may pick up a component along bar ``r``."""
    return r.birth <= c.birth < r.death <= c.death


@dataclass(frozen=True)
class AdmissiblePattern:
    bars: tuple[Bar, ...]
    allowed: frozenset[tuple[int, int]]

    @property
    def m(self) -> int:
        return len(self.bars)

    def position(self, bar: Bar | int) -> int:
        bid = bar.id if isinstance(bar, Bar) else bar
        for i, b in enumerate(self.bars):
            if b.id == bid:
                return i
        raise InputError(f"bar {bid} is not part of the pattern")


def admissible_pattern(bars: Sequence[Bar]) -> AdmissiblePattern:
    bars = tuple(bars)
    seen: dict[tuple[int, int], Bar] = {}
    for b in bars:
        key = (b.birth, b.death)
        if key in seen:
            raise AssumptionViolation(f"bars {seen[key]} and {b} share the interval [{b.birth},{b.death})")
        seen[key] = b
    allowed = frozenset(
        (r, c) for r in range(len(bars)) for c in range(len(bars)) if r != c and may_map(bars[r], bars[c])
    )
    return AdmissiblePattern(bars, allowed)


def pattern_at(result: PersistenceResult, grade: int) -> AdmissiblePattern:
    """Pattern on the bars alive at ``grade``, sorted by (birth, death)."""
    return admissible_pattern(sorted(result.bars_alive_at(grade), key=lambda b: (b.birth, b.death, b.id)))


@dataclass(frozen=True)
class ChangeMatrix:
    pattern: AdmissiblePattern
    entries: tuple[tuple[tuple[int, int], int], ...]  # ((row, col), value), nonzero only
    p: int = 2

    def __post_init__(self) -> None:
        m = self.pattern.m
        ent = dict(self.entries)
        for (r, c), v in ent.items():
            if v % self.p == 0:
                raise InputError("stored zero entry")
            if r != c and (r, c) not in self.pattern.allowed:
                raise InputError(f"entry ({r}, {c}) outside the admissible pattern")
        if any(ent.get((i, i), 0) % self.p == 0 for i in range(m)):
            raise InputError("diagonal entries must be nonzero")

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.entries)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.pattern.m, self.pattern.m), dtype=np.int64)
        for (r, c), v in self.entries:
            out[r, c] = v
        return out

    def apply(self, vec: Mapping[int, int]) -> dict[int, int]:
        """``L @ vec`` with ``vec`` keyed by pattern position."""
        out: dict[int, int] = {}
        for (r, c), v in self.entries:
            x = vec.get(c, 0)
            if x:
                out[r] = (out.get(r, 0) + v * x) % self.p
        return {r: x for r, x in out.items() if x}


class ChangeStream:
    """Lazy enumeration of every change matrix of a pattern, up to ``cap``."""

    def __init__(self, pattern: AdmissiblePattern, field: FieldSpec = GF2, cap: int = DEFAULT_CAP) -> None:
        if cap < 1:
            raise InputError("cap must be at least 1")
        self.pattern = pattern
        self.field = field
        self.cap = cap
        self.positions = sorted(pattern.allowed)
        self.count = (field.p - 1) ** pattern.m * field.p ** len(self.positions)
        self.truncated = self.count > cap

    def __len__(self) -> int:
        return min(self.count, self.cap)

    def __iter__(self) -> Iterator[ChangeMatrix]:
        m, p = self.pattern.m, self.field.p
        emitted = 0
        for diag in product(self.field.units(), repeat=m):
            for off in product(self.field.elements(), repeat=len(self.positions)):
                if emitted >= self.cap:
                    return
                entries = [((i, i), d) for i, d in enumerate(diag)]
                entries += [(pos, v) for pos, v in zip(self.positions, off) if v]
                emitted += 1
                yield ChangeMatrix(self.pattern, tuple(sorted(entries)), p)


def enumerate_changes(pattern: AdmissiblePattern, field: FieldSpec = GF2, cap: int = DEFAULT_CAP) -> ChangeStream:
    return ChangeStream(pattern, field, cap)


def random_change(pattern: AdmissiblePattern, field: FieldSpec, rng: np.random.Generator) -> ChangeMatrix:
    p = field.p
    entries = [((i, i), int(rng.integers(1, p))) for i in range(pattern.m)]
    for pos in sorted(pattern.allowed):
        v = int(rng.integers(0, p))
        if v:
            entries.append((pos, v))
    return ChangeMatrix(pattern, tuple(sorted(entries)), p)


def redecompose(result: PersistenceResult, change: ChangeMatrix) -> PersistenceResult:
    """Apply a change built on the whole barcode: new rep of ``c`` is ``sum_r L[r,c] rep_r``."""
    bars = change.pattern.bars
    if sorted(b.id for b in bars) != [b.id for b in result.barcode]:
        raise InputError("change must cover the whole barcode")
    reps = [result.representative(b) for b in bars]
    p = result.field.p
    new: dict[int, Chain] = {}
    for c, bar in enumerate(bars):
        acc = Chain((), p)
        for (r, cc), v in change.entries:
            if cc == c:
                acc = acc + v * reps[r]
        new[bar.id] = acc
    return result.with_representatives(new)


def alternate_terminal_classes(
    result: PersistenceResult, bar: Bar | int, psi: int | None = None
) -> Iterator[Chain]:
    """Terminal classes of ``bar`` under every admissible change, one chain per class.

    Only the column of the bar matters for ``L e_bar``, so the column's
    free entries are enumerated directly rather than whole matrices.
    """
    b = result.bar(bar)
    if psi is None:
        psi, _ = result.terminal_class(b)
    elif not b.alive(psi):
        raise InputError(f"bar {b} is not alive at grade {psi}")
    pattern = pattern_at(result, psi)
    col = pattern.position(b)
    rows = sorted(r for r, c in pattern.allowed if c == col)
    reps = [result.representative(x) for x in pattern.bars]
    field = result.field
    seen: set[tuple[tuple[int, int], ...]] = set()
    for d in field.units():
        for vals in product(field.elements(), repeat=len(rows)):
            chain = d * reps[col]
            for r, v in zip(rows, vals):
                if v:
                    chain = chain + v * reps[r]
            key = result.bar_representation(chain, psi).terms
            if key not in seen:
                seen.add(key)
                yield chain


def alternate_bar_representations(
    rep: BarRepresentation, pattern: AdmissiblePattern, field: FieldSpec = GF2, cap: int = DEFAULT_CAP
) -> Iterator[BarRepresentation]:
    """``L`` applied to the coefficient vector of ``rep``, for each enumerated ``L``."""
    vec = {pattern.position(b): c for c, b in rep.terms}
    for L in enumerate_changes(pattern, field, cap):
        out = L.apply(vec)
        yield BarRepresentation.from_coefficients(rep.at, {pattern.bars[i].id: c for i, c in out.items()}, field.p)
