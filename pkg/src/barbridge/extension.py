"""Persistent extensions of a class from one filtration into another.

Given a nonbounding cycle ``tau`` in ``Z`` at grade ``psi`` and a second
filtration ``Y`` on the same vertices, the auxiliary filtration
``Z^psi ∩ Y^l`` is reduced once. Every class there that maps to ``[tau]``
is a fixed baseline plus a span of "short" representatives, and pushing
those chains into ``Y^l`` gives the cycle extensions. Grades where new
extensions first appear form ``p_Y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

from ._parallel import parallel_map
from .chains import Chain
from .complexes import GradedComplex, intersection_filtration
from .decompositions import DEFAULT_CAP, alternate_terminal_classes, enumerate_changes, pattern_at
from .errors import AssumptionViolation, InputError, TrivialClassError
from .linalg import GF2, FieldSpec
from .persistence import Bar, BarRepresentation, PersistenceResult, compute_persistence

MODES = ("general", "f2_unique_deaths")


def _span(baseline: Chain, offsets: tuple[Chain, ...], cap: int) -> Iterator[Chain]:
    p = baseline.p
    for i, coeffs in enumerate(product(range(p), repeat=len(offsets))):
        if i >= cap:
            return
        z = baseline
        for c, o in zip(coeffs, offsets):
            if c:
                z = z + c * o
        yield z


@dataclass(frozen=True)
class RestrictionSet:
    """Restrictions of ``[tau]`` at one grade: ``baseline + span(offsets)``."""

    at: int
    baseline: Chain
    offsets: tuple[Chain, ...]

    def members(self, cap: int = DEFAULT_CAP) -> Iterator[Chain]:
        return _span(self.baseline, self.offsets, cap)

    def size(self) -> int:
        return self.baseline.p ** len(self.offsets)


@dataclass(frozen=True)
class CycleExtensionSet:
    """The same chains viewed as cycles of ``Y`` at grade ``at``."""

    at: int
    baseline: Chain
    offsets: tuple[Chain, ...]

    def members(self, cap: int = DEFAULT_CAP) -> Iterator[Chain]:
        return _span(self.baseline, self.offsets, cap)

    def size(self) -> int:
        return self.baseline.p ** len(self.offsets)


@dataclass(frozen=True)
class GradeExtension:
    at: int
    restriction: RestrictionSet
    cycles: CycleExtensionSet
    baseline_bars: BarRepresentation | None = None
    offset_bars: tuple[BarRepresentation, ...] = ()


@dataclass(frozen=True)
class ExtensionResult:
    """Output of the cycle extension for one source class."""

    psi: int
    source: Chain
    aux: PersistenceResult
    class_bars: BarRepresentation
    ell0: int
    p_Y: tuple[int, ...]
    grades: tuple[GradeExtension, ...]
    target: PersistenceResult | None = None

    def at(self, grade: int) -> GradeExtension:
        for g in self.grades:
            if g.at == grade:
                return g
        raise InputError(f"grade {grade} is not in p_Y {self.p_Y}")

    def cycle_sets(self) -> tuple[CycleExtensionSet, ...]:
        return tuple(g.cycles for g in self.grades)

    def alternates(
        self, grade: int, cap: int = DEFAULT_CAP
    ) -> Iterator[tuple[BarRepresentation, tuple[BarRepresentation, ...]]]:
        """Baseline and offset bar representations under each change of ``Y``'s decomposition."""
        if self.target is None:
            raise InputError("bar representations were not requested for this extension")
        g = self.at(grade)
        pattern = pattern_at(self.target, grade)
        p = self.target.field.p
        pos = {b.id: i for i, b in enumerate(pattern.bars)}

        def move(L, rep: BarRepresentation) -> BarRepresentation:
            out = L.apply({pos[b]: c for c, b in rep.terms})
            return BarRepresentation.from_coefficients(grade, {pattern.bars[i].id: c for i, c in out.items()}, p)

        for L in enumerate_changes(pattern, self.target.field, cap):
            yield move(L, g.baseline_bars), tuple(move(L, o) for o in g.offset_bars)


def extend_in_aux(
    aux: PersistenceResult, tau: Chain, psi: int, target: PersistenceResult | None = None
) -> ExtensionResult:
    """Extension steps that run on an already reduced auxiliary filtration."""
    N = aux.N
    if not tau.is_cycle():
        raise InputError("source chain is not a cycle")
    S = aux.bar_representation(tau, N)
    if not S:
        raise TrivialClassError("source cycle bounds at psi: trivial class")
    bars = aux.barcode
    ell0 = max(bars[b].birth for b in S.bar_ids())
    p_Y = tuple(sorted({ell0} | {b.birth for b in bars if ell0 < b.birth and b.death <= N}))
    short = [b for b in bars if ell0 < b.death <= N]
    p = aux.field.p
    baseline = Chain((), p)
    for c, b in S.terms:
        baseline = baseline + c * aux.representative(b)

    def at_grade(grade: int) -> GradeExtension:
        offsets = tuple(aux.representative(b) for b in short if b.alive(grade))
        restriction = RestrictionSet(grade, baseline, offsets)
        cycles = CycleExtensionSet(grade, baseline, offsets)
        if target is None:
            return GradeExtension(grade, restriction, cycles)
        return GradeExtension(
            grade,
            restriction,
            cycles,
            target.bar_representation(baseline, grade),
            tuple(target.bar_representation(o, grade) for o in offsets),
        )

    grades = tuple(parallel_map(at_grade, list(p_Y)))
    return ExtensionResult(psi, tau, aux, S, ell0, p_Y, grades, target)


def _check_pair(Z: GradedComplex, Y: GradedComplex, psi: int, k: int) -> None:
    if Z.n_vertices != Y.n_vertices:
        raise InputError(f"vertex universes differ ({Z.n_vertices} vs {Y.n_vertices})")
    for X, name in ((Z, "Z"), (Y, "Y")):
        if X.max_dim < k + 1:
            raise InputError(f"{name} is capped below dimension {k + 1}")
    Z.scale.check_grade(psi)
    top = min(Z.max_dim, Y.max_dim)
    missing = [s for s in Z.at(psi) if len(s) - 1 <= top and s not in Y]
    if missing:
        raise InputError(f"Y's top level must contain Z at psi; missing e.g. {missing[0]}")


def aux_persistence(Z: GradedComplex, Y: GradedComplex, psi: int, k: int, field: FieldSpec = GF2) -> PersistenceResult:
    _check_pair(Z, Y, psi, k)
    return compute_persistence(intersection_filtration(Z, psi, Y), k, field)


def _check_source(Z: GradedComplex, psi: int, tau: Chain, k: int) -> None:
    if not isinstance(tau, Chain) or not tau:
        raise InputError("source must be a nonzero Chain")
    if tau.dim != k:
        raise InputError(f"source chain has dimension {tau.dim}, expected {k}")
    for s in tau:
        if s not in Z or Z.grade(s) > psi:
            raise InputError(f"simplex {s} is not in Z at grade {psi}")


def cycle_to_cycles(
    Z: GradedComplex, Y: GradedComplex, psi: int, tau: Chain, k: int, field: FieldSpec = GF2,
    target: PersistenceResult | None = None,
) -> ExtensionResult:
    """Every cycle extension of ``[tau]`` (a class of ``Z`` at ``psi``) into ``Y``."""
    _check_source(Z, psi, tau, k)
    aux = aux_persistence(Z, Y, psi, k, field)
    return extend_in_aux(aux, tau, psi, target)


def cycle_to_bar(
    Z: GradedComplex, Y: GradedComplex, psi: int, tau: Chain, k: int, field: FieldSpec = GF2,
    y_result: PersistenceResult | None = None,
) -> ExtensionResult:
    """Cycle extensions of ``[tau]`` written as bar representations in ``Y``."""
    target = y_result if y_result is not None else compute_persistence(Y, k, field)
    return cycle_to_cycles(Z, Y, psi, tau, k, field, target)


@dataclass(frozen=True)
class BarExtensionResult:
    """Extensions of every terminal class of a bar."""

    bar: Bar
    psi: int
    mode: str
    terminal_classes: tuple[Chain, ...]
    extensions: tuple[ExtensionResult, ...]
    source: PersistenceResult
    target: PersistenceResult | None = field(default=None)

    @property
    def baseline(self) -> ExtensionResult:
        return self.extensions[0]

    def cycle_sets(self) -> tuple[CycleExtensionSet, ...]:
        return tuple(c for e in self.extensions for c in e.cycle_sets())


def _duplicate_deaths(result: PersistenceResult) -> list[tuple[Bar, Bar]]:
    seen: dict[int, Bar] = {}
    clashes = []
    for b in result.barcode:
        if b.death in seen:
            clashes.append((seen[b.death], b))
        else:
            seen[b.death] = b
    return clashes


def extend_bar(
    Z: GradedComplex, Y: GradedComplex, bar: Bar | int, k: int, field: FieldSpec = GF2, *,
    mode: str = "general", psi: int | None = None, with_bars: bool = True,
    z_result: PersistenceResult | None = None, y_result: PersistenceResult | None = None,
) -> BarExtensionResult:
    if mode not in MODES:
        raise InputError(f"unknown mode {mode!r}; choose from {MODES}")
    z_result = z_result if z_result is not None else compute_persistence(Z, k, field)
    b = z_result.bar(bar)
    default_psi, rep = z_result.terminal_class(b)
    if psi is None:
        psi = default_psi
    elif not b.alive(psi) or psi > Z.scale.N:
        raise InputError(f"psi override {psi} outside the lifetime of {b}")
    if mode == "f2_unique_deaths":
        if field.p != 2:
            raise AssumptionViolation("f2_unique_deaths mode needs GF(2)")
        clashes = _duplicate_deaths(z_result)
        if clashes:
            names = ", ".join(f"{a} and {c}" for a, c in clashes)
            raise AssumptionViolation(f"bars with equal death grades: {names}")
        classes = (rep,)
    else:
        classes = tuple(alternate_terminal_classes(z_result, b, psi))
    target = None
    if with_bars:
        target = y_result if y_result is not None else compute_persistence(Y, k, field)
    aux = aux_persistence(Z, Y, psi, k, field)
    exts = tuple(extend_in_aux(aux, t, psi, target) for t in classes)
    return BarExtensionResult(b, psi, mode, classes, exts, z_result, target)


def bar_to_bars(
    Z: GradedComplex, Y: GradedComplex, bar: Bar | int, k: int, field: FieldSpec = GF2,
    mode: str = "general", psi: int | None = None,
    z_result: PersistenceResult | None = None, y_result: PersistenceResult | None = None,
) -> BarExtensionResult:
    """Bar extensions of ``bar`` of ``Z`` in the barcode of ``Y``."""
    return extend_bar(Z, Y, bar, k, field, mode=mode, psi=psi, with_bars=True, z_result=z_result, y_result=y_result)


def bar_to_cycle(
    Z: GradedComplex, Y: GradedComplex, bar: Bar | int, k: int, field: FieldSpec = GF2,
    mode: str = "general", psi: int | None = None, z_result: PersistenceResult | None = None,
) -> tuple[CycleExtensionSet, ...]:
    """Cycle extensions of ``bar`` of ``Z`` into ``Y``, without bar bookkeeping."""
    return extend_bar(Z, Y, bar, k, field, mode=mode, psi=psi, with_bars=False, z_result=z_result).cycle_sets()
