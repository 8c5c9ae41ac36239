"""Analogous bars between two point clouds linked by a cross-dissimilarity matrix.

Feature mode starts from a bar of the clique filtration on ``Q``, extends
it into the witness filtration on ``Q``, crosses to the witness filtration
on ``P`` by Dowker duality and extends back out into the clique filtration
on ``P``. Similarity mode starts from a witness bar and extends it into both
clique filtrations.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from itertools import product
from typing import Any

import numpy as np

from ._parallel import parallel_map
from .complexes import GradedComplex, clique_complex, witness_complex
from .decompositions import DEFAULT_CAP
from .dowker import DowkerDualResult, DowkerSolver, dowker_bar_correspondence
from .errors import InputError
from .extension import BarExtensionResult, ExtensionResult, aux_persistence, extend_bar, extend_in_aux
from .linalg import GF2, FieldSpec
from .persistence import Bar, PersistenceResult, compute_persistence


@dataclass(frozen=True)
class Triple:
    """The four filtrations built from ``(M_Q, M_P, M_QP)`` and their barcodes."""

    M_Q: np.ndarray
    M_P: np.ndarray
    M_QP: np.ndarray
    k: int
    field: FieldSpec
    complexes: dict[str, GradedComplex]
    results: dict[str, PersistenceResult]

    def digest(self) -> dict[str, str]:
        return {
            name: hashlib.sha256(np.ascontiguousarray(m, dtype=float).tobytes() + str(m.shape).encode()).hexdigest()[:16]
            for name, m in (("M_Q", self.M_Q), ("M_P", self.M_P), ("M_QP", self.M_QP))
        }


def build_triple(M_Q, M_P, M_QP, k: int, field: FieldSpec = GF2, max_dim: int | None = None) -> Triple:
    M_Q, M_P, M_QP = (np.asarray(m, dtype=float) for m in (M_Q, M_P, M_QP))
    if M_QP.ndim != 2 or M_QP.shape != (M_Q.shape[0], M_P.shape[0]):
        raise InputError(f"cross matrix has shape {M_QP.shape}, expected ({M_Q.shape[0]}, {M_P.shape[0]})")
    md = k + 1 if max_dim is None else max_dim
    cx = {
        "X_Q": clique_complex(M_Q, md),
        "W_QP": witness_complex(M_QP, md),
        "W_PQ": witness_complex(M_QP.T, md),
        "X_P": clique_complex(M_P, md),
    }
    res = dict(zip(cx, parallel_map(lambda name: compute_persistence(cx[name], k, field), list(cx))))
    return Triple(M_Q, M_P, M_QP, k, field, cx, res)


@dataclass(frozen=True)
class DualLeg:
    """One dual cycle on the ``P`` side and its extension into ``X_P``."""

    terminal_index: int
    grade: int
    offsets_used: tuple[int, ...]
    dowker: DowkerDualResult
    birth: int
    death: int
    psi: int
    extension: ExtensionResult


@dataclass
class AnalogousBarsResult:
    mode: str
    triple: Triple
    bar: Bar
    source: BarExtensionResult | None = None
    legs: tuple[DualLeg, ...] = ()
    partner: Bar | None = None
    q_side: BarExtensionResult | None = None
    p_side: BarExtensionResult | None = None
    truncated: bool = False
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        if self.mode == "feature":
            return not self.legs
        return self.q_side is None or self.p_side is None

    def baseline_pair(self) -> tuple[frozenset[int], frozenset[int]] | None:
        """Bar ids on the ``Q`` and ``P`` clique sides of the baseline extension."""
        if self.mode == "feature":
            if not self.legs:
                return None
            leg = self.legs[0]
            ext = leg.extension
            return frozenset({self.bar.id}), frozenset(ext.at(ext.ell0).baseline_bars.bar_ids())
        q, p = self.q_side.baseline, self.p_side.baseline
        return (
            frozenset(q.at(q.ell0).baseline_bars.bar_ids()),
            frozenset(p.at(p.ell0).baseline_bars.bar_ids()),
        )


def _aux_summary(ext: ExtensionResult) -> dict[str, Any]:
    return {"ell0": ext.ell0, "p_Y": list(ext.p_Y), "aux_bars": [[b.birth, b.death] for b in ext.aux.barcode]}


def feature_centric(
    M_Q, M_P, M_QP, bar: Bar | int, k: int, field: FieldSpec = GF2, *,
    cap: int = DEFAULT_CAP, max_dim: int | None = None, mode: str = "general", triple: Triple | None = None,
) -> AnalogousBarsResult:
    """Carry a clique bar of ``Q`` through the witness filtrations to clique bars of ``P``."""
    t = triple if triple is not None else build_triple(M_Q, M_P, M_QP, k, field, max_dim)
    cx, res = t.complexes, t.results
    b = res["X_Q"].bar(bar)
    source = extend_bar(
        cx["X_Q"], cx["W_QP"], b, k, field, mode=mode, z_result=res["X_Q"], y_result=res["W_QP"]
    )
    out = AnalogousBarsResult("feature", t, b, source=source)
    out.diagnostics["source"] = [_aux_summary(e) for e in source.extensions]

    solvers: dict[float, DowkerSolver] = {}
    W_PQ = res["W_PQ"]
    seen: set[tuple] = set()
    pending: list[tuple[int, int, tuple[int, ...], DowkerDualResult, int, int, int]] = []
    trivial = 0
    budget = cap
    for ti, ext in enumerate(source.extensions):
        for g in ext.grades:
            eps = cx["W_QP"].scale.value(g.at)
            solver = solvers.get(eps)
            if solver is None:
                solver = solvers[eps] = DowkerSolver(t.M_QP, eps, k, field, cx["W_QP"].max_dim)
            base = solver.dual(g.cycles.baseline)
            offs = [solver.dual(o) for o in g.cycles.offsets]
            for coeffs in product(range(field.p), repeat=len(offs)):
                if budget == 0:
                    out.truncated = True
                    break
                budget -= 1
                src, dual, cert = base.source, base.dual, base.certificate
                for c, o in zip(coeffs, offs):
                    if c:
                        src, dual, cert = src + c * o.source, dual + c * o.dual, cert + c * o.certificate
                leg = DowkerDualResult(src, eps, dual, cert, base.n_landmarks)
                rep = W_PQ.bar_representation(dual, g.at) if dual else None
                if not rep:
                    trivial += 1
                    continue
                birth, death = W_PQ.class_birth_death(rep)
                psi = min(death - 1, W_PQ.N)
                key = (psi, W_PQ.bar_representation(dual, psi).terms)
                if key in seen:
                    continue
                seen.add(key)
                pending.append((ti, g.at, coeffs, leg, birth, death, psi))

    aux_cache: dict[int, PersistenceResult] = {}
    for psi in sorted({p[-1] for p in pending}):
        aux_cache[psi] = aux_persistence(cx["W_PQ"], cx["X_P"], psi, k, field)

    def run(item) -> DualLeg:
        ti, grade, coeffs, leg, birth, death, psi = item
        ext = extend_in_aux(aux_cache[psi], leg.dual, psi, res["X_P"])
        return DualLeg(ti, grade, tuple(coeffs), leg, birth, death, psi, ext)

    out.legs = tuple(parallel_map(run, pending))
    out.diagnostics["trivial_duals"] = trivial
    out.diagnostics["dual_cycles"] = len(out.legs)
    if not out.legs:
        out.diagnostics["empty_reason"] = "every cycle extension is trivial on the witness side"
    return out


def similarity_centric(
    M_Q, M_P, M_QP, bar: Bar | int, k: int, field: FieldSpec = GF2, *,
    cap: int = DEFAULT_CAP, max_dim: int | None = None, mode: str = "general", triple: Triple | None = None,
) -> AnalogousBarsResult:
    """Extend a witness bar and its Dowker partner into both clique filtrations."""
    t = triple if triple is not None else build_triple(M_Q, M_P, M_QP, k, field, max_dim)
    cx, res = t.complexes, t.results
    b = res["W_QP"].bar(bar)
    partner = res["W_PQ"].bar(dowker_bar_correspondence(res["W_QP"], res["W_PQ"])[b.id])
    q_side, p_side = parallel_map(
        lambda args: extend_bar(args[0], args[1], args[2], k, field, mode=mode, z_result=args[3], y_result=args[4]),
        [
            (cx["W_QP"], cx["X_Q"], b, res["W_QP"], res["X_Q"]),
            (cx["W_PQ"], cx["X_P"], partner, res["W_PQ"], res["X_P"]),
        ],
    )
    out = AnalogousBarsResult("similarity", t, b, partner=partner, q_side=q_side, p_side=p_side)
    out.diagnostics["q_side"] = [_aux_summary(e) for e in q_side.extensions]
    out.diagnostics["p_side"] = [_aux_summary(e) for e in p_side.extensions]
    out.truncated = any(_offset_overflow(e, cap) for side in (q_side, p_side) for e in side.extensions)
    return out


def _offset_overflow(ext: ExtensionResult, cap: int) -> bool:
    return any(g.cycles.size() > cap for g in ext.grades)

