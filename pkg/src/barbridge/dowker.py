"""Dowker duality between the two witness filtrations of a cross matrix.

At a fixed parameter both one-sided witness complexes sit inside the
cross complex (landmarks and witnesses together, joined wherever every
landmark-witness pair is related), and both inclusions are homology
isomorphisms. A landmark cycle ``z`` is carried to a witness cycle ``y``
by solving ``boundary(c) = z - y`` there; ``c`` certifies the answer.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .chains import Chain, Simplex, facets
from .complexes import cross_complex_at, witness_complex
from .errors import AssumptionViolation, InputError
from .linalg import GF2, FieldSpec, reduce_columns
from .persistence import PersistenceResult, compute_persistence


def barcode_values(result: PersistenceResult) -> list[tuple[float, float]]:
    return sorted(result.bar_values(b) for b in result.barcode)


@dataclass(frozen=True)
class DowkerCheck:
    landmark: PersistenceResult
    witness: PersistenceResult
    equal: bool


def dowker_barcode_check(B, k: int, field: FieldSpec = GF2, max_dim: int | None = None) -> DowkerCheck:
    """Barcodes of ``W(B)`` and ``W(B^T)`` and whether their value multisets agree."""
    B = np.asarray(B, dtype=float)
    md = k + 1 if max_dim is None else max_dim
    left = compute_persistence(witness_complex(B, md), k, field)
    right = compute_persistence(witness_complex(B.T, md), k, field)
    return DowkerCheck(left, right, Counter(barcode_values(left)) == Counter(barcode_values(right)))


def dowker_bar_correspondence(landmark: PersistenceResult, witness: PersistenceResult) -> dict[int, int]:
    """Match bar ids across the two sides by equal (birth value, death value)."""
    def index(result: PersistenceResult, side: str) -> dict[tuple[float, float], int]:
        out: dict[tuple[float, float], int] = {}
        for b in result.barcode:
            key = result.bar_values(b)
            if key in out:
                raise AssumptionViolation(f"{side} bars {out[key]} and {b.id} share endpoints {key}")
            out[key] = b.id
        return out

    left, right = index(landmark, "landmark"), index(witness, "witness")
    if set(left) != set(right):
        raise AssumptionViolation("barcodes differ; no Dowker correspondence")
    return {left[key]: right[key] for key in sorted(left)}


@dataclass(frozen=True)
class DowkerDualResult:
    source: Chain  # landmark ids
    eps: float
    dual: Chain  # witness ids
    certificate: Chain  # cross-complex ids; witnesses shifted by n_landmarks
    n_landmarks: int

    def verify(self) -> bool:
        return self.certificate.boundary() == self.source - self.dual.shift(self.n_landmarks)


class DowkerSolver:
    """Reduced cross complex at one parameter, reusable for many cycles."""

    def __init__(self, B, eps: float, k: int, field: FieldSpec = GF2, max_dim: int | None = None) -> None:
        B = np.asarray(B, dtype=float)
        self.B, self.eps, self.k, self.field = B, float(eps), k, field
        self.n = B.shape[0]
        md = k + 1 if max_dim is None else max_dim
        if md < k + 1:
            raise InputError("max_dim must be at least k + 1")
        self.cross = cross_complex_at(B, eps, md)
        cx = self.cross.complex
        n = self.n

        def rank(s: Simplex) -> int:
            if s[0] >= n:
                return 0  # pure witness first
            return 2 if s[-1] < n else 1

        self.rows = sorted((s for s, _ in cx.simplices(k)), key=lambda s: (rank(s), s))
        self.row_ix = {s: i for i, s in enumerate(self.rows)}
        self.witness_rows = [s for s in self.rows if s[0] >= n]
        self.cofaces = [s for s, _ in cx.simplices(k + 1)]
        ops, p = field.ops(), field.p
        self.ops = ops
        cols = [ops.unit(self.row_ix[s]) for s in self.witness_rows]
        cols += [ops.from_dict({self.row_ix[f]: sign % p for sign, f in facets(s)}) for s in self.cofaces]
        self.R, self.V, self.pivots = reduce_columns(cols, ops)

    def dual(self, z: Chain) -> DowkerDualResult:
        ops, p, n = self.ops, self.field.p, self.n
        if z.p != p:
            raise InputError("chain field does not match")
        if z and z.dim != self.k:
            raise InputError(f"expected a {self.k}-chain")
        if not z.is_cycle():
            raise InputError("landmark chain is not a cycle")
        vec = {}
        for s, c in z.items():
            if s[-1] >= n or s not in self.row_ix:
                raise InputError(f"simplex {s} is not in the landmark complex at eps={self.eps}")
            vec[self.row_ix[s]] = c
        rhs, x = ops.from_dict(vec), ops.zero
        while rhs:
            low = ops.low(rhs)
            i = self.pivots.get(low)
            if i is None:
                raise InputError("no dual cycle at this dimension cap; increase max_dim")
            c = (ops.coeff(rhs, low) * pow(ops.coeff(self.R[i], low), -1, p)) % p
            rhs = ops.axpy(rhs, -c, self.R[i])
            x = ops.axpy(x, c, self.V[i])
        nw = len(self.witness_rows)
        y, cert = {}, {}
        for j, c in ops.to_dict(x).items():
            if j < nw:
                y[tuple(v - n for v in self.witness_rows[j])] = c
            else:
                cert[self.cofaces[j - nw]] = c
        out = DowkerDualResult(z, self.eps, Chain(y, p), Chain(cert, p), n)
        if not out.verify():
            raise AssertionError("Dowker certificate failed to verify")
        return out


def dowker_dual_cycle(
    B, eps: float, z: Chain, k: int, field: FieldSpec = GF2, max_dim: int | None = None
) -> DowkerDualResult:
    """Carry a landmark cycle of ``W(B)`` at ``eps`` to a witness cycle of ``W(B^T)``."""
    return DowkerSolver(B, eps, k, field, max_dim).dual(z)
