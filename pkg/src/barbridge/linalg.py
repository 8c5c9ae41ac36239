"""Sparse column linear algebra over prime fields.

Two vector backends share one small interface: GF(2) vectors are Python
ints used as bitsets, other primes use ``{row: coeff}`` dicts. The public
``SparseMatrix`` always speaks dicts; the backends are what the reduction
loops actually run on.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import InputError

SparseVector = Mapping[int, int]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(p)."""

    p: int = 2

    def __post_init__(self) -> None:
        if not isinstance(self.p, (int, np.integer)) or not _is_prime(int(self.p)):
            raise InputError(f"field characteristic must be prime, got {self.p!r}")
        object.__setattr__(self, "p", int(self.p))

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return pow(a, -1, self.p)

    def units(self) -> range:
        return range(1, self.p)

    def elements(self) -> range:
        return range(self.p)

    def ops(self) -> "_GF2Ops | _GFpOps":
        return _GF2 if self.p == 2 else _GFpOps(self.p)


GF2 = FieldSpec(2)


class _GF2Ops:
    p = 2
    zero = 0

    @staticmethod
    def from_dict(d: SparseVector) -> int:
        v = 0
        for i, c in d.items():
            if c % 2:
                v ^= 1 << i
        return v

    @staticmethod
    def to_dict(v: int) -> dict[int, int]:
        out = {}
        while v:
            lsb = v & -v
            out[lsb.bit_length() - 1] = 1
            v ^= lsb
        return out

    @staticmethod
    def support(v: int) -> list[int]:
        out = []
        while v:
            lsb = v & -v
            out.append(lsb.bit_length() - 1)
            v ^= lsb
        return out

    @staticmethod
    def unit(i: int) -> int:
        return 1 << i

    @staticmethod
    def low(v: int) -> int:
        return v.bit_length() - 1

    @staticmethod
    def coeff(v: int, i: int) -> int:
        return (v >> i) & 1

    @staticmethod
    def axpy(v: int, c: int, w: int) -> int:
        """v + c*w."""
        return v ^ w if c & 1 else v

    @staticmethod
    def scale(v: int, c: int) -> int:
        return v if c & 1 else 0


_GF2 = _GF2Ops()


class _GFpOps:
    zero: dict = {}

    def __init__(self, p: int) -> None:
        self.p = p
        self.zero = {}

    def from_dict(self, d: SparseVector) -> dict[int, int]:
        return {i: c % self.p for i, c in d.items() if c % self.p}

    @staticmethod
    def to_dict(v: dict[int, int]) -> dict[int, int]:
        return dict(v)

    @staticmethod
    def support(v: dict[int, int]) -> list[int]:
        return sorted(v)

    @staticmethod
    def unit(i: int) -> dict[int, int]:
        return {i: 1}

    @staticmethod
    def low(v: dict[int, int]) -> int:
        return max(v) if v else -1

    @staticmethod
    def coeff(v: dict[int, int], i: int) -> int:
        return v.get(i, 0)

    def axpy(self, v: dict[int, int], c: int, w: dict[int, int]) -> dict[int, int]:
        c %= self.p
        if not c:
            return v
        out = dict(v)
        for i, x in w.items():
            y = (out.get(i, 0) + c * x) % self.p
            if y:
                out[i] = y
            else:
                out.pop(i, None)
        return out

    def scale(self, v: dict[int, int], c: int) -> dict[int, int]:
        c %= self.p
        return {i: (x * c) % self.p for i, x in v.items()} if c else {}


@dataclass(frozen=True)
class SparseMatrix:
    """Column-major sparse matrix with nonzero entries only."""

    rows: int
    cols: int
    columns: tuple[Mapping[int, int], ...]

    def __post_init__(self) -> None:
        cols = tuple(dict(c) for c in self.columns)
        if len(cols) != self.cols:
            raise InputError(f"expected {self.cols} columns, got {len(cols)}")
        for j, col in enumerate(cols):
            for i, x in col.items():
                if not 0 <= i < self.rows:
                    raise InputError(f"row index {i} out of range in column {j}")
                if x == 0:
                    raise InputError(f"stored zero at ({i}, {j})")
        object.__setattr__(self, "columns", cols)

    @classmethod
    def from_dense(cls, a: Sequence[Sequence[int]] | np.ndarray, field: FieldSpec = GF2) -> "SparseMatrix":
        arr = np.asarray(a, dtype=np.int64) % field.p
        if arr.ndim != 2:
            raise InputError("dense matrix must be two-dimensional")
        cols = tuple({int(i): int(arr[i, j]) for i in np.flatnonzero(arr[:, j])} for j in range(arr.shape[1]))
        return cls(arr.shape[0], arr.shape[1], cols)

    @classmethod
    def identity(cls, n: int) -> "SparseMatrix":
        return cls(n, n, tuple({j: 1} for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SparseMatrix":
        return cls(rows, cols, tuple({} for _ in range(cols)))

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.rows, self.cols), dtype=np.int64)
        for j, col in enumerate(self.columns):
            for i, x in col.items():
                out[i, j] = x
        return out

    def matvec(self, x: SparseVector, field: FieldSpec = GF2) -> dict[int, int]:
        ops = field.ops()
        acc = ops.zero
        for j, c in x.items():
            if not 0 <= j < self.cols:
                raise InputError(f"vector index {j} out of range")
            acc = ops.axpy(acc, c, ops.from_dict(self.columns[j]))
        return ops.to_dict(acc)

    def matmul(self, other: "SparseMatrix", field: FieldSpec = GF2) -> "SparseMatrix":
        if self.cols != other.rows:
            raise InputError("inner dimensions differ")
        return SparseMatrix(self.rows, other.cols, tuple(self.matvec(c, field) for c in other.columns))


@dataclass(frozen=True)
class AffineSolutionSet:
    """``particular + span(kernel_basis)``."""

    particular: dict[int, int]
    kernel_basis: tuple[dict[int, int], ...]
    field: FieldSpec = GF2

    def members(self) -> Iterator[dict[int, int]]:
        """Every solution; exponential in the kernel dimension."""
        ops = self.field.ops()
        base = ops.from_dict(self.particular)
        kern = [ops.from_dict(k) for k in self.kernel_basis]
        for coeffs in product(self.field.elements(), repeat=len(kern)):
            v = base
            for c, k in zip(coeffs, kern):
                v = ops.axpy(v, c, k)
            yield ops.to_dict(v)


def reduce_columns(columns: Sequence, ops, track: bool = True):
    """Left-to-right column reduction in backend-native vectors.

    Returns ``(R, V, pivots)`` where ``pivots`` maps low row -> column.
    ``V`` is ``None`` when ``track`` is false.
    """
    p = ops.p
    R = list(columns)
    V = [ops.unit(j) for j in range(len(R))] if track else None
    pivots: dict[int, int] = {}
    for j in range(len(R)):
        r = R[j]
        while r:
            low = ops.low(r)
            i = pivots.get(low)
            if i is None:
                pivots[low] = j
                break
            c = (-ops.coeff(r, low) * pow(ops.coeff(R[i], low), -1, p)) % p
            r = ops.axpy(r, c, R[i])
            if track:
                V[j] = ops.axpy(V[j], c, V[i])
        R[j] = r
    return R, V, pivots


def reduce_with_basis(D: SparseMatrix, field: FieldSpec = GF2) -> tuple[SparseMatrix, SparseMatrix]:
    """Reduce ``D`` to ``R = D V`` with ``V`` unit upper-triangular."""
    if not isinstance(D, SparseMatrix):
        raise InputError("expected a SparseMatrix")
    ops = field.ops()
    R, V, _ = reduce_columns([ops.from_dict(c) for c in D.columns], ops)
    return (
        SparseMatrix(D.rows, D.cols, tuple(ops.to_dict(c) for c in R)),
        SparseMatrix(D.cols, D.cols, tuple(ops.to_dict(c) for c in V)),
    )


def _as_sparse(b: SparseVector | Sequence[int] | np.ndarray, n: int) -> dict[int, int]:
    if isinstance(b, Mapping):
        out = {int(i): int(x) for i, x in b.items() if x}
        if any(not 0 <= i < n for i in out):
            raise InputError("right-hand side index out of range")
        return out
    arr = np.asarray(b, dtype=np.int64).ravel()
    if arr.size != n:
        raise InputError(f"right-hand side has length {arr.size}, expected {n}")
    return {int(i): int(arr[i]) for i in np.flatnonzero(arr)}


def solve(A: SparseMatrix, b: SparseVector | Sequence[int], field: FieldSpec = GF2) -> AffineSolutionSet | None:
    """All solutions of ``A x = b``, or ``None`` if the system is inconsistent."""
    ops = field.ops()
    p = field.p
    rhs = ops.from_dict(_as_sparse(b, A.rows))
    R, V, pivots = reduce_columns([ops.from_dict(c) for c in A.columns], ops)
    x = ops.zero
    while rhs:
        low = ops.low(rhs)
        i = pivots.get(low)
        if i is None:
            return None
        c = (ops.coeff(rhs, low) * pow(ops.coeff(R[i], low), -1, p)) % p
        rhs = ops.axpy(rhs, -c, R[i])
        x = ops.axpy(x, c, V[i])
    kernel = tuple(ops.to_dict(V[j]) for j in range(A.cols) if not R[j])
    return AffineSolutionSet(ops.to_dict(x), kernel, field)

