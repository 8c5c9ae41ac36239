"""Brute-force reference computations, independent of the library's reduction code.

Everything here is dense Gaussian elimination over GF(p) on small matrices.
"""

from __future__ import annotations

from itertools import combinations, product

import numpy as np

from barbridge.chains import Chain
from barbridge.complexes import GradedComplex, ParameterScale


# dense linear algebra over GF(p)


def rref(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Row-reduced echelon form mod p and its pivot columns."""
    M = np.array(A, dtype=np.int64) % p
    if M.ndim == 1:
        M = M.reshape(1, -1)
    rows, cols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + nz[0]
        M[[r, i]] = M[[i, r]]
        M[r] = (M[r] * pow(int(M[r, c]), -1, p)) % p
        for j in range(rows):
            if j != r and M[j, c]:
                M[j] = (M[j] - M[j, c] * M[r]) % p
        pivots.append(c)
        r += 1
    return M[:r], pivots


def rank(A, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A, p: int) -> list[np.ndarray]:
    """Basis of ``{x : A x = 0}``."""
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    if A.shape[0] == 0:
        return [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    R, piv = rref(A, p)
    free = [c for c in range(n) if c not in piv]
    out = []
    for f in free:
        x = np.zeros(n, dtype=np.int64)
        x[f] = 1
        for row, c in enumerate(piv):
            x[c] = (-R[row, f]) % p
        out.append(x)
    return out


def solve_affine(A, b, p: int):
    """``(particular, kernel basis)`` for ``A x = b``, or ``None`` if inconsistent."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    n = A.shape[1]
    if A.shape[0] == 0:
        return np.zeros(n, dtype=np.int64), nullspace(A, p)
    R, piv = rref(np.column_stack([A, b]), p)
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for row, c in enumerate(piv):
        x[c] = R[row, n]
    return x % p, nullspace(A, p)


class Quotient:
    """Normal forms of vectors modulo the span of ``gens``."""

    def __init__(self, gens: list[np.ndarray], dim: int, p: int) -> None:
        self.p, self.dim = p, dim
        if gens:
            self.R, self.piv = rref(np.array(gens), p)
        else:
            self.R, self.piv = np.zeros((0, dim), dtype=np.int64), []

    def nf(self, v) -> np.ndarray:
        v = np.array(v, dtype=np.int64) % self.p
        for row, c in enumerate(self.piv):
            if v[c]:
                v = (v - v[c] * self.R[row]) % self.p
        return v

    def contains(self, v) -> bool:
        return not self.nf(v).any()


def affine_members(base, dirs, q: Quotient) -> set[tuple[int, ...]]:
    """All normal forms of ``base + span(dirs)`` modulo ``q``."""
    p = q.p
    b = q.nf(base)
    imgs = [q.nf(d) for d in dirs]
    imgs = [d for d in imgs if d.any()]
    if imgs:
        basis, _ = rref(np.array(imgs), p)
        basis = list(basis)
    else:
        basis = []
    out = set()
    for coeffs in product(range(p), repeat=len(basis)):
        v = b.copy()
        for c, d in zip(coeffs, basis):
            v = (v + c * d) % p
        out.add(tuple(int(x) for x in q.nf(v)))
    return out


# chain complexes


def boundary_matrix(rows: list[tuple], cols: list[tuple], p: int) -> np.ndarray:
    ix = {s: i for i, s in enumerate(rows)}
    D = np.zeros((len(rows), len(cols)), dtype=np.int64)
    for j, s in enumerate(cols):
        if len(s) == 1:
            D[ix[()], j] = 1
            continue
        for i in range(len(s)):
            f = s[:i] + s[i + 1:]
            D[ix[f], j] = (-1) ** i % p
    return D


def simplices_at(X: GradedComplex, dim: int, grade: int) -> list[tuple]:
    return [s for s, g in X.simplices(dim) if g <= grade]


def chain_vector(z: Chain, index: dict[tuple, int], p: int) -> np.ndarray:
    v = np.zeros(len(index), dtype=np.int64)
    for s, c in z.items():
        v[index[s]] = c % p
    return v


# persistence


def persistent_betti(X: GradedComplex, k: int, p: int) -> dict[tuple[int, int], int]:
    """``beta[a, b]`` = rank of ``H_k(X^a) -> H_k(X^b)``, for ``1 <= a <= b <= N``."""
    N = X.scale.N
    cells = [s for s, _ in X.simplices(k)]
    ix = {s: i for i, s in enumerate(cells)}
    rows = [()] if k == 0 else [s for s, _ in X.simplices(k - 1)]
    full = boundary_matrix(rows, cells, p)
    cofaces = list(X.simplices(k + 1))
    grade = {s: g for s, g in X.simplices(k)}
    out = {}
    for a in range(1, N + 1):
        mask = np.array([grade[s] <= a for s in cells], dtype=bool)
        Da = full[:, mask]
        Za = []
        for x in nullspace(Da, p):
            z = np.zeros(len(cells), dtype=np.int64)
            z[mask] = x
            Za.append(z)
        for b in range(a, N + 1):
            Bb = boundary_matrix(cells, [s for s, g in cofaces if g <= b], p).T if cofaces else np.zeros((0, len(cells)))
            Bb = [r for r in np.asarray(Bb, dtype=np.int64)]
            rb = rank(np.array(Bb), p) if Bb else 0
            both = Za + Bb
            out[a, b] = (rank(np.array(both), p) if both else 0) - rb
    return out


def barcode_from_betti(beta: dict[tuple[int, int], int], N: int) -> list[tuple[int, int]]:
    """Inclusion-exclusion of persistent Betti numbers into (birth, death) grade pairs."""

    def B(a: int, b: int) -> int:
        if a < 1 or b > N:
            return 0
        return beta[a, b]

    bars = []
    for b in range(1, N + 1):
        for d in range(b + 1, N + 2):
            m = B(b, d - 1) - B(b - 1, d - 1) - B(b, d) + B(b - 1, d)
            assert m >= 0
            bars += [(b, d)] * m
    return sorted(bars)


# random filtrations


def random_filtration(
    rng, n: int, max_dim: int, N: int, keep: float | tuple[float, ...] = 1.0, delay: int = 0
) -> GradedComplex:
    """Random graded complex on ``n`` vertices; ``keep = 1`` gives a complete top level.

    ``keep`` may be given per dimension; ``delay`` pushes each dimension's
    random grades later by that many steps per dimension above one.
    """
    keeps = keep if isinstance(keep, tuple) else (keep,) * (max_dim + 1)
    grades: dict[tuple, int] = {}
    for size in range(1, max_dim + 2):
        for s in combinations(range(n), size):
            if size > 1:
                fs = [s[:i] + s[i + 1:] for i in range(size)]
                if any(f not in grades for f in fs):
                    continue
                if rng.random() > keeps[size - 1]:
                    continue
                floor = max(grades[f] for f in fs)
            else:
                floor = 1
            grades[s] = min(N, max(floor, int(rng.integers(1, N + 1)) + delay * max(size - 2, 0)))
    return GradedComplex(ParameterScale(tuple(float(i) for i in range(1, N + 1))), grades, max_dim, n_vertices=n)


def rich_pair(rng, k: int = 1) -> tuple[GradedComplex, GradedComplex]:
    """A pair on a shared vertex set whose intersections tend to carry short bars."""
    n = int(rng.integers(5, 8))
    Z = random_filtration(rng, n, k + 1, int(rng.integers(2, 5)), keep=(1.0,) + (0.8,) * k + (0.5,), delay=1)
    Y = random_filtration(rng, n, k + 1, int(rng.integers(6, 9)), keep=1.0, delay=3)
    return Z, Y


def square(offset, edge_grade, fill_grade, grades):
    a, b, c, d = (offset + i for i in range(4))
    for v in (a, b, c, d):
        grades[(v,)] = 1
    for e in ((a, b), (b, c), (c, d), (a, d)):
        grades[e] = edge_grade
    for s in ((a, c), (a, b, c), (a, c, d)):
        grades[s] = fill_grade


def loops(specs, N):
    """Disjoint hollow squares, each with the given (birth, death) grades."""
    grades = {}
    for i, (b, d) in enumerate(specs):
        square(4 * i, b, d, grades)
    return GradedComplex(ParameterScale(tuple(float(x) for x in range(1, N + 1))), grades, 2)


# extension sets by definition


def extension_oracle(Z: GradedComplex, Y: GradedComplex, psi: int, tau: Chain, k: int, p: int):
    """Restriction and extension class sets at every grade of ``Y``.

    Returns ``(R, E, index)`` where ``R[l]`` is the set of normal forms in
    ``H_k(Z^psi & Y^l)``, ``E[l]`` those in ``H_k(Y^l)``, and ``index`` maps
    k-simplices of ``Y`` to coordinates.
    """
    cells = [s for s, _ in Y.simplices(k)]
    index = {s: i for i, s in enumerate(cells)}
    zk = simplices_at(Z, k, psi)
    zk1 = simplices_at(Z, k + 1, psi)
    D = boundary_matrix(cells, zk1, p) if zk1 else np.zeros((len(cells), 0), dtype=np.int64)
    t = chain_vector(tau, index, p)
    zset = set(zk)
    R, E, Rq, Eq = {}, {}, {}, {}
    for ell in range(1, Y.scale.N + 1):
        yk = set(simplices_at(Y, k, ell))
        inter = zset & yk
        outside = [index[s] for s in cells if s not in inter]
        A = D[outside, :]
        sol = solve_affine(A, (-t[outside]) % p, p)
        yk1 = simplices_at(Y, k + 1, ell)
        eq = Quotient(list(boundary_matrix(cells, yk1, p).T) if yk1 else [], len(cells), p)
        ck1 = [s for s in zk1 if Y.grade(s) <= ell]
        rq = Quotient(list(boundary_matrix(cells, ck1, p).T) if ck1 else [], len(cells), p)
        Eq[ell], Rq[ell] = eq, rq
        if sol is None:
            R[ell], E[ell] = set(), set()
            continue
        c0, ker = sol
        w0 = (t + D @ c0) % p
        dirs = [(D @ x) % p for x in ker]
        R[ell] = affine_members(w0, dirs, rq)
        E[ell] = affine_members(w0, dirs, eq)
    return R, E, index, Rq, Eq


# barcode module automorphisms


def _invertible(m: int, p: int) -> list[np.ndarray]:
    out = []
    for flat in product(range(p), repeat=m * m):
        L = np.array(flat, dtype=np.int64).reshape(m, m)
        if rank(L, p) == m:
            out.append(L)
    return out


def automorphism_restrictions(intervals: list[tuple[int, int]], N: int, psi: int, p: int) -> set[tuple[int, ...]]:
    """Matrices at ``psi`` of every automorphism of the interval module.

    An automorphism is a family of invertible matrices, one per grade,
    commuting with the structure maps. A forward pass collects the matrices
    at each grade reachable from grade 1, a backward pass those extendable
    to grade N; their intersection at ``psi`` is the answer. Basis order at
    each grade is the given interval order restricted to alive intervals.
    """
    alive = [[i for i, (b, d) in enumerate(intervals) if b <= g < d] for g in range(N + 1)]

    def phi(g: int) -> np.ndarray:
        src, dst = alive[g], alive[g + 1]
        P = np.zeros((len(dst), len(src)), dtype=np.int64)
        for j, i in enumerate(src):
            if i in dst:
                P[dst.index(i), j] = 1
        return P

    cands = {g: _invertible(len(alive[g]), p) for g in range(1, N + 1)}

    def ok(L, L2, P) -> bool:
        return ((L2 @ P - P @ L) % p == 0).all()

    fwd = {1: cands[1]}
    for g in range(1, N):
        P = phi(g)
        fwd[g + 1] = [L2 for L2 in cands[g + 1] if any(ok(L, L2, P) for L in fwd[g])]
    bwd = {N: cands[N]}
    for g in range(N - 1, 0, -1):
        P = phi(g)
        bwd[g] = [L for L in cands[g] if any(ok(L, L2, P) for L2 in bwd[g + 1])]
    back = {tuple(L.ravel()) for L in bwd[psi]}
    return {t for t in (tuple(L.ravel()) for L in fwd[psi]) if t in back}
