"""Seeded point-cloud scenarios used by the CLI and the scenario tests."""

from __future__ import annotations

import numpy as np


def distances(A: np.ndarray, B: np.ndarray | None = None) -> np.ndarray:
    """Euclidean distance matrix; exact zeros on the diagonal when ``B`` is omitted."""
    A = np.asarray(A, dtype=float)
    B = A if B is None else np.asarray(B, dtype=float)
    D = np.sqrt(((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=-1))
    if B is A:
        D = (D + D.T) / 2
        np.fill_diagonal(D, 0.0)
    return D


def circle_pair(seed: int = 7, n_q: int = 12, n_p: int = 12, noise: float = 0.1) -> tuple[np.ndarray, np.ndarray]:
    """Two independent noisy samples of the unit circle."""
    rng = np.random.default_rng(seed)

    def sample(n: int) -> np.ndarray:
        theta = np.sort(rng.uniform(0, 2 * np.pi, n))
        r = 1 + noise * rng.standard_normal(n)
        return np.column_stack([r * np.cos(theta), r * np.sin(theta)])

    return sample(n_q), sample(n_p)


def cluster_loop(
    seed: int = 7, n_points: int = 40, n_clusters: int = 6, spread: float = 0.12
) -> tuple[np.ndarray, np.ndarray]:
    """Blobs arranged around a loop and the centroid of each blob."""
    rng = np.random.default_rng(seed)
    angles = 2 * np.pi * np.arange(n_clusters) / n_clusters
    centers = np.column_stack([np.cos(angles), np.sin(angles)])
    labels = np.arange(n_points) % n_clusters
    Q = centers[labels] + spread * rng.standard_normal((n_points, 2))
    P = np.array([Q[labels == c].mean(axis=0) for c in range(n_clusters)])
    return Q, P


def torus_grid(
    seed: int = 7, grid: int = 5, n_loop: int = 10, noise: float = 0.05, detour: float = 0.6
) -> tuple[np.ndarray, np.ndarray]:
    """A deformed essential loop ``Q`` and a jittered grid ``P`` on the flat torus in R^4."""
    rng = np.random.default_rng(seed)

    def embed(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return np.column_stack([np.cos(a), np.sin(a), np.cos(b), np.sin(b)])

    u = 2 * np.pi * np.arange(grid) / grid
    a, b = np.meshgrid(u, u, indexing="ij")
    P = embed(a.ravel() + noise * rng.standard_normal(grid * grid), b.ravel() + noise * rng.standard_normal(grid * grid))
    t = 2 * np.pi * np.arange(n_loop) / n_loop
    Q = embed(t + noise * rng.standard_normal(n_loop), detour * np.sin(t) + noise * rng.standard_normal(n_loop))
    return Q, P


def trefoil(seed: int = 7, n: int = 30, noise: float = 0.02) -> tuple[np.ndarray, np.ndarray]:
    """Points on a trefoil knot in R^3 and their projection to the first two coordinates."""
    rng = np.random.default_rng(seed)
    t = np.sort(rng.uniform(0, 2 * np.pi, n))
    X = np.column_stack([np.sin(t) + 2 * np.sin(2 * t), np.cos(t) - 2 * np.cos(2 * t), -np.sin(3 * t)])
    X = X + noise * rng.standard_normal(X.shape)
    return X, X[:, :2].copy()


SCENARIOS = {"circle-pair": circle_pair, "clusters": cluster_loop, "torus-grid": torus_grid}
