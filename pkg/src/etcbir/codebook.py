"""Visual-word codebook: deterministic k-means over patch descriptors.

The load-bearing property here is neutrality to encryption: block scrambling
only reorders the corpus patch multiset, so clustering runs on a canonically
sorted copy of the descriptors. With seeding, tie-breaking, empty-cluster
repair, and reduction order all pinned, the codebook built from an encrypted
corpus is bitwise identical to the one built from the plain corpus.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .rng import Splitmix64

_SUM_CHUNK = 1 << 24  # elements per distance-matrix chunk, ~128 MB of float64


@dataclass(frozen=True)
class ClusteringConfig:
    """Knobs for kmeans; everything that affects the result is in here."""

    m: int
    seed: int
    max_iters: int = 100
    tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.m < 1:
            raise ValidationError("codebook size must be at least 1")
        if self.max_iters < 1:
            raise ValidationError("max_iters must be at least 1")


@dataclass(frozen=True)
class Codebook:
    """M visual words plus the clustering provenance that produced them."""

    words: np.ndarray
    seed: int
    iterations: int
    wcss_history: tuple[float, ...] = field(default=(), compare=False)

    @property
    def m(self) -> int:
        return self.words.shape[0]

    @property
    def dim(self) -> int:
        return self.words.shape[1]


def canonicalize_patch_set(descriptors: np.ndarray) -> np.ndarray:
    """Sort descriptor rows lexicographically (component 0 first).

    Identical multisets of patch descriptors, in any order, map to the same
    sequence; duplicates keep all copies.
    """
    arr = np.asarray(descriptors, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected (N, dim) descriptor array, got {arr.shape}")
    if arr.shape[0] == 0:
        return arr.copy()
    # np.lexsort treats its last key as primary, so feed columns reversed.
    order = np.lexsort(arr.T[::-1])
    return np.ascontiguousarray(arr[order])


def _squared_distances(points: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Exact squared l2 distances, (N, M), chunked to bound memory.

    Uses explicit differences rather than the expanded-product identity so the
    result is reproducible and never negative.
    """
    n, dim = points.shape
    m = centers.shape[0]
    out = np.empty((n, m), dtype=np.float64)
    step = max(1, _SUM_CHUNK // max(1, m * dim))
    for start in range(0, n, step):
        stop = min(start + step, n)
        diff = points[start:stop, np.newaxis, :] - centers[np.newaxis, :, :]
        out[start:stop] = np.sum(diff * diff, axis=2)
    return out


def _plusplus_init(points: np.ndarray, m: int, stream: Splitmix64) -> np.ndarray:
    """k-means++ seeding with all random choices drawn from one stream.

    The first center is uniform; each later center is index-sampled with
    probability proportional to the squared distance to the nearest chosen
    center (first cumulative weight exceeding u * total). A degenerate zero
    total falls back to a uniform draw.
    """
    n = points.shape[0]
    centers = np.empty((m, points.shape[1]), dtype=np.float64)
    centers[0] = points[stream.next_below(n)]
    if m == 1:
        return centers
    diff = points - centers[0]
    best_d2 = np.sum(diff * diff, axis=1)
    for j in range(1, m):
        total = float(best_d2.sum())
        if total > 0.0:
            target = stream.next_unit() * total
            idx = int(np.searchsorted(np.cumsum(best_d2), target, side="right"))
            idx = min(idx, n - 1)
        else:
            idx = stream.next_below(n)
        centers[j] = points[idx]
        diff = points - centers[j]
        np.minimum(best_d2, np.sum(diff * diff, axis=1), out=best_d2)
    return centers


def _repair_empty_clusters(
    assignment: np.ndarray, d2: np.ndarray, m: int
) -> np.ndarray:
    """Reassign the farthest-from-home point to each empty cluster.

    Empty clusters are filled in ascending index order; each point can be
    seized at most once, so the loop terminates.
    """
    point_d2 = d2[np.arange(len(assignment)), assignment].copy()
    while True:
        counts = np.bincount(assignment, minlength=m)
        empty = np.flatnonzero(counts == 0)
        if empty.size == 0:
            return assignment
        victim = int(np.argmax(point_d2))
        assignment[victim] = int(empty[0])
        point_d2[victim] = -np.inf


def _centroid_sums(points: np.ndarray, assignment: np.ndarray, m: int) -> np.ndarray:
    """Per-cluster coordinate sums accumulated in ascending point order."""
    dim = points.shape[1]
    sums = np.empty((m, dim), dtype=np.float64)
    for d in range(dim):
        sums[:, d] = np.bincount(assignment, weights=points[:, d], minlength=m)
    return sums


def kmeans(descriptors: np.ndarray, config: ClusteringConfig) -> Codebook:
    """Lloyd's algorithm with k-means++ seeding, fully pinned.

    Deterministic in (descriptor sequence, config): seeding draws come from
    Splitmix64(config.seed), assignment ties break toward the lowest centroid
    index, empty clusters seize the point farthest from its centroid, and
    centroid sums accumulate in ascending point order. Stops when the summed
    centroid movement drops below config.tol or after config.max_iters
    iterations. Callers wanting order-independence pass the output of
    canonicalize_patch_set.
    """
    points = np.asarray(descriptors, dtype=np.float64)
    if points.ndim != 2:
        raise ValueError(f"expected (N, dim) descriptor array, got {points.shape}")
    n = points.shape[0]
    if n < config.m:
        raise ValidationError(
            f"need at least {config.m} patch descriptors to build a codebook "
            f"of size {config.m}, got {n}"
        )

    centers = _plusplus_init(points, config.m, Splitmix64(config.seed))
    wcss_history: list[float] = []
    iterations = 0
    for _ in range(config.max_iters):
        iterations += 1
        d2 = _squared_distances(points, centers)
        # objective before the update: nearest-center residual of this sweep
        wcss_history.append(float(d2.min(axis=1).sum()))
        assignment = np.argmin(d2, axis=1)
        assignment = _repair_empty_clusters(assignment, d2, config.m)

        counts = np.bincount(assignment, minlength=config.m)
        sums = _centroid_sums(points, assignment, config.m)
        new_centers = centers.copy()
        occupied = counts > 0
        new_centers[occupied] = sums[occupied] / counts[occupied, np.newaxis]

        moved = float(np.sqrt(np.sum((new_centers - centers) ** 2, axis=1)).sum())
        centers = new_centers
        if moved < config.tol:
            break

    return Codebook(
        words=centers,
        seed=config.seed,
        iterations=iterations,
        wcss_history=tuple(wcss_history),
    )


def assign_batch(descriptors: np.ndarray, codebook: Codebook) -> np.ndarray:
    """Nearest visual word per descriptor row, ties toward the lowest index."""
    arr = np.atleast_2d(np.asarray(descriptors, dtype=np.float64))
    if codebook.m < 1:
        raise ValidationError("codebook is empty")
    return np.argmin(_squared_distances(arr, codebook.words), axis=1)


def assign(descriptor: np.ndarray, codebook: Codebook) -> int:
    """Index of the visual word nearest to one descriptor."""
    return int(assign_batch(descriptor, codebook)[0])
