"""Transport diagnostics: optimal bottleneck matching and partition error.

The bottleneck matching pairs a sample cloud with an equal-size reference
cloud (typically a regular grid) minimizing the maximum matched distance; its
normalized value tracks the infinity-norm transport rate n^(-1/d) (log n)^(p_d)
with p_2 = 3/4 and p_d = 1/d for d >= 3.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .functionals import Partition
from .geometry import PointCloud, RectDomain

__all__ = [
    "BottleneckResult",
    "bottleneck_match",
    "reference_grid",
    "misclassification_error",
    "raw_disagreement",
    "transport_power",
]

MAX_PERMUTATION_CLASSES = 8


def transport_power(d: int) -> float:
    """Exponent p_d in the infinity-transport rate: 3/4 in d = 2, else 1/d."""
    if d < 2:
        raise ValueError("transport rate defined for d >= 2")
    return 0.75 if d == 2 else 1.0 / d


@dataclass(frozen=True)
class BottleneckResult:
    matching: np.ndarray  # matching[i] = grid index paired with cloud point i
    bottleneck_distance: float
    normalized: float  # bottleneck * n^(1/d) / (log n)^(p_d)


def reference_grid(domain: RectDomain, m: int) -> PointCloud:
    """m x m grid of cell centers scaled to the domain (n = m^2 points)."""
    if m < 1:
        raise ValueError("grid side must be >= 1")
    side = (np.arange(m) + 0.5) / m
    xx, yy = np.meshgrid(side * domain.width, side * domain.height, indexing="ij")
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    pts.setflags(write=False)
    return PointCloud(points=pts, domain=domain, seed=None)


def _perfect_matching_at(dist: np.ndarray, threshold: float):
    """Perfect matching using only pairs with distance <= threshold, or None."""
    mask = dist <= threshold
    if (mask.sum(axis=1) == 0).any() or (mask.sum(axis=0) == 0).any():
        return None
    graph = csr_matrix(mask)
    match = maximum_bipartite_matching(graph, perm_type="column")
    if (match < 0).any():
        return None
    return match


def bottleneck_match(cloud: PointCloud, grid: PointCloud) -> BottleneckResult:
    """Min-max matching between two equal-size clouds.

    Binary search over the sorted pairwise distances with a bipartite
    perfect-matching feasibility test at each candidate value; the optimum is
    attained at one of the candidates, so the result is exact.
    """
    if cloud.n != grid.n:
        raise ValueError(f"cloud has {cloud.n} points, reference has {grid.n}")
    n = cloud.n
    diff = cloud.points[:, None, :] - grid.points[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    candidates = np.unique(dist)
    lo, hi = 0, len(candidates) - 1
    if _perfect_matching_at(dist, candidates[lo]) is not None:
        hi = lo
    while lo < hi:
        mid = (lo + hi) // 2
        if _perfect_matching_at(dist, candidates[mid]) is not None:
            hi = mid
        else:
            lo = mid + 1
    value = float(candidates[hi])
    match = _perfect_matching_at(dist, value)
    d = cloud.dim
    normalized = value * n ** (1.0 / d) / math.log(n) ** transport_power(d) if n > 1 else 0.0
    match = match.astype(np.int64)
    match.setflags(write=False)
    return BottleneckResult(matching=match, bottleneck_distance=value, normalized=normalized)


def bottleneck_bruteforce(cloud: PointCloud, grid: PointCloud) -> float:
    """Exhaustive n! search; oracle for small instances."""
    if cloud.n != grid.n:
        raise ValueError("size mismatch")
    if cloud.n > 9:
        raise ValueError("exhaustive search limited to n <= 9")
    diff = cloud.points[:, None, :] - grid.points[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=2))
    perms = np.array(list(itertools.permutations(range(cloud.n))))
    vals = dist[np.arange(cloud.n)[None, :], perms].max(axis=1)
    return float(vals.min())


def raw_disagreement(partition: Partition, ground_truth: Partition) -> float:
    """Fraction of vertices whose labels differ, with labels taken as-is."""
    if partition.n != ground_truth.n:
        raise ValueError("partitions cover different vertex sets")
    return float(np.mean(partition.labels != ground_truth.labels))


def misclassification_error(partition: Partition, ground_truth: Partition) -> float:
    """Disagreement fraction minimized over label permutations.

    For K = 2 this is min(raw, 1 - raw); in general the best permutation is
    found from the K x K confusion matrix (K <= 8 enforced).
    """
    if partition.n != ground_truth.n:
        raise ValueError("partitions cover different vertex sets")
    if partition.k != ground_truth.k:
        raise ValueError("partitions have different class counts")
    k = partition.k
    if k > MAX_PERMUTATION_CLASSES:
        raise ValueError(f"permutation minimization limited to K <= {MAX_PERMUTATION_CLASSES}")
    confusion = np.zeros((k, k), dtype=np.int64)
    np.add.at(confusion, (partition.labels, ground_truth.labels), 1)
    best_agree = 0
    for perm in itertools.permutations(range(k)):
        agree = int(confusion[list(perm), range(k)].sum())
        best_agree = max(best_agree, agree)
    return 1.0 - best_agree / partition.n
