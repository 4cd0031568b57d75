"""Cut values, balance terms, balanced-cut objectives and graph total variation.

Conventions used throughout (and relied on by the tests):
  - Cut(Y, Y^c) sums w_ij over ordered pairs with i in Y, j outside, which
    counts each crossing edge exactly once.
  - Class sizes |Y_k| are fractions counts[k] / n.
  - Ratio balance keeps its factor of 2: Bal_R = 2 |Y| |Y^c|.
  - GTV(u) = (1 / (n^2 eps^(d+1))) * sum over ordered pairs of w_ij |u_i - u_j|,
    so GTV(1_Y) = 2 Cut(Y, Y^c) / (n^2 eps^(d+1)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import GeometricGraph

__all__ = [
    "Partition",
    "CutResult",
    "ObjectiveKind",
    "CHEEGER",
    "RATIO",
    "ImproperPartitionError",
    "multiway",
    "cut_value",
    "balance_two_way",
    "objective",
    "graph_total_variation",
    "discrete_balance",
    "normalized_indicator",
]


class ImproperPartitionError(ValueError):
    """A class of the partition is empty; balanced-cut objectives exclude this."""


@dataclass(frozen=True)
class ObjectiveKind:
    """Balanced-cut objective: two-way Cheeger or Ratio, or K-way ratio sum."""

    variant: str  # "cheeger" | "ratio" | "multiway"
    k: int = 2

    def __post_init__(self):
        if self.variant not in ("cheeger", "ratio", "multiway"):
            raise ValueError(f"unknown objective {self.variant!r}")
        if self.variant in ("cheeger", "ratio") and self.k != 2:
            raise ValueError(f"{self.variant} objective requires K = 2")
        if self.variant == "multiway" and self.k < 2:
            raise ValueError("multiway objective requires K >= 2")


CHEEGER = ObjectiveKind("cheeger")
RATIO = ObjectiveKind("ratio")


def multiway(k: int) -> ObjectiveKind:
    return ObjectiveKind("multiway", k)


@dataclass(frozen=True)
class Partition:
    """Assignment of vertices to labels 0..K-1 with cached class counts."""

    labels: np.ndarray
    k: int
    counts: np.ndarray

    @staticmethod
    def from_labels(labels, k: int | None = None) -> "Partition":
        labels = np.asarray(labels, dtype=np.int64)
        if k is None:
            k = int(labels.max()) + 1 if len(labels) else 2
        if k < 2:
            raise ValueError("a partition needs at least two classes")
        if len(labels) and (labels.min() < 0 or labels.max() >= k):
            raise ValueError("labels out of range for K classes")
        counts = np.bincount(labels, minlength=k)
        labels = labels.copy()
        labels.setflags(write=False)
        counts.setflags(write=False)
        return Partition(labels=labels, k=k, counts=counts)

    @property
    def n(self) -> int:
        return len(self.labels)

    def is_proper(self) -> bool:
        return bool((self.counts > 0).all())

    def require_proper(self):
        if not self.is_proper():
            raise ImproperPartitionError(
                f"partition has an empty class (counts {self.counts.tolist()})"
            )


@dataclass(frozen=True)
class CutResult:
    """Objective evaluation; raw_cut counts each crossing edge once (any K)."""

    raw_cut: float
    balance: float  # NaN for multiway (no single balance term)
    objective: float
    rescaled_constant: float  # objective / (n^2 eps^(d+1))


def _check_partition(graph: GeometricGraph, partition: Partition):
    if partition.n != graph.n:
        raise ValueError(f"partition on {partition.n} vertices, graph has {graph.n}")


def cut_value(graph: GeometricGraph, partition: Partition, label: int) -> float:
    """Sum of w_ij over ordered pairs with labels[i] = label != labels[j].

    Each edge leaving the class is counted once; summing over all labels
    counts every crossing edge twice.
    """
    _check_partition(graph, partition)
    if not (0 <= label < partition.k):
        raise ValueError(f"label {label} out of range for K = {partition.k}")
    li = partition.labels[graph.edges_i]
    lj = partition.labels[graph.edges_j]
    crossing = ((li == label) ^ (lj == label))
    return float(graph.edge_weights[crossing].sum())


def _boundary_weight(graph: GeometricGraph, labels: np.ndarray) -> float:
    li = labels[graph.edges_i]
    lj = labels[graph.edges_j]
    return float(graph.edge_weights[li != lj].sum())


def balance_two_way(partition: Partition, kind: ObjectiveKind) -> float:
    """Bal_R = 2 |Y| |Y^c| or Bal_C = min(|Y|, |Y^c|) from class-count fractions."""
    if partition.k != 2 or kind.variant == "multiway":
        raise ValueError("two-way balance requires K = 2 and a two-way objective kind")
    p = partition.counts[0] / partition.n
    q = partition.counts[1] / partition.n
    if kind.variant == "ratio":
        return 2.0 * p * q
    return min(p, q)


def objective(graph: GeometricGraph, partition: Partition, kind: ObjectiveKind) -> CutResult:
    """Balanced-cut objective of a proper partition.

    Two-way: Cut(Y, Y^c) / Bal(Y, Y^c). Multiway: sum_k Cut(Y_k, Y_k^c) / |Y_k|.
    The rescaled constant divides by n^2 eps^(d+1) with d the cloud dimension.
    """
    _check_partition(graph, partition)
    partition.require_proper()
    n = graph.n
    boundary = _boundary_weight(graph, partition.labels)
    if kind.variant == "multiway":
        if partition.k != kind.k:
            raise ValueError(f"partition has K = {partition.k}, objective expects K = {kind.k}")
        total = 0.0
        for k in range(partition.k):
            total += cut_value(graph, partition, k) / (partition.counts[k] / n)
        bal = float("nan")
        obj = total
    else:
        if partition.k != 2:
            raise ValueError("two-way objective on a partition with K != 2")
        bal = balance_two_way(partition, kind)
        obj = boundary / bal
    d = graph.cloud.dim
    rescale = n**2 * graph.epsilon ** (d + 1)
    return CutResult(raw_cut=boundary, balance=bal, objective=obj,
                     rescaled_constant=obj / rescale)


def graph_total_variation(graph: GeometricGraph, u, n: int, epsilon: float, d: int) -> float:
    """GTV of a vertex function: rescaled sum of w_ij |u_i - u_j| over ordered pairs."""
    u = np.asarray(u, dtype=float)
    if len(u) != graph.n:
        raise ValueError("u must be defined on every vertex")
    du = np.abs(u[graph.edges_i] - u[graph.edges_j])
    return 2.0 * float((graph.edge_weights * du).sum()) / (n**2 * epsilon ** (d + 1))


def discrete_balance(u, kind: ObjectiveKind) -> float:
    """Empirical balance of a vertex function.

    Ratio: mean |u - mean(u)|. Cheeger: min over c of mean |u - c|, attained
    at any median; the lower median is used, which does not change the value.
    """
    u = np.asarray(u, dtype=float)
    n = len(u)
    if kind.variant == "ratio":
        return float(np.abs(u - u.mean()).mean())
    if kind.variant == "cheeger":
        s = np.sort(u)
        c = s[(n - 1) // 2]  # lower median
        return float(np.abs(u - c).mean())
    raise ValueError("discrete balance is defined for the two-way objectives")


def normalized_indicator(partition: Partition, kind: ObjectiveKind) -> np.ndarray:
    """Indicator of the label-1 class divided by its empirical balance.

    GTV of the result equals 2 * objective / (n^2 eps^(d+1)), which is the
    function-space form of the balanced-cut problem.
    """
    if partition.k != 2:
        raise ValueError("normalized indicator requires a two-way partition")
    u = (partition.labels == 1).astype(float)
    b = discrete_balance(u, kind)
    if b <= 0.0:
        raise ImproperPartitionError("normalized indicator needs a nonzero balance")
    return u / b
