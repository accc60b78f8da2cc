from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .divisive import partition_at_k
from .errors import (
    InsufficientCurveError,
    InvalidConfigError,
    KNotReachedError,
    PartitionMismatchError,
    UndefinedModularityError,
)

if TYPE_CHECKING:
    from collections.abc import Iterator

    from numpy.typing import NDArray

    from .divisive import Dendrogram, Partition
    from .graph import Graph

logger = logging.getLogger(__name__)

# absolute gap under which two elbow drops are treated as equal
ELBOW_TIE_TOL = 1e-12


def modularity(graph: Graph, partition: Partition) -> float:
    """
    Newman modularity Q = Σ_r (e_rr - a_r²).

    e_rr is the fraction of edges with both endpoints in community r and
    a_r the fraction of edge ends (degree mass) attached to r.

    Args:
        graph: The graph the partition was computed on.
        partition: One community id per node of the graph.

    Returns:
        Q, in [-1, 1].

    Raises:
        UndefinedModularityError: If the graph has no edges.
        PartitionMismatchError: If the partition does not cover the graph's nodes.

    """
    if len(partition) != graph.node_count:
        msg = f"partition covers {len(partition)} nodes, graph has {graph.node_count}"
        raise PartitionMismatchError(msg)
    m = graph.edge_count
    if m == 0:
        msg = "modularity is undefined on a graph without edges"
        raise UndefinedModularityError(msg)

    labels = np.asarray(partition.assignment, dtype=np.int64)
    size = partition.community_count
    degrees = np.fromiter((graph.degree(u) for u in graph.nodes), dtype=np.float64, count=graph.node_count)
    intra = np.zeros(size, dtype=np.float64)
    for u, v in graph.edges():
        if labels[u] == labels[v]:
            intra[labels[u]] += 1.0
    a = np.bincount(labels, weights=degrees, minlength=size) / (2.0 * m)
    return float(np.sum(intra / m - a * a))


def _sizes(partition: Partition) -> NDArray[np.int64]:
    return np.bincount(np.asarray(partition.assignment, dtype=np.int64), minlength=partition.community_count)


def _entropy_of_counts(counts: NDArray[np.int64], total: int) -> float:
    p = counts[counts > 0] / total
    return float(-np.sum(p * np.log2(p)))


def entropy(partition: Partition) -> float:
    """
    Shannon entropy of the community-size distribution, in bits.

    Raises:
        PartitionMismatchError: If the partition is empty.

    """
    if len(partition) == 0:
        msg = "entropy of an empty partition"
        raise PartitionMismatchError(msg)
    return max(0.0, _entropy_of_counts(_sizes(partition), len(partition)))


@dataclass(frozen=True, slots=True)
class ContingencyTable:
    """
    Overlap counts between two partitions of the same nodes.

    Attributes:
        counts: counts[i, j] = |X_i ∩ Y_j|.
        total: Number of nodes.

    """

    counts: NDArray[np.int64]
    total: int

    @property
    def row_sums(self) -> NDArray[np.int64]:
        """Return |X_i| for every cluster of the first partition."""
        return self.counts.sum(axis=1)

    @property
    def column_sums(self) -> NDArray[np.int64]:
        """Return |Y_j| for every cluster of the second partition."""
        return self.counts.sum(axis=0)


def contingency(x: Partition, y: Partition) -> ContingencyTable:
    """
    Build the contingency table of two partitions.

    Raises:
        PartitionMismatchError: If the partitions cover different node counts.

    """
    if len(x) != len(y):
        msg = f"partitions cover different node sets ({len(x)} vs {len(y)} nodes)"
        raise PartitionMismatchError(msg)
    counts = np.zeros((x.community_count, y.community_count), dtype=np.int64)
    np.add.at(counts, (np.asarray(x.assignment, dtype=np.int64), np.asarray(y.assignment, dtype=np.int64)), 1)
    return ContingencyTable(counts, len(x))


def _mutual_information(table: ContingencyTable) -> float:
    n = table.total
    if n == 0:
        return 0.0
    joint = table.counts / n
    px = table.row_sums / n
    py = table.column_sums / n
    rows, cols = np.nonzero(table.counts)
    p = joint[rows, cols]
    return max(0.0, float(np.sum(p * np.log2(p / (px[rows] * py[cols])))))


def mutual_information(x: Partition, y: Partition) -> float:
    """
    Mutual information J(X, Y) between two partitions, in bits.

    Cells with no overlap contribute nothing.

    Raises:
        PartitionMismatchError: If the partitions cover different node sets.

    """
    return _mutual_information(contingency(x, y))


def nmi(x: Partition, y: Partition) -> float:
    """
    Normalized mutual information 2J / (H(X) + H(Y)), in [0, 1].

    Two single-community partitions of the same nodes are identical and
    score 1.

    Raises:
        PartitionMismatchError: If the partitions cover different node sets.

    """
    table = contingency(x, y)
    if table.total == 0:
        msg = "NMI of empty partitions"
        raise PartitionMismatchError(msg)
    hx = _entropy_of_counts(table.row_sums, table.total)
    hy = _entropy_of_counts(table.column_sums, table.total)
    if hx + hy == 0.0:
        return 1.0
    value = 2.0 * _mutual_information(table) / (hx + hy)
    return min(1.0, max(0.0, value))


@dataclass(frozen=True, slots=True)
class ModularityCurve:
    """Modularity of one dendrogram at increasing community counts."""

    points: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        ks = [k for k, _ in self.points]
        if any(b <= a for a, b in zip(ks, ks[1:], strict=False)):
            msg = "curve k values must be strictly increasing"
            raise ValueError(msg)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[tuple[int, float]]:
        return iter(self.points)

    @property
    def ks(self) -> tuple[int, ...]:
        """Return the community counts of the curve."""
        return tuple(k for k, _ in self.points)

    @property
    def values(self) -> tuple[float, ...]:
        """Return the modularity values of the curve."""
        return tuple(q for _, q in self.points)


def modularity_sweep(graph: Graph, dendrogram: Dendrogram, k_max: int, k_min: int = 2) -> ModularityCurve:
    """
    Modularity of the dendrogram's partitions for k = k_min..min(k_max, final).

    Community counts below the dendrogram's initial component count cannot be
    replayed and are skipped. ``k_min=1`` adds the unsplit graph (Q = 0) as a
    baseline point.

    Args:
        graph: The graph the dendrogram was built on.
        dendrogram: A recorded run.
        k_max: Largest community count to evaluate.
        k_min: Smallest community count to evaluate.

    Returns:
        The curve, possibly with a single point.

    Raises:
        KNotReachedError: If the dendrogram never reaches k_min communities.

    """
    start = max(k_min, dendrogram.initial_components)
    stop = min(k_max, dendrogram.final_components)
    if stop < start:
        raise KNotReachedError(k_min, dendrogram.final_components)
    points = tuple((k, modularity(graph, partition_at_k(dendrogram, k))) for k in range(start, stop + 1))
    logger.debug("Modularity sweep over k=%d..%d", start, stop)
    return ModularityCurve(points)


def elbow_select(curve: ModularityCurve, window: int) -> tuple[int, float]:
    """
    Sliding-window elbow on a modularity curve.

    For every recorded k, drop(k) = (Q(k) - Q(k-w)) - (Q(k+w) - Q(k)), the gain
    over the preceding window minus the gain over the following one. Q is
    linearly interpolated between recorded points and held at the end values
    outside the curve. The k with the
    largest drop wins, the smallest k on ties.

    Args:
        curve: A curve with at least two points.
        window: Window size w (typically 2, 3 or 5).

    Returns:
        (k, Q(k)) of the selected point.

    Raises:
        InsufficientCurveError: If the curve has fewer than two points.
        InvalidConfigError: If the window is not positive.

    """
    if len(curve) < 2:  # noqa: PLR2004
        msg = f"the elbow selector needs at least 2 curve points, got {len(curve)}"
        raise InsufficientCurveError(msg)
    if window < 1:
        msg = f"window must be positive, got {window}"
        raise InvalidConfigError(msg)

    ks = np.asarray(curve.ks, dtype=np.float64)
    qs = np.asarray(curve.values, dtype=np.float64)
    # np.interp holds the end values outside the curve's domain
    before = np.interp(ks - window, ks, qs)
    after = np.interp(ks + window, ks, qs)
    drops = (qs - before) - (after - qs)

    best_index, best_drop = 0, -math.inf
    for index, drop in enumerate(drops.tolist()):
        if drop > best_drop + ELBOW_TIE_TOL:
            best_index, best_drop = index, drop
    return curve.points[best_index]


def best_point(curve: ModularityCurve) -> tuple[int, float]:
    """
    Return the (k, Q) with the highest modularity, the smallest k on ties.

    Raises:
        InsufficientCurveError: If the curve is empty.

    """
    if len(curve) == 0:
        msg = "an empty curve has no best point"
        raise InsufficientCurveError(msg)
    best_k, best_q = curve.points[0]
    for k, value in curve.points[1:]:
        if value > best_q:
            best_k, best_q = k, value
    return best_k, best_q
