from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .catalog import MetricId, Orientation, RecomputePolicy, StopReason, is_locality_eligible
from .edge_metrics import SCORERS, EdgeScore, EdgeScorer
from .errors import DeadlockStopError, InvalidConfigError, KNotReachedError, PartitionMismatchError
from .graph import NodeId

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from .graph import Edge, Graph

logger = logging.getLogger(__name__)

# relative gap under which two scores count as equal and the edge order decides
TIE_REL_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class RunConfig:
    """
    Parameters of one divisive run.

    Attributes:
        metric: Edge scorer to rank edges with.
        target_k: Stop once the graph has this many components (>= 2). None
            runs until no removable edge is left.
        recompute_policy: FULL rescores every remaining edge after each removal;
            NEIGHBORHOOD rescores only edges within two hops of the removed
            edge, which is exact for the locality-eligible metrics.

    """

    metric: MetricId
    target_k: int | None = None
    recompute_policy: RecomputePolicy = RecomputePolicy.FULL

    def __post_init__(self) -> None:
        if self.target_k is not None and self.target_k < 2:  # noqa: PLR2004
            msg = f"target_k must be at least 2, got {self.target_k}"
            raise InvalidConfigError(msg)
        if self.recompute_policy is RecomputePolicy.NEIGHBORHOOD and not is_locality_eligible(self.metric):
            msg = f"NEIGHBORHOOD rescoring is not exact for {self.metric.value}"
            raise InvalidConfigError(msg)


@dataclass(frozen=True, slots=True)
class RemovalRecord:
    """One step of a divisive run: the edge removed, its score, and the component count after."""

    step: int
    edge: Edge
    score: float
    components_after: int


@dataclass(frozen=True, slots=True)
class Partition:
    """
    Assignment of every node to exactly one community.

    Community ids are dense, 0..community_count-1, and numbered in order of
    their smallest member node. Build instances with from_assignment() to get
    that canonical numbering from arbitrary labels.
    """

    assignment: tuple[int, ...]
    community_count: int

    @classmethod
    def from_assignment(cls, labels: Iterable[object]) -> Partition:
        """Build a partition from per-node community labels of any hashable type."""
        canonical: dict[object, int] = {}
        assignment = tuple(canonical.setdefault(label, len(canonical)) for label in labels)
        return cls(assignment, len(canonical))

    @classmethod
    def from_communities(cls, communities: Iterable[Iterable[int]], node_count: int) -> Partition:
        """
        Build a partition from explicit node groups.

        Raises:
            PartitionMismatchError: If the groups do not cover 0..node_count-1 exactly once.

        """
        labels: list[int | None] = [None] * node_count
        for index, members in enumerate(communities):
            for node in members:
                if not 0 <= node < node_count or labels[node] is not None:
                    msg = f"node {node} is out of range or assigned twice"
                    raise PartitionMismatchError(msg)
                labels[node] = index
        if any(label is None for label in labels):
            msg = "communities do not cover every node"
            raise PartitionMismatchError(msg)
        return cls.from_assignment(labels)

    def __len__(self) -> int:
        return len(self.assignment)

    def communities(self) -> list[list[NodeId]]:
        """Return the sorted member list of each community, in id order."""
        groups: list[list[NodeId]] = [[] for _ in range(self.community_count)]
        for node, community in enumerate(self.assignment):
            groups[community].append(NodeId(node))
        return groups


@dataclass(frozen=True, slots=True)
class Dendrogram:
    """
    Ordered log of a divisive run.

    Attributes:
        base_graph: The graph before any removal.
        config: The run parameters.
        removals: Removal records in order.
        initial_components: Component count of base_graph.
        final_components: Component count after the last removal.
        stop_reason: Why the run ended.

    """

    base_graph: Graph
    config: RunConfig
    removals: tuple[RemovalRecord, ...]
    initial_components: int
    final_components: int
    stop_reason: StopReason

    @property
    def remaining_edges(self) -> int:
        """Return the number of edges left when the run stopped."""
        return self.base_graph.edge_count - len(self.removals)


def _select(scores: dict[Edge, EdgeScore], orientation: Orientation) -> EdgeScore | None:
    """
    Pick the removal candidate.

    Scans eligible edges in lexicographic order and only replaces the current
    best on a strict improvement beyond TIE_REL_TOL, so among equal scores the
    smallest edge wins.
    """
    best: EdgeScore | None = None
    for edge in sorted(scores):
        score = scores[edge]
        if score.excluded:
            continue
        if best is None:
            best = score
            continue
        if math.isclose(score.value, best.value, rel_tol=TIE_REL_TOL):
            continue
        better = score.value > best.value if orientation is Orientation.REMOVE_MAX else score.value < best.value
        if better:
            best = score
    return best


def _still_connected(graph: Graph, u: NodeId, v: NodeId) -> bool:
    seen = {u}
    queue = deque((u,))
    while queue:
        x = queue.popleft()
        for y in graph.neighbor_set(x):
            if y == v:
                return True
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return False


def _affected_edges(
    scores: dict[Edge, EdgeScore],
    current: Graph,
    removed: Edge,
    touched: set[NodeId],
    *,
    scorer: EdgeScorer,
    policy: RecomputePolicy,
) -> list[Edge]:
    if not scorer.local:
        u, v = removed
        component = set(current.component_of(u)) | set(current.component_of(v))
        return [edge for edge in scores if edge[0] in component]
    if policy is RecomputePolicy.FULL:
        return list(scores)
    return [edge for edge in scores if edge[0] in touched or edge[1] in touched]


def run_divisive(graph: Graph, config: RunConfig, scorer: EdgeScorer | None = None) -> Dendrogram:
    """
    Run the hierarchical divisive procedure.

    Each iteration scores the current edges, removes the extreme one
    (highest for betweenness, lowest otherwise, excluded edges skipped, ties
    to the lexicographically smallest edge), and records the resulting
    component count. Scores are refreshed on the modified graph after every
    removal. Betweenness is only rescored inside the component that lost the
    edge, since scores elsewhere cannot change.

    Args:
        graph: The graph to split. Must have at least one edge.
        config: Run parameters.
        scorer: Scorer to use instead of the one registered for config.metric.

    Returns:
        The dendrogram of the run.

    Raises:
        InvalidConfigError: The graph has no edges, target_k exceeds the node
            count, or NEIGHBORHOOD rescoring was requested for a non-local scorer.
        DeadlockStopError: Only excluded edges remain before the target is
            reached. The partial dendrogram is attached to the error.

    """
    if graph.edge_count == 0:
        msg = "the divisive procedure needs a graph with at least one edge"
        raise InvalidConfigError(msg)
    if config.target_k is not None and config.target_k > graph.node_count:
        msg = f"target_k={config.target_k} exceeds the node count {graph.node_count}"
        raise InvalidConfigError(msg)
    if scorer is None:
        scorer = SCORERS[config.metric]
    if config.recompute_policy is RecomputePolicy.NEIGHBORHOOD and not scorer.local:
        msg = f"NEIGHBORHOOD rescoring is not exact for {scorer.metric.value}"
        raise InvalidConfigError(msg)

    initial = graph.connected_components().component_count
    components = initial
    current = graph
    scores = scorer.score_edges(graph, list(graph.edges()))
    removals: list[RemovalRecord] = []
    logger.info(
        "Divisive run: metric=%s target_k=%s policy=%s on %d nodes / %d edges",
        config.metric.value,
        config.target_k,
        config.recompute_policy.value,
        graph.node_count,
        graph.edge_count,
    )

    def result(reason: StopReason) -> Dendrogram:
        return Dendrogram(graph, config, tuple(removals), initial, components, reason)

    while True:
        if config.target_k is not None and components >= config.target_k:
            reason = StopReason.TARGET_REACHED
            break
        if not scores:
            reason = StopReason.EXHAUSTED
            break
        chosen = _select(scores, scorer.orientation)
        if chosen is None:
            partial = result(StopReason.DEADLOCK)
            logger.warning(
                "Deadlock: %d remaining edges are all excluded (%d components)",
                len(scores),
                components,
            )
            raise DeadlockStopError(partial)

        u, v = chosen.edge
        touched = {u, v} | current.neighbor_set(u) | current.neighbor_set(v)
        current = current.without_edges([chosen.edge])
        del scores[chosen.edge]
        if not _still_connected(current, u, v):
            components += 1
        removals.append(RemovalRecord(len(removals) + 1, chosen.edge, chosen.value, components))
        logger.debug("Removed %s score=%r components=%d", chosen.edge, chosen.value, components)

        affected = _affected_edges(
            scores,
            current,
            chosen.edge,
            touched,
            scorer=scorer,
            policy=config.recompute_policy,
        )
        if affected:
            scores.update(scorer.score_edges(current, affected))

    logger.info("Divisive run stopped (%s) after %d removals at %d components", reason.value, len(removals), components)
    return result(reason)


def _prefix_for(dendrogram: Dendrogram, k: int) -> Sequence[RemovalRecord]:
    if k < dendrogram.initial_components or k > dendrogram.final_components:
        raise KNotReachedError(k, dendrogram.final_components)
    if k == dendrogram.initial_components:
        return ()
    for index, record in enumerate(dendrogram.removals):
        if record.components_after == k:
            return dendrogram.removals[: index + 1]
    raise KNotReachedError(k, dendrogram.final_components)


def partition_at_k(dendrogram: Dendrogram, k: int) -> Partition:
    """
    Community structure at the moment the run first reached k components.

    Args:
        dendrogram: A recorded run.
        k: Community count, between the initial and final component counts.

    Returns:
        The partition with exactly k communities.

    Raises:
        KNotReachedError: If the run never had exactly k components.

    """
    prefix = _prefix_for(dendrogram, k)
    graph = dendrogram.base_graph.without_edges(record.edge for record in prefix)
    labeling = graph.connected_components()
    return Partition(labeling.component_ids, labeling.component_count)
