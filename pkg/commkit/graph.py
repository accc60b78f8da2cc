from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import TYPE_CHECKING, NewType

from .errors import EdgeNotFoundError, InvalidPairError, NodeNotFoundError

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator

logger = logging.getLogger(__name__)

NodeId = NewType("NodeId", int)
Edge = tuple[NodeId, NodeId]


def make_edge(u: int, v: int) -> Edge:
    """Return the canonical (smaller id, larger id) form of an undirected pair."""
    if u <= v:
        return (NodeId(u), NodeId(v))
    return (NodeId(v), NodeId(u))


@dataclass(frozen=True, slots=True)
class ComponentLabeling:
    """
    Connected-component assignment of every node.

    Attributes:
        component_ids: component id per node, indexed by NodeId. The component
            holding the smallest NodeId gets id 0, the next one id 1, and so on.
        component_count: number of distinct components.

    """

    component_ids: tuple[int, ...]
    component_count: int

    def members(self) -> list[list[NodeId]]:
        """Return the sorted node list of each component, in component-id order."""
        groups: list[list[NodeId]] = [[] for _ in range(self.component_count)]
        for node, cid in enumerate(self.component_ids):
            groups[cid].append(NodeId(node))
        return groups


class Graph:
    """
    Immutable undirected simple graph.

    Nodes are dense integer ids ``0..n-1``; the original labels are kept in a
    label table so outputs can be written with the names found in the input.
    Instances are never mutated after construction. Edge removal returns a new
    graph that shares the untouched neighbour sets with its parent.

    Example:
        >>> g = Graph.from_edges([("1", "2"), ("2", "3")])
        >>> g.degree(g.node_of("2"))
        2

    """

    __slots__ = ("_adjacency", "_edge_count", "_index", "_labels")

    def __init__(self, labels: Iterable[str], adjacency: Iterable[frozenset[NodeId]]) -> None:
        """
        Build a graph from a label table and symmetric neighbour sets.

        Prefer GraphBuilder or Graph.from_edges(); this constructor trusts its
        input to be symmetric and loop-free.

        Args:
            labels: Label of each node, indexed by NodeId.
            adjacency: Neighbour set of each node, indexed by NodeId.

        """
        self._labels: tuple[str, ...] = tuple(labels)
        self._adjacency: tuple[frozenset[NodeId], ...] = tuple(adjacency)
        if len(self._labels) != len(self._adjacency):
            msg = "labels and adjacency must have the same length"
            raise ValueError(msg)
        self._edge_count: int = sum(len(nbrs) for nbrs in self._adjacency) // 2
        self._index: dict[str, NodeId] | None = None

    @classmethod
    def from_edges(cls, pairs: Iterable[tuple[str, str]], isolated: Iterable[str] = ()) -> Graph:
        """
        Build a graph from label pairs, dropping self-loops and duplicates.

        Args:
            pairs: Edges given as (label, label).
            isolated: Extra labels to add as nodes, in order, before the edges.

        Returns:
            The graph, with node ids assigned in first-seen order.

        """
        builder = GraphBuilder()
        for label in isolated:
            _ = builder.add_node(label)
        for a, b in pairs:
            builder.add_edge(a, b)
        return builder.build()

    def __repr__(self) -> str:
        return f"Graph(nodes={self.node_count}, edges={self.edge_count})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._labels == other._labels and self._adjacency == other._adjacency

    def __hash__(self) -> int:
        return hash((self._labels, self._adjacency))

    def __getstate__(self) -> tuple[tuple[str, ...], tuple[frozenset[NodeId], ...]]:
        return (self._labels, self._adjacency)

    def __setstate__(self, state: tuple[tuple[str, ...], tuple[frozenset[NodeId], ...]]) -> None:
        self._labels, self._adjacency = state
        self._edge_count = sum(len(nbrs) for nbrs in self._adjacency) // 2
        self._index = None

    @property
    def node_count(self) -> int:
        """Return |V|."""
        return len(self._adjacency)

    @property
    def edge_count(self) -> int:
        """Return |E|."""
        return self._edge_count

    @property
    def nodes(self) -> range:
        """Return all node ids in ascending order."""
        return range(len(self._adjacency))

    @property
    def labels(self) -> tuple[str, ...]:
        """Return the label table, indexed by NodeId."""
        return self._labels

    def edges(self) -> Iterator[Edge]:
        """Yield every edge once as (u, v) with u < v, in lexicographic order."""
        for u, nbrs in enumerate(self._adjacency):
            for v in sorted(nbrs):
                if u < v:
                    yield (NodeId(u), v)

    def label(self, u: NodeId) -> str:
        """Return the original label of a node."""
        self._check_node(u)
        return self._labels[u]

    def node_of(self, label: str) -> NodeId:
        """
        Return the node id carrying a label.

        Raises:
            NodeNotFoundError: If no node has this label.

        """
        if self._index is None:
            self._index = {name: NodeId(i) for i, name in enumerate(self._labels)}
        try:
            return self._index[label]
        except KeyError:
            raise NodeNotFoundError(label) from None

    def _check_node(self, u: int) -> None:
        if not (isinstance(u, int) and 0 <= u < len(self._adjacency)):
            raise NodeNotFoundError(u)

    def _check_pair(self, u: int, v: int) -> None:
        self._check_node(u)
        self._check_node(v)
        if u == v:
            msg = f"Pair queries need two distinct nodes, got ({u}, {v})"
            raise InvalidPairError(msg)

    def has_edge(self, u: NodeId, v: NodeId) -> bool:
        """Return True if (u, v) is an edge. Unknown nodes raise NodeNotFoundError."""
        self._check_node(u)
        self._check_node(v)
        return v in self._adjacency[u]

    def neighbor_set(self, u: NodeId) -> frozenset[NodeId]:
        """Return Γ(u) as a frozenset (no copy)."""
        self._check_node(u)
        return self._adjacency[u]

    def degree(self, u: NodeId) -> int:
        """
        Return the degree k_u = |Γ(u)|.

        Raises:
            NodeNotFoundError: If u is not a node of the graph.

        """
        self._check_node(u)
        return len(self._adjacency[u])

    def neighbors(self, u: NodeId) -> tuple[NodeId, ...]:
        """
        Return Γ(u) sorted ascending.

        Raises:
            NodeNotFoundError: If u is not a node of the graph.

        """
        self._check_node(u)
        return tuple(sorted(self._adjacency[u]))

    def common_neighborhood(self, u: NodeId, v: NodeId) -> tuple[NodeId, ...]:
        """
        Return Γ(u) ∩ Γ(v) sorted ascending.

        Raises:
            NodeNotFoundError: If u or v is not a node of the graph.
            InvalidPairError: If u == v.

        """
        self._check_pair(u, v)
        return tuple(sorted(self._adjacency[u] & self._adjacency[v]))

    def triangles_on_edge(self, u: NodeId, v: NodeId) -> int:
        """
        Return the number of triangles through edge (u, v).

        Raises:
            NodeNotFoundError: If u or v is not a node of the graph.
            EdgeNotFoundError: If (u, v) is not an edge.

        """
        self._check_node(u)
        self._check_node(v)
        if v not in self._adjacency[u]:
            raise EdgeNotFoundError(u, v)
        return len(self._adjacency[u] & self._adjacency[v])

    def connected_components(self) -> ComponentLabeling:
        """
        Label every node with its connected component.

        Components are numbered in order of their smallest node id, so the
        labeling is deterministic.

        Returns:
            The component labeling.

        """
        ids = [-1] * len(self._adjacency)
        count = 0
        for start in range(len(self._adjacency)):
            if ids[start] >= 0:
                continue
            ids[start] = count
            queue = deque((start,))
            while queue:
                x = queue.popleft()
                for y in self._adjacency[x]:
                    if ids[y] < 0:
                        ids[y] = count
                        queue.append(y)
            count += 1
        return ComponentLabeling(tuple(ids), count)

    def component_of(self, u: NodeId) -> list[NodeId]:
        """Return the nodes reachable from u (u included), sorted ascending."""
        dist = self.shortest_path_lengths(u)
        return [node for node, d in dist.items() if d is not None]

    def shortest_path_lengths(self, source: NodeId) -> dict[NodeId, int | None]:
        """
        Breadth-first hop distances from a source node.

        Args:
            source: Start node.

        Returns:
            Distance for every node of the graph, keyed in node order. Nodes in
            another component map to None.

        Raises:
            NodeNotFoundError: If source is not a node of the graph.

        """
        self._check_node(source)
        dist = [-1] * len(self._adjacency)
        dist[source] = 0
        queue = deque((source,))
        while queue:
            x = queue.popleft()
            for y in self._adjacency[x]:
                if dist[y] < 0:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return {NodeId(i): (d if d >= 0 else None) for i, d in enumerate(dist)}

    def without_edges(self, edges: Iterable[tuple[int, int]]) -> Graph:
        """
        Return a copy of the graph with the given edges removed.

        Neighbour sets of untouched nodes are shared with this graph.

        Raises:
            EdgeNotFoundError: If one of the edges is not present.

        """
        adjacency = list(self._adjacency)
        for u, v in edges:
            self._check_node(u)
            self._check_node(v)
            if v not in adjacency[u]:
                raise EdgeNotFoundError(u, v)
            adjacency[u] = adjacency[u] - {v}
            adjacency[v] = adjacency[v] - {u}
        graph = Graph.__new__(Graph)
        graph._labels = self._labels
        graph._adjacency = tuple(adjacency)
        graph._edge_count = sum(len(nbrs) for nbrs in adjacency) // 2
        graph._index = self._index
        return graph


class GraphBuilder:
    """
    Incremental graph construction shared by the parsers.

    Labels get dense ids in first-seen order. Self-loops and repeated edges are
    dropped and counted rather than rejected.
    """

    def __init__(self) -> None:
        self._ids: dict[str, NodeId] = {}
        self._labels: list[str] = []
        self._adjacency: list[set[NodeId]] = []
        self.dropped_self_loops: int = 0
        self.dropped_duplicate_edges: int = 0

    def __contains__(self, label: object) -> bool:
        return label in self._ids

    @property
    def node_count(self) -> int:
        """Return the number of nodes added so far."""
        return len(self._labels)

    def add_node(self, label: str) -> NodeId:
        """Add a node if its label is new and return its id."""
        node = self._ids.get(label)
        if node is None:
            node = NodeId(len(self._labels))
            self._ids[label] = node
            self._labels.append(label)
            self._adjacency.append(set())
        return node

    def add_edge(self, a: str, b: str) -> None:
        """
        Add an undirected edge between two labels, creating nodes as needed.

        A self-loop still creates its node; the loop itself is dropped.
        """
        u = self.add_node(a)
        v = self.add_node(b)
        if u == v:
            self.dropped_self_loops += 1
            return
        if v in self._adjacency[u]:
            self.dropped_duplicate_edges += 1
            return
        self._adjacency[u].add(v)
        self._adjacency[v].add(u)

    def build(self) -> Graph:
        """Freeze the accumulated nodes and edges into a Graph."""
        if self.dropped_self_loops:
            logger.warning("Dropped %d self-loop(s)", self.dropped_self_loops)
        if self.dropped_duplicate_edges:
            logger.warning("Dropped %d duplicate edge(s)", self.dropped_duplicate_edges)
        return Graph(self._labels, (frozenset(nbrs) for nbrs in self._adjacency))
