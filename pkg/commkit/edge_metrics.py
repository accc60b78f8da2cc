from __future__ import annotations

import logging
import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .catalog import MetricId, Orientation, get_orientation, is_locality_eligible
from .errors import EmptyGraphError
from .graph import Edge, Graph, NodeId, make_edge

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Sequence

    from numpy.typing import NDArray

logger = logging.getLogger(__name__)

EIGENVECTOR_TOLERANCE = 1e-10
EIGENVECTOR_MAX_ITERATIONS = 10_000


@dataclass(frozen=True, slots=True)
class EdgeScore:
    """
    Score of one edge under one metric.

    Attributes:
        edge: The scored edge, smaller endpoint first.
        value: The score. NaN when the edge is excluded.
        excluded: True when the metric is undefined on this edge (Radicchi
            pendant edges) and the edge must never be selected for removal.

    """

    edge: Edge
    value: float
    excluded: bool = False


@dataclass(frozen=True, slots=True)
class GraphStats:
    """Descriptive statistics of a network (the columns of the features table)."""

    node_count: int
    edge_count: int
    degree_avg: float
    clustering_coef_avg: float
    avg_path_length: float
    closeness_avg: float
    eigenvector_avg: float
    betweenness_avg: float
    connected: bool


# Betweenness


def _single_source_credit(
    adjacency: Sequence[tuple[NodeId, ...]],
    edge_index: dict[Edge, int],
    source: int,
) -> tuple[list[float], list[float]]:
    """
    Shortest-path counting from one source followed by dependency back-propagation.

    Returns the credit every edge and every node receives from paths that
    start at the source (ordered pairs, endpoints excluded for nodes).
    """
    n = len(adjacency)
    dist = [-1] * n
    sigma = [0] * n
    preds: list[list[int]] = [[] for _ in range(n)]
    order: list[int] = []
    dist[source] = 0
    sigma[source] = 1
    queue = deque((source,))
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in adjacency[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                preds[w].append(v)

    delta = [0.0] * n
    edge_credit = [0.0] * len(edge_index)
    node_credit = [0.0] * n
    for w in reversed(order):
        coefficient = (1.0 + delta[w]) / sigma[w]
        for v in preds[w]:
            credit = sigma[v] * coefficient
            edge_credit[edge_index[make_edge(v, w)]] += credit
            delta[v] += credit
        if w != source:
            node_credit[w] = delta[w]
    return edge_credit, node_credit


def _credit_batch(graph: Graph, sources: Sequence[int]) -> list[tuple[list[float], list[float]]]:
    adjacency = [graph.neighbors(NodeId(u)) for u in graph.nodes]
    edge_index = {edge: i for i, edge in enumerate(graph.edges())}
    return [_single_source_credit(adjacency, edge_index, s) for s in sources]


def _betweenness_totals(
    graph: Graph,
    sources: Sequence[int],
    workers: int,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """
    Sum per-source credits in ascending source order.

    Credits are added one source at a time in the same order whatever the
    number of workers, so the totals are bit-identical across worker counts.
    """
    edge_total = np.zeros(graph.edge_count, dtype=np.float64)
    node_total = np.zeros(graph.node_count, dtype=np.float64)
    ordered = sorted(sources)
    if workers <= 1 or len(ordered) < 2 * workers:
        batches = [_credit_batch(graph, ordered)]
    else:
        size = math.ceil(len(ordered) / workers)
        chunks = [ordered[i : i + size] for i in range(0, len(ordered), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            batches = list(pool.map(_credit_batch, [graph] * len(chunks), chunks))
    for batch in batches:
        for edge_credit, node_credit in batch:
            edge_total += np.asarray(edge_credit, dtype=np.float64)
            node_total += np.asarray(node_credit, dtype=np.float64)
    # every unordered pair was counted from both of its ends
    return edge_total / 2.0, node_total / 2.0


def edge_betweenness(graph: Graph, *, workers: int = 1) -> dict[Edge, EdgeScore]:
    """
    Edge betweenness of every edge.

    The score of e is the sum, over unordered node pairs {u, v}, of the share
    of shortest u-v paths that run through e. Pairs in different components
    contribute nothing. Computed with one BFS and one dependency
    back-propagation per source, O(|V|·|E|) overall.

    Args:
        graph: The graph to score.
        workers: Number of processes sharing the sources. The result does not
            depend on this value.

    Returns:
        Score of every edge, keyed by (u, v) with u < v.

    """
    return _betweenness_of(graph, graph.nodes, workers=workers)


def _betweenness_of(graph: Graph, sources: Iterable[int], *, workers: int = 1) -> dict[Edge, EdgeScore]:
    edge_total, _ = _betweenness_totals(graph, list(sources), workers)
    return {edge: EdgeScore(edge, float(edge_total[i])) for i, edge in enumerate(graph.edges())}


def node_betweenness(graph: Graph, *, workers: int = 1) -> dict[NodeId, float]:
    """
    Unnormalized node betweenness over unordered pairs, endpoints excluded.

    Args:
        graph: The graph to score.
        workers: Number of processes sharing the sources.

    Returns:
        Betweenness of every node.

    """
    _, node_total = _betweenness_totals(graph, list(graph.nodes), workers)
    return {NodeId(i): float(value) for i, value in enumerate(node_total)}


# Radicchi


def radicchi_coefficient(graph: Graph, u: NodeId, v: NodeId) -> EdgeScore:
    """
    Edge clustering coefficient c_uv = (z_uv + 1) / min(k_u - 1, k_v - 1).

    z_uv is the number of triangles through the edge. When either endpoint
    has degree 1 the denominator vanishes; the edge is then marked excluded
    and its value is NaN.

    Raises:
        NodeNotFoundError: If u or v is not a node.
        EdgeNotFoundError: If (u, v) is not an edge.

    """
    triangles = graph.triangles_on_edge(u, v)
    edge = make_edge(u, v)
    denominator = min(graph.degree(u), graph.degree(v)) - 1
    if denominator == 0:
        return EdgeScore(edge, math.nan, excluded=True)
    return EdgeScore(edge, (triangles + 1) / denominator)


# Local similarity indices


def _overlap(graph: Graph, u: NodeId, v: NodeId) -> tuple[tuple[NodeId, ...], int, int]:
    common = graph.common_neighborhood(u, v)
    return common, graph.degree(u), graph.degree(v)


def score_cn(graph: Graph, u: NodeId, v: NodeId) -> float:
    """Common neighbours: |Γu ∩ Γv|."""
    return float(len(graph.common_neighborhood(u, v)))


def score_aa(graph: Graph, u: NodeId, v: NodeId) -> float:
    """Adamic-Adar: sum of 1 / ln|Γz| over common neighbours z."""
    common = graph.common_neighborhood(u, v)
    # a common neighbour of two distinct nodes has degree >= 2, so ln > 0
    return sum((1.0 / math.log(graph.degree(z)) for z in common), start=0.0)


def score_ra(graph: Graph, u: NodeId, v: NodeId) -> float:
    """Resource allocation: sum of 1 / |Γz| over common neighbours z."""
    common = graph.common_neighborhood(u, v)
    return sum((1.0 / graph.degree(z) for z in common), start=0.0)


def score_pa(graph: Graph, u: NodeId, v: NodeId) -> float:
    """Preferential attachment: |Γu|·|Γv|."""
    _, ku, kv = _overlap(graph, u, v)
    return float(ku * kv)


def score_jaccard(graph: Graph, u: NodeId, v: NodeId) -> float:
    """Jaccard: |Γu ∩ Γv| / |Γu ∪ Γv|, 0 when the union is empty."""
    common, ku, kv = _overlap(graph, u, v)
    union = ku + kv - len(common)
    return len(common) / union if union else 0.0


def score_sorensen(graph: Graph, u: NodeId, v: NodeId) -> float:
    """Sorensen: 2|Γu ∩ Γv| / (|Γu| + |Γv|), 0 when both degrees are 0."""
    common, ku, kv = _overlap(graph, u, v)
    total = ku + kv
    return 2 * len(common) / total if total else 0.0


def score_salton(graph: Graph, u: NodeId, v: NodeId) -> float:
    """Salton (cosine): |Γu ∩ Γv| / sqrt(|Γu|·|Γv|), 0 for an isolated endpoint."""
    common, ku, kv = _overlap(graph, u, v)
    product = ku * kv
    return len(common) / math.sqrt(product) if product else 0.0


def score_hub_depressed(graph: Graph, u: NodeId, v: NodeId) -> float:
    """Hub depressed: |Γu ∩ Γv| / max(|Γu|, |Γv|)."""
    common, ku, kv = _overlap(graph, u, v)
    largest = max(ku, kv)
    return len(common) / largest if largest else 0.0


def score_hub_promoted(graph: Graph, u: NodeId, v: NodeId) -> float:
    """Hub promoted: |Γu ∩ Γv| / min(|Γu|, |Γv|)."""
    common, ku, kv = _overlap(graph, u, v)
    smallest = min(ku, kv)
    return len(common) / smallest if smallest else 0.0


def score_llhn(graph: Graph, u: NodeId, v: NodeId) -> float:
    """Leicht-Holme-Newman: |Γu ∩ Γv| / (|Γu|·|Γv|)."""
    common, ku, kv = _overlap(graph, u, v)
    product = ku * kv
    return len(common) / product if product else 0.0


_SIMILARITY: dict[MetricId, Callable[[Graph, NodeId, NodeId], float]] = {
    MetricId.CN: score_cn,
    MetricId.AA: score_aa,
    MetricId.RA: score_ra,
    MetricId.PA: score_pa,
    MetricId.JA: score_jaccard,
    MetricId.SO: score_sorensen,
    MetricId.SA: score_salton,
    MetricId.HD: score_hub_depressed,
    MetricId.HP: score_hub_promoted,
    MetricId.LLHN: score_llhn,
}


def similarity(metric: MetricId, graph: Graph, u: NodeId, v: NodeId) -> float:
    """
    Score a node pair with one of the ten local similarity indices.

    Args:
        metric: One of the similarity metrics (not BETWEENNESS or RADICCHI).
        graph: The graph.
        u: First node.
        v: Second node, distinct from u.

    Returns:
        The similarity score.

    Raises:
        ValueError: If metric is not a similarity index.
        NodeNotFoundError: If u or v is not a node.
        InvalidPairError: If u == v.

    """
    try:
        function = _SIMILARITY[metric]
    except KeyError:
        msg = f"{metric.value} is not a similarity index"
        raise ValueError(msg) from None
    return function(graph, u, v)


# Scorers consumed by the divisive engine


@dataclass(frozen=True, slots=True)
class EdgeScorer:
    """
    Edge scoring strategy used by the divisive engine.

    Attributes:
        metric: Metric this scorer implements.
        orientation: Whether the engine removes the highest or lowest score.
        local: True when a score depends only on the endpoints' neighbourhoods,
            which allows NEIGHBORHOOD rescoring.
        score_edges: Function scoring a batch of existing edges of a graph.
            Non-local scorers must be given every edge of each component they
            touch.

    """

    metric: MetricId
    orientation: Orientation
    local: bool
    score_edges: Callable[[Graph, Sequence[Edge]], dict[Edge, EdgeScore]]


def _score_betweenness(graph: Graph, edges: Sequence[Edge]) -> dict[Edge, EdgeScore]:
    sources = sorted({node for edge in edges for node in edge})
    scores = _betweenness_of(graph, sources)
    return {edge: scores[edge] for edge in edges}


def _score_radicchi(graph: Graph, edges: Sequence[Edge]) -> dict[Edge, EdgeScore]:
    return {edge: radicchi_coefficient(graph, *edge) for edge in edges}


def _similarity_scorer(
    function: Callable[[Graph, NodeId, NodeId], float],
) -> Callable[[Graph, Sequence[Edge]], dict[Edge, EdgeScore]]:
    def score(graph: Graph, edges: Sequence[Edge]) -> dict[Edge, EdgeScore]:
        return {edge: EdgeScore(edge, function(graph, *edge)) for edge in edges}

    return score


def scorer_for(metric: MetricId) -> EdgeScorer:
    """Return the registered scorer of a metric."""
    if metric is MetricId.BETWEENNESS:
        score_edges = _score_betweenness
    elif metric is MetricId.RADICCHI:
        score_edges = _score_radicchi
    else:
        score_edges = _similarity_scorer(_SIMILARITY[metric])
    return EdgeScorer(metric, get_orientation(metric), is_locality_eligible(metric), score_edges)


SCORERS: dict[MetricId, EdgeScorer] = {metric: scorer_for(metric) for metric in MetricId}


# Node-level statistics


def node_clustering(graph: Graph, i: NodeId) -> float:
    """
    Local clustering coefficient C_i = 2 m_i / (k_i (k_i - 1)).

    m_i counts the edges among the neighbours of i. Nodes of degree 0 or 1
    get 0.

    Raises:
        NodeNotFoundError: If i is not a node.

    """
    neighbours = graph.neighbor_set(i)
    k = len(neighbours)
    if k < 2:  # noqa: PLR2004
        return 0.0
    links = sum(len(graph.neighbor_set(x) & neighbours) for x in neighbours) // 2
    return 2.0 * links / (k * (k - 1))


def closeness(graph: Graph) -> dict[NodeId, float]:
    """
    Closeness of every node, (r - 1) / Σ d(u, v) over the r nodes u can reach.

    On disconnected graphs the value is scaled by (r - 1) / (n - 1) so nodes
    in small components are not favoured. Isolated nodes get 0.
    """
    n = graph.node_count
    result: dict[NodeId, float] = {}
    for u in graph.nodes:
        reached = [d for d in graph.shortest_path_lengths(NodeId(u)).values() if d is not None]
        total = sum(reached)
        r = len(reached)
        result[NodeId(u)] = (r - 1) / total * (r - 1) / (n - 1) if total else 0.0
    return result


def eigenvector_centrality(graph: Graph) -> dict[NodeId, float]:
    """
    Principal eigenvector of the adjacency matrix, scaled to unit Euclidean norm.

    Power iteration from a uniform positive vector on A + I, which has the same
    principal eigenvector as A and also converges on bipartite graphs. Stops
    when successive iterates differ by less than 1e-10 in the infinity norm,
    or after 10,000 iterations.

    Raises:
        EmptyGraphError: If the graph has no nodes.

    """
    n = graph.node_count
    if n == 0:
        msg = "eigenvector centrality of an empty graph"
        raise EmptyGraphError(msg)
    matrix = np.eye(n, dtype=np.float64)
    for u, v in graph.edges():
        matrix[u, v] = matrix[v, u] = 1.0
    x = np.full(n, 1.0 / math.sqrt(n))
    for _ in range(EIGENVECTOR_MAX_ITERATIONS):
        y = matrix @ x
        y /= np.linalg.norm(y)
        converged = float(np.max(np.abs(y - x))) < EIGENVECTOR_TOLERANCE
        x = y
        if converged:
            break
    else:
        logger.warning("Eigenvector power iteration hit %d iterations without converging", EIGENVECTOR_MAX_ITERATIONS)
    return {NodeId(i): float(value) for i, value in enumerate(x)}


def graph_stats(graph: Graph) -> GraphStats:
    """
    Compute the descriptive statistics of a network.

    Average path length is taken over unordered pairs that are connected; on
    a disconnected graph ``connected`` is False to flag that pairs in
    different components were left out.

    Args:
        graph: The network.

    Returns:
        The statistics.

    Raises:
        EmptyGraphError: If the graph has no nodes.

    """
    n = graph.node_count
    if n == 0:
        msg = "statistics of an empty graph"
        raise EmptyGraphError(msg)

    distance_sum = 0
    pair_count = 0
    for u in graph.nodes:
        for v, d in graph.shortest_path_lengths(NodeId(u)).items():
            if v > u and d is not None:
                distance_sum += d
                pair_count += 1

    return GraphStats(
        node_count=n,
        edge_count=graph.edge_count,
        degree_avg=2 * graph.edge_count / n,
        clustering_coef_avg=sum(node_clustering(graph, NodeId(u)) for u in graph.nodes) / n,
        avg_path_length=distance_sum / pair_count if pair_count else 0.0,
        closeness_avg=sum(closeness(graph).values()) / n,
        eigenvector_avg=sum(eigenvector_centrality(graph).values()) / n,
        betweenness_avg=sum(node_betweenness(graph).values()) / n,
        connected=graph.connected_components().component_count == 1,
    )
