import math

import pytest

from commkit.catalog import SIMILARITY_METRICS, MetricId, Orientation
from commkit.edge_metrics import (
    SCORERS,
    closeness,
    edge_betweenness,
    eigenvector_centrality,
    graph_stats,
    node_betweenness,
    node_clustering,
    radicchi_coefficient,
    score_aa,
    score_cn,
    score_hub_depressed,
    score_hub_promoted,
    score_jaccard,
    score_llhn,
    score_pa,
    score_ra,
    score_salton,
    score_sorensen,
    similarity,
)
from commkit.errors import EdgeNotFoundError, EmptyGraphError, InvalidPairError, NodeNotFoundError
from commkit.graph import Graph, NodeId

# toy graph ids: label "1" -> 0 ... label "5" -> 4
N1, N2, N3, N4, N5 = (NodeId(i) for i in range(5))


class TestEdgeBetweenness:
    """Tests for edge_betweenness."""

    def test_bridge_carries_all_crossing_pairs(self, toy: Graph) -> None:
        """Should give the bridge 3-4 every pair that crosses it."""
        scores = edge_betweenness(toy)
        assert scores[N3, N4].value == pytest.approx(6.0)

    def test_triangle_edge(self, toy: Graph) -> None:
        """Should give 1-2 only its own endpoint pair."""
        assert edge_betweenness(toy)[N1, N2].value == pytest.approx(1.0)

    def test_pendant_edge(self, toy: Graph) -> None:
        """Should give 4-5 the four pairs that end at 5."""
        assert edge_betweenness(toy)[N4, N5].value == pytest.approx(4.0)

    def test_complete_graph(self, k3: Graph) -> None:
        """Should give every triangle edge 1.0."""
        assert all(score.value == pytest.approx(1.0) for score in edge_betweenness(k3).values())

    def test_split_shortest_paths(self) -> None:
        """Should share a pair equally between two shortest paths."""
        square = Graph.from_edges([("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
        assert all(score.value == pytest.approx(2.0) for score in edge_betweenness(square).values())

    def test_disconnected_pairs_contribute_nothing(self) -> None:
        """Should score two separate edges as 1.0 each."""
        graph = Graph.from_edges([("a", "b"), ("c", "d")])
        assert [s.value for s in edge_betweenness(graph).values()] == [1.0, 1.0]

    def test_never_excluded(self, toy: Graph) -> None:
        """Should never exclude an edge."""
        assert not any(score.excluded for score in edge_betweenness(toy).values())

    def test_node_betweenness(self, toy: Graph) -> None:
        """Should count pairs routed through each node."""
        scores = node_betweenness(toy)
        assert scores[N3] == pytest.approx(4.0)
        assert scores[N4] == pytest.approx(3.0)
        assert scores[N1] == pytest.approx(0.0)


class TestRadicchi:
    """Tests for radicchi_coefficient."""

    def test_triangle_edge(self, k3: Graph) -> None:
        """Should give (1 + 1) / 1 on a triangle."""
        assert radicchi_coefficient(k3, NodeId(0), NodeId(1)).value == pytest.approx(2.0)

    def test_bridge(self, toy: Graph) -> None:
        """Should give (0 + 1) / 1 on 3-4."""
        score = radicchi_coefficient(toy, N3, N4)
        assert score.value == pytest.approx(1.0)
        assert not score.excluded

    def test_pendant_excluded(self, toy: Graph) -> None:
        """Should exclude an edge touching a degree-1 node."""
        score = radicchi_coefficient(toy, N5, N4)
        assert score.excluded
        assert math.isnan(score.value)
        assert score.edge == (N4, N5)

    def test_non_edge(self, toy: Graph) -> None:
        """Should raise EdgeNotFoundError on a non-edge."""
        with pytest.raises(EdgeNotFoundError):
            _ = radicchi_coefficient(toy, N1, N5)


class TestSimilarityIndices:
    """Tests for the ten similarity indices on the toy graph."""

    def test_common_neighbours(self, toy: Graph, k3: Graph) -> None:
        """Should count shared neighbours."""
        assert score_cn(toy, N1, N2) == 1.0
        assert score_cn(toy, N1, N5) == 0.0
        assert score_cn(k3, NodeId(0), NodeId(1)) == 1.0

    def test_adamic_adar(self, toy: Graph) -> None:
        """Should weight the shared neighbour by 1 / ln of its degree."""
        assert score_aa(toy, N1, N2) == pytest.approx(0.910239, abs=1e-6)
        assert score_aa(toy, N1, N5) == 0.0

    def test_adamic_adar_degree_two(self) -> None:
        """Should give 1 / ln 2 through a degree-2 neighbour."""
        path = Graph.from_edges([("a", "b"), ("b", "c")])
        assert score_aa(path, NodeId(0), NodeId(2)) == pytest.approx(1.442695, abs=1e-6)

    def test_resource_allocation(self, toy: Graph, k4: Graph) -> None:
        """Should weight shared neighbours by 1 / degree."""
        assert score_ra(toy, N1, N2) == pytest.approx(1 / 3)
        assert score_ra(k4, NodeId(0), NodeId(1)) == pytest.approx(2 / 3)

    def test_preferential_attachment(self, toy: Graph) -> None:
        """Should multiply degrees."""
        assert score_pa(toy, N1, N2) == 4.0
        assert score_pa(toy, N3, N5) == 3.0

    def test_jaccard(self, toy: Graph) -> None:
        """Should divide the intersection by the union."""
        assert score_jaccard(toy, N1, N2) == pytest.approx(1 / 3)

    def test_sorensen(self, toy: Graph) -> None:
        """Should divide twice the intersection by the degree sum."""
        assert score_sorensen(toy, N1, N2) == pytest.approx(0.5)

    def test_salton(self, toy: Graph) -> None:
        """Should divide by the geometric mean of the degrees."""
        assert score_salton(toy, N1, N2) == pytest.approx(0.5)

    def test_hub_depressed(self, toy: Graph) -> None:
        """Should divide by the larger degree."""
        assert score_hub_depressed(toy, N1, N2) == pytest.approx(0.5)
        assert score_hub_depressed(toy, N1, N4) == pytest.approx(0.5)

    def test_hub_promoted(self, toy: Graph) -> None:
        """Should divide by the smaller degree."""
        assert score_hub_promoted(toy, N1, N2) == pytest.approx(0.5)
        assert score_hub_promoted(toy, N3, N4) == 0.0

    def test_llhn(self, toy: Graph) -> None:
        """Should divide by the degree product."""
        assert score_llhn(toy, N1, N2) == pytest.approx(0.25)

    @pytest.mark.parametrize("metric", SIMILARITY_METRICS)
    def test_isolated_endpoints_score_zero(self, metric: MetricId) -> None:
        """Should return 0 when both endpoints are isolated."""
        graph = Graph.from_edges([], isolated=["a", "b"])
        assert similarity(metric, graph, NodeId(0), NodeId(1)) == 0.0

    @pytest.mark.parametrize("metric", SIMILARITY_METRICS)
    def test_symmetric(self, metric: MetricId, karate: Graph) -> None:
        """Should not depend on the endpoint order."""
        for u, v in list(karate.edges())[:20]:
            assert similarity(metric, karate, u, v) == similarity(metric, karate, v, u)

    def test_identical_neighbourhoods(self) -> None:
        """Should give Jaccard 1 for two nodes with the same neighbours."""
        graph = Graph.from_edges([("a", "x"), ("a", "y"), ("b", "x"), ("b", "y")])
        assert score_jaccard(graph, graph.node_of("a"), graph.node_of("b")) == 1.0

    def test_same_node_rejected(self, toy: Graph) -> None:
        """Should raise InvalidPairError for u == v."""
        with pytest.raises(InvalidPairError):
            _ = similarity(MetricId.JA, toy, N1, N1)

    def test_unknown_node_rejected(self, toy: Graph) -> None:
        """Should raise NodeNotFoundError for an unknown node."""
        with pytest.raises(NodeNotFoundError):
            _ = similarity(MetricId.CN, toy, N1, NodeId(42))

    def test_not_a_similarity_metric(self, toy: Graph) -> None:
        """Should refuse betweenness and Radicchi."""
        with pytest.raises(ValueError, match="not a similarity"):
            _ = similarity(MetricId.BETWEENNESS, toy, N1, N2)


class TestScorers:
    """Tests for the scorer registry."""

    def test_registry_covers_every_metric(self) -> None:
        """Should register a scorer per metric."""
        assert set(SCORERS) == set(MetricId)

    def test_orientation(self) -> None:
        """Should remove the maximum for betweenness only."""
        assert SCORERS[MetricId.BETWEENNESS].orientation is Orientation.REMOVE_MAX
        assert all(SCORERS[m].orientation is Orientation.REMOVE_MIN for m in MetricId if m is not MetricId.BETWEENNESS)

    def test_locality(self) -> None:
        """Should flag every metric but betweenness as local."""
        assert not SCORERS[MetricId.BETWEENNESS].local
        assert SCORERS[MetricId.RADICCHI].local

    def test_score_subset(self, toy: Graph) -> None:
        """Should score only the requested edges."""
        scores = SCORERS[MetricId.RADICCHI].score_edges(toy, [(N3, N4), (N4, N5)])
        assert set(scores) == {(N3, N4), (N4, N5)}
        assert scores[N4, N5].excluded

    def test_betweenness_subset_matches_full(self, toy: Graph) -> None:
        """Should give component-restricted betweenness equal to the full computation."""
        split = toy.without_edges([(N3, N4)])
        subset = SCORERS[MetricId.BETWEENNESS].score_edges(split, [(N1, N2), (N1, N3), (N2, N3)])
        full = edge_betweenness(split)
        assert all(subset[e].value == pytest.approx(full[e].value) for e in subset)


class TestNodeStatistics:
    """Tests for clustering, closeness, eigenvector centrality and graph_stats."""

    def test_clustering(self, toy: Graph) -> None:
        """Should count links among neighbours."""
        assert node_clustering(toy, N3) == pytest.approx(1 / 3)
        assert node_clustering(toy, N1) == pytest.approx(1.0)
        assert node_clustering(toy, N5) == 0.0

    def test_closeness_star_hub(self, star: Graph) -> None:
        """Should give the hub of a star closeness 1."""
        assert closeness(star)[star.node_of("0")] == pytest.approx(1.0)

    def test_closeness_isolated(self) -> None:
        """Should give isolated nodes 0."""
        graph = Graph.from_edges([("a", "b")], isolated=["c"])
        assert closeness(graph)[graph.node_of("c")] == 0.0

    def test_eigenvector_unit_norm(self, karate: Graph) -> None:
        """Should return a unit-norm positive vector."""
        values = list(eigenvector_centrality(karate).values())
        assert math.fsum(v * v for v in values) == pytest.approx(1.0)
        assert min(values) > 0

    def test_eigenvector_regular_graph(self, k4: Graph) -> None:
        """Should be uniform on a regular graph."""
        assert all(v == pytest.approx(0.5) for v in eigenvector_centrality(k4).values())

    def test_eigenvector_empty(self) -> None:
        """Should refuse an empty graph."""
        with pytest.raises(EmptyGraphError):
            _ = eigenvector_centrality(Graph([], []))

    def test_toy_stats(self, toy: Graph) -> None:
        """Should average degree and path length over the toy graph."""
        stats = graph_stats(toy)
        assert stats.degree_avg == pytest.approx(2.0)
        assert stats.avg_path_length == pytest.approx(1.7)
        assert stats.connected

    def test_karate_stats(self, karate: Graph) -> None:
        """Should match the published karate features."""
        stats = graph_stats(karate)
        assert (stats.node_count, stats.edge_count) == (34, 78)
        assert stats.degree_avg == pytest.approx(4.588, abs=0.001)
        assert stats.clustering_coef_avg == pytest.approx(0.571, abs=0.001)
        assert stats.avg_path_length == pytest.approx(2.408, abs=0.001)

    def test_disconnected_stats(self) -> None:
        """Should flag disconnected graphs."""
        stats = graph_stats(Graph.from_edges([("a", "b"), ("c", "d")]))
        assert not stats.connected
        assert stats.avg_path_length == pytest.approx(1.0)
