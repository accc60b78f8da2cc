from collections.abc import Sequence

import pytest

from commkit.catalog import MetricId, Orientation, RecomputePolicy, StopReason, get_orientation, is_locality_eligible
from commkit.detector import Detector
from commkit.edge_metrics import EdgeScore, EdgeScorer
from commkit.errors import DeadlockStopError, InvalidConfigError, KNotReachedError
from commkit.graph import Edge, Graph


class TestMetricCatalog:
    """Tests for metric identifiers and their fixed properties."""

    def test_parse_is_case_insensitive(self) -> None:
        """Should accept upper-case identifiers."""
        assert MetricId.parse("LLHN") is MetricId.LLHN
        assert MetricId.parse(" betweenness ") is MetricId.BETWEENNESS

    def test_parse_unknown(self) -> None:
        """Should list the known identifiers on failure."""
        with pytest.raises(ValueError, match="expected one of"):
            _ = MetricId.parse("katz")

    def test_orientation_and_locality(self) -> None:
        """Should tie orientation and locality to the metric."""
        assert get_orientation(MetricId.BETWEENNESS) is Orientation.REMOVE_MAX
        assert get_orientation(MetricId.HP) is Orientation.REMOVE_MIN
        assert is_locality_eligible(MetricId.RADICCHI)
        assert not is_locality_eligible(MetricId.BETWEENNESS)


class TestDetectorBuilder:
    """Tests for the fluent Detector settings."""

    def test_defaults(self, toy: Graph) -> None:
        """Should default to betweenness, FULL and a run to exhaustion."""
        config = Detector(toy).config
        assert config.metric is MetricId.BETWEENNESS
        assert config.recompute_policy is RecomputePolicy.FULL
        assert config.target_k is None

    def test_chaining_returns_self(self, toy: Graph) -> None:
        """Should return the detector from every setter."""
        detector = Detector(toy)
        assert detector.using("ja").until(3).with_policy("neighborhood") is detector
        assert detector.config.metric is MetricId.JA

    def test_unknown_metric(self, toy: Graph) -> None:
        """Should raise InvalidConfigError for an unknown metric id."""
        with pytest.raises(InvalidConfigError, match="Unknown metric"):
            _ = Detector(toy).using("katz")

    def test_strict_rejects_bad_policy(self, toy: Graph) -> None:
        """Should refuse NEIGHBORHOOD for betweenness in strict mode."""
        detector = Detector(toy).with_policy(RecomputePolicy.NEIGHBORHOOD)
        with pytest.raises(InvalidConfigError):
            _ = detector.config

    def test_best_effort_downgrades_policy(self, toy: Graph) -> None:
        """Should fall back to FULL in best-effort mode."""
        detector = Detector(toy, strict=False).with_policy(RecomputePolicy.NEIGHBORHOOD)
        assert detector.config.recompute_policy is RecomputePolicy.FULL

    def test_frozen_after_run(self, toy: Graph) -> None:
        """Should refuse changes after run()."""
        detector = Detector(toy).until(2)
        _ = detector.run()
        with pytest.raises(InvalidConfigError, match="after run"):
            _ = detector.using(MetricId.CN)

    def test_until_exhausted_clears_target(self, toy: Graph) -> None:
        """Should reset an earlier target."""
        assert Detector(toy).until(3).until_exhausted().config.target_k is None


class TestDetectorRun:
    """Tests for Detector.run and Detector.partition."""

    def test_run_is_cached(self, toy: Graph) -> None:
        """Should run once and keep the dendrogram."""
        detector = Detector(toy).using(MetricId.RADICCHI).until(2)
        first = detector.run()
        assert detector.run() is first
        assert detector.dendrogram is first

    def test_partition(self, toy: Graph) -> None:
        """Should return the toy split at k = 2."""
        assert Detector(toy).using(MetricId.RADICCHI).until(2).partition(2).assignment == (0, 0, 0, 1, 1)

    def test_partition_beyond_target(self, toy: Graph) -> None:
        """Should raise KNotReachedError for k past the target."""
        with pytest.raises(KNotReachedError):
            _ = Detector(toy).until(2).partition(4)

    def test_strict_deadlock(self, star: Graph) -> None:
        """Should propagate DeadlockStopError in strict mode."""
        with pytest.raises(DeadlockStopError):
            _ = Detector(star).using(MetricId.RADICCHI).run()

    def test_best_effort_deadlock(self, star: Graph) -> None:
        """Should keep the partial dendrogram in best-effort mode."""
        dendrogram = Detector(star, strict=False).using(MetricId.RADICCHI).until(2).run()
        assert dendrogram.stop_reason is StopReason.DEADLOCK
        assert dendrogram.final_components == 1

    def test_custom_scorer(self, toy: Graph) -> None:
        """Should run with a caller-supplied scorer."""

        def reversed_order(graph: Graph, edges: Sequence[Edge]) -> dict[Edge, EdgeScore]:
            del graph
            return {edge: EdgeScore(edge, float(-index)) for index, edge in enumerate(sorted(edges))}

        scorer = EdgeScorer(MetricId.CN, Orientation.REMOVE_MIN, local=True, score_edges=reversed_order)
        dendrogram = Detector(toy).with_scorer(scorer).until(2).run()
        assert dendrogram.removals[0].edge == (3, 4)
