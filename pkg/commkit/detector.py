from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from .catalog import MetricId, RecomputePolicy, is_locality_eligible
from .divisive import Dendrogram, Partition, RunConfig, partition_at_k, run_divisive
from .errors import DeadlockStopError, InvalidConfigError

if TYPE_CHECKING:
    from .edge_metrics import EdgeScorer
    from .graph import Graph

logger = logging.getLogger(__name__)


class Detector:
    """
    Fluent front end over run_divisive().

    Args:
        graph: The graph to split.
        strict: If True (default), raise InvalidConfigError for a recompute
            policy the metric cannot use and DeadlockStopError when a run
            deadlocks. If False, downgrade the policy to FULL and return the
            partial dendrogram on deadlock (best-effort mode).

    Example:
        >>> dendrogram = Detector(graph).using("betweenness").until(5).run()

        >>> (
        ...     Detector(graph, strict=False)
        ...     .using(MetricId.RADICCHI)
        ...     .with_policy(RecomputePolicy.NEIGHBORHOOD)
        ...     .until_exhausted()
        ...     .partition(4)
        ... )

    """

    def __init__(self, graph: Graph, *, strict: bool = True) -> None:
        """
        Initialize a detector with the default settings.

        The defaults are edge betweenness, FULL rescoring and a run to
        exhaustion.
        """
        self._graph: Graph = graph
        self._strict: bool = strict
        self._metric: MetricId = MetricId.BETWEENNESS
        self._target_k: int | None = None
        self._policy: RecomputePolicy = RecomputePolicy.FULL
        self._scorer: EdgeScorer | None = None
        self._dendrogram: Dendrogram | None = None

    @property
    def strict(self) -> bool:
        """Return True if running in strict mode."""
        return self._strict

    @property
    def dendrogram(self) -> Dendrogram | None:
        """Return the dendrogram of the last run(), if any."""
        return self._dendrogram

    def _ensure_not_run(self) -> None:
        if self._dendrogram is not None:
            msg = "Cannot modify the detector after run() has been called"
            raise InvalidConfigError(msg)

    def using(self, metric: MetricId | str) -> Detector:
        """
        Choose the edge metric.

        Raises:
            InvalidConfigError: If the metric id is unknown or run() was called.

        """
        self._ensure_not_run()
        try:
            self._metric = metric if isinstance(metric, MetricId) else MetricId.parse(metric)
        except ValueError as e:
            raise InvalidConfigError(str(e)) from None
        return self

    def until(self, k: int) -> Detector:
        """Stop the run once the graph has k components."""
        self._ensure_not_run()
        self._target_k = k
        return self

    def until_exhausted(self) -> Detector:
        """Run until no removable edge remains."""
        self._ensure_not_run()
        self._target_k = None
        return self

    def with_policy(self, policy: RecomputePolicy | str) -> Detector:
        """Choose how scores are refreshed after each removal."""
        self._ensure_not_run()
        self._policy = RecomputePolicy(policy)
        return self

    def with_scorer(self, scorer: EdgeScorer) -> Detector:
        """Use a custom scorer; its metric replaces the one set by using()."""
        self._ensure_not_run()
        self._scorer = scorer
        self._metric = scorer.metric
        return self

    @property
    def config(self) -> RunConfig:
        """
        Return the RunConfig the next run() will use.

        Raises:
            InvalidConfigError: In strict mode, if the settings are inconsistent.

        """
        policy = self._policy
        local = self._scorer.local if self._scorer is not None else is_locality_eligible(self._metric)
        if policy is RecomputePolicy.NEIGHBORHOOD and not local and not self._strict:
            logger.info("NEIGHBORHOOD rescoring is not exact for %s; using FULL", self._metric.value)
            policy = RecomputePolicy.FULL
        return RunConfig(self._metric, self._target_k, policy)

    def run(self) -> Dendrogram:
        """
        Run the divisive procedure once and keep the dendrogram.

        Returns:
            The dendrogram. In best-effort mode this may be a partial one with
            stop_reason DEADLOCK.

        Raises:
            InvalidConfigError: The settings do not fit the graph.
            DeadlockStopError: In strict mode, only excluded edges remain
                before the target is reached.

        """
        if self._dendrogram is not None:
            return self._dendrogram
        try:
            dendrogram = run_divisive(self._graph, self.config, self._scorer)
        except DeadlockStopError as e:
            if self._strict:
                raise
            logger.warning("Best-effort mode: keeping the partial dendrogram (%s)", e)
            dendrogram = e.dendrogram
        self._dendrogram = dendrogram
        return dendrogram

    def partition(self, k: int) -> Partition:
        """
        Run if needed, then return the partition with k communities.

        Raises:
            KNotReachedError: If the run never had exactly k components.

        """
        return partition_at_k(self.run(), k)
