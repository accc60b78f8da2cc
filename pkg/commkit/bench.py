from __future__ import annotations

import hashlib
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import TYPE_CHECKING

from .catalog import MetricId, RecomputePolicy, StopReason, is_locality_eligible
from .detector import Detector
from .divisive import RunConfig, partition_at_k, run_divisive
from .edge_metrics import graph_stats
from .errors import DatasetError, KNotReachedError
from .evaluation import best_point, elbow_select, modularity, modularity_sweep, nmi
from .parsers import GraphFormat, load_graph
from .writers import read_partition, write_curve, write_stats_table, write_table

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    from .divisive import Dendrogram, Partition
    from .edge_metrics import GraphStats
    from .evaluation import ModularityCurve
    from .graph import Graph

logger = logging.getLogger(__name__)

DATASET_DIR_ENV = "COMMKIT_DATASET_DIR"
CHECKSUM_FILE = "SHA256SUMS"
# optional ground-truth communities for the karate network
KARATE_TRUTH_FILE = "karate_groundtruth.csv"

TOLERANCE = 0.005
STATS_TOLERANCE = 0.002
NMI_TOLERANCE = 0.01
ELBOW_WINDOWS = (2, 3, 5)
SWEEP_K_MAX = 10
NMI_KS = (2, 3, 4, 5)


def toolkit_version() -> str:
    """Return the installed commkit version."""
    try:
        return version("commkit")
    except PackageNotFoundError:
        return "0.0.0+unknown"


def file_sha256(path: Path) -> str:
    """Return the hex SHA-256 digest of a file."""
    return hashlib.sha256(path.read_bytes()).hexdigest()


# Dataset manifest


@dataclass(frozen=True, slots=True)
class DatasetEntry:
    """A benchmark network the reproduction harness expects to find on disk."""

    name: str
    filename: str
    source: str
    node_count: int
    edge_count: int
    fmt: GraphFormat = GraphFormat.GML


MANIFEST: tuple[DatasetEntry, ...] = (
    DatasetEntry("adjnoun", "adjnoun.gml", "networkrepository.com", 112, 425),
    DatasetEntry("dolphins", "dolphins.gml", "networkrepository.com", 62, 159),
    DatasetEntry("football", "football.gml", "networkrepository.com", 115, 613),
    DatasetEntry("karate", "karate.gml", "networkrepository.com / Pajek datasets", 34, 78),
    DatasetEntry("lesmis", "lesmis.gml", "networkrepository.com", 77, 254),
    DatasetEntry("polbooks", "polbooks.gml", "networkrepository.com", 105, 441),
)


def manifest_entries(names: Iterable[str] | None = None) -> tuple[DatasetEntry, ...]:
    """
    Select manifest entries by network name, in manifest order.

    Raises:
        DatasetError: If a name is not in the manifest.

    """
    if names is None:
        return MANIFEST
    wanted = {name.strip().lower() for name in names}
    unknown = wanted - {entry.name for entry in MANIFEST}
    if unknown:
        msg = f"Unknown network(s): {', '.join(sorted(unknown))}"
        raise DatasetError(tuple(sorted(unknown)), msg)
    return tuple(entry for entry in MANIFEST if entry.name in wanted)


def _read_checksums(path: Path) -> dict[str, str]:
    checksums: dict[str, str] = {}
    for line in path.read_text(encoding="utf-8").splitlines():
        parts = line.split()
        if len(parts) == 2:  # noqa: PLR2004
            digest, name = parts
            checksums[name.lstrip("*")] = digest.lower()
    return checksums


def verify_datasets(directory: Path, entries: Sequence[DatasetEntry]) -> dict[str, Path]:
    """
    Check that every dataset file exists and matches SHA256SUMS when present.

    Args:
        directory: Dataset directory supplied by the user.
        entries: Networks to check.

    Returns:
        Path of each network's file, keyed by network name.

    Raises:
        DatasetError: If files are missing or fail checksum verification.

    """
    missing = tuple(entry.filename for entry in entries if not (directory / entry.filename).is_file())
    if missing:
        msg = f"Missing dataset files in {directory}: {', '.join(missing)}"
        raise DatasetError(missing, msg)

    sums_path = directory / CHECKSUM_FILE
    if sums_path.is_file():
        checksums = _read_checksums(sums_path)
        mismatched = tuple(
            entry.filename
            for entry in entries
            if entry.filename in checksums and file_sha256(directory / entry.filename) != checksums[entry.filename]
        )
        if mismatched:
            msg = f"Checksum mismatch for: {', '.join(mismatched)}"
            raise DatasetError(mismatched, msg)
    else:
        logger.info("No %s in %s; skipping checksum verification", CHECKSUM_FILE, directory)
    return {entry.name: directory / entry.filename for entry in entries}


# Expected values


class CellStatus(Enum):
    """Outcome of one table cell in the reproduction summary."""

    PASS = "PASS"
    FAIL = "FAIL"
    INFO = "INFO"


@dataclass(frozen=True, slots=True)
class Expectation:
    """
    A published value the harness compares against.

    Attributes:
        table: Output table the cell belongs to.
        network: Network name.
        column: Column label, e.g. ``max_q`` or ``nmi_k4``.
        accepted: Accepted values; several when sources disagree.
        tolerance: Absolute tolerance (0 for community counts).
        hard: Hard cells decide the exit code; soft cells are informational.

    """

    table: str
    network: str
    column: str
    accepted: tuple[float, ...]
    tolerance: float
    hard: bool


@dataclass(frozen=True, slots=True)
class CellResult:
    """An expectation paired with the value this run produced."""

    expectation: Expectation
    observed: float | None

    @property
    def status(self) -> CellStatus:
        """Return PASS or FAIL for hard cells, INFO for soft cells."""
        if not self.expectation.hard:
            return CellStatus.INFO
        if self.observed is None or math.isnan(self.observed):
            return CellStatus.FAIL
        observed = self.observed
        tolerance = self.expectation.tolerance + 1e-9
        ok = any(abs(observed - value) <= tolerance for value in self.expectation.accepted)
        return CellStatus.PASS if ok else CellStatus.FAIL

    def describe(self) -> str:
        """Return the one-line summary printed by reproduce."""
        e = self.expectation
        accepted = "|".join(f"{value:g}" for value in e.accepted)
        observed = "n/a" if self.observed is None else f"{self.observed:.3f}"
        return f"{self.status.value} {e.table} {e.network} {e.column}: observed={observed} expected={accepted}"


# (nodes, edges, degree_avg, eigenvector_avg, closeness_avg, clustering_avg, betweenness_avg, avg_path_length)
_TABLE1: dict[str, tuple[int, int, float, float, float, float, float, float]] = {
    "adjnoun": (112, 425, 7.589, 0.072, 0.403, 0.173, 37.085, 2.536),
    "dolphins": (62, 159, 5.129, 0.091, 0.307, 0.259, 39.925, 3.357),
    "football": (115, 613, 10.661, 0.092, 0.399, 0.403, 26.821, 2.508),
    "karate": (34, 78, 4.588, 0.146, 0.426, 0.571, 17.321, 2.408),
    "lesmis": (77, 254, 6.597, 0.078, 0.389, 0.573, 30.425, 2.641),
    "polbooks": (105, 441, 8.4, 0.072, 0.33, 0.488, 38.118, 3.079),
}

# network -> (max k, max Q, (elbow k, elbow Q) for w = 2, 3, 5)
_GN_CURVES: dict[str, tuple[int, float, tuple[tuple[int, float], ...]]] = {
    "adjnoun": (2, 0.009, ((2, 0.009), (2, 0.009), (2, 0.009))),
    "dolphins": (5, 0.519, ((2, 0.381), (3, 0.381), (5, 0.519))),
    "football": (10, 0.600, ((2, 0.400), (3, 0.455), (5, 0.550))),
    "karate": (5, 0.401, ((2, 0.360), (2, 0.360), (5, 0.401))),
    "lesmis": (6, 0.459, ((3, 0.260), (3, 0.260), (5, 0.260))),
    "polbooks": (5, 0.517, ((2, 0.443), (3, 0.483), (5, 0.517))),
}

_RADICCHI_CURVES: dict[str, tuple[int, float, tuple[tuple[int, float], ...]]] = {
    "adjnoun": (9, 0.175, ((5, 0.130), (5, 0.130), (5, 0.130))),
    "dolphins": (7, 0.467, ((2, 0.257), (3, 0.263), (5, 0.310))),
    "football": (10, 0.585, ((3, 0.286), (3, 0.286), (5, 0.459))),
    "karate": (4, 0.373, ((3, 0.373), (3, 0.373), (4, 0.373))),
    "lesmis": (9, 0.515, ((2, 0.373), (3, 0.481), (3, 0.481))),
    "polbooks": (5, 0.521, ((2, 0.457), (3, 0.484), (5, 0.521))),
}
_RADICCHI_HARD = frozenset(("karate", "polbooks", "football"))
# the two published karate Radicchi maxima disagree; either is accepted
_KARATE_RADICCHI_MAX = (0.373, 0.377)

# karate: metric -> (max k, max Q, (elbow k, elbow Q) for w = 2, 3, 5)
_KARATE_METRICS: dict[MetricId, tuple[int, float, tuple[tuple[int, float], ...]]] = {
    MetricId.BETWEENNESS: (5, 0.401, ((2, 0.360), (2, 0.360), (5, 0.401))),
    MetricId.RADICCHI: (4, 0.377, ((3, 0.373), (3, 0.373), (4, 0.377))),
    MetricId.CN: (10, 0.027, ((5, 0.008), (6, 0.018), (6, 0.018))),
    MetricId.AA: (1, 0.000, ((9, -0.004), (9, -0.004), (9, -0.004))),
    MetricId.RA: (1, 0.000, ((9, -0.004), (9, -0.004), (9, -0.004))),
    MetricId.PA: (10, 0.061, ((9, 0.041), (10, 0.061), (10, 0.061))),
    MetricId.JA: (6, 0.369, ((4, 0.369), (4, 0.369), (5, 0.366))),
    MetricId.SO: (6, 0.369, ((4, 0.369), (4, 0.369), (5, 0.366))),
    MetricId.SA: (5, 0.378, ((4, 0.365), (4, 0.365), (5, 0.378))),
    MetricId.HD: (10, 0.309, ((9, 0.302), (9, 0.302), (9, 0.302))),
    MetricId.HP: (5, 0.378, ((4, 0.365), (4, 0.365), (5, 0.378))),
    MetricId.LLHN: (5, 0.378, ((4, 0.365), (4, 0.365), (5, 0.378))),
}
_KARATE_SOFT_MAX = frozenset((MetricId.CN,))

# karate NMI against the betweenness partition at the same k, for k = 2, 3, 4, 5
_KARATE_NMI: dict[MetricId, tuple[float, float, float, float]] = {
    MetricId.RADICCHI: (0.111, 0.671, 0.637, 0.675),
    MetricId.CN: (0.060, 0.294, 0.306, 0.298),
    MetricId.AA: (0.043, 0.294, 0.281, 0.243),
    MetricId.RA: (0.043, 0.294, 0.281, 0.243),
    MetricId.PA: (0.060, 0.080, 0.130, 0.239),
    MetricId.JA: (0.060, 0.294, 0.707, 0.681),
    MetricId.SO: (0.060, 0.294, 0.707, 0.681),
    MetricId.SA: (0.043, 0.294, 0.707, 0.720),
    MetricId.HD: (0.043, 0.294, 0.252, 0.243),
    MetricId.HP: (0.060, 0.294, 0.707, 0.720),
    MetricId.LLHN: (0.060, 0.294, 0.707, 0.720),
}
_NMI_HARD = frozenset((MetricId.JA, MetricId.SO, MetricId.SA, MetricId.HP, MetricId.LLHN))
_NMI_HARD_K = 4


def _curve_expectations(
    table: str,
    network: str,
    prefix: str,
    row: tuple[int, float, tuple[tuple[int, float], ...]],
    *,
    hard: bool,
    accepted_max: tuple[float, ...] | None = None,
) -> list[Expectation]:
    max_k, max_q, elbows = row
    cells = [
        Expectation(table, network, f"{prefix}max_k", (float(max_k),), 0.0, hard),
        Expectation(table, network, f"{prefix}max_q", accepted_max or (max_q,), TOLERANCE, hard),
    ]
    for w, (k, q) in zip(ELBOW_WINDOWS, elbows, strict=True):
        cells.append(Expectation(table, network, f"{prefix}elbow{w}_k", (float(k),), 0.0, False))
        cells.append(Expectation(table, network, f"{prefix}elbow{w}_q", (q,), TOLERANCE, False))
    return cells


def expectations(networks: Iterable[str]) -> list[Expectation]:
    """Return every published cell that concerns the selected networks."""
    selected = set(networks)
    cells: list[Expectation] = []
    for network, (nodes, edges, degree, eig, clo, clust, betw, apl) in _TABLE1.items():
        if network not in selected:
            continue
        cells += [
            Expectation("table1", network, "node_count", (float(nodes),), 0.0, True),
            Expectation("table1", network, "edge_count", (float(edges),), 0.0, True),
            Expectation("table1", network, "degree_avg", (degree,), 0.0005, True),
            Expectation("table1", network, "clustering_coef_avg", (clust,), STATS_TOLERANCE, True),
            Expectation("table1", network, "avg_path_length", (apl,), STATS_TOLERANCE, True),
            Expectation("table1", network, "eigenvector_avg", (eig,), TOLERANCE, False),
            Expectation("table1", network, "closeness_avg", (clo,), TOLERANCE, False),
            Expectation("table1", network, "betweenness_avg", (betw,), TOLERANCE, False),
        ]
    for network, row in _GN_CURVES.items():
        if network in selected:
            cells += _curve_expectations("table2", network, "", row, hard=True)
    for network, row in _RADICCHI_CURVES.items():
        if network in selected:
            accepted = _KARATE_RADICCHI_MAX if network == "karate" else None
            cells += _curve_expectations(
                "table3", network, "", row, hard=network in _RADICCHI_HARD, accepted_max=accepted
            )
    if "karate" in selected:
        for metric, row in _KARATE_METRICS.items():
            accepted = _KARATE_RADICCHI_MAX if metric is MetricId.RADICCHI else None
            cells += _curve_expectations(
                "table5", "karate", f"{metric.value}_", row, hard=metric not in _KARATE_SOFT_MAX, accepted_max=accepted
            )
        for metric, values in _KARATE_NMI.items():
            for k, value in zip(NMI_KS, values, strict=True):
                hard = metric in _NMI_HARD and k == _NMI_HARD_K
                cells.append(Expectation("table6", "karate", f"{metric.value}_nmi_k{k}", (value,), NMI_TOLERANCE, hard))
    return cells


# Experiment cells


def policy_for(metric: MetricId) -> RecomputePolicy:
    """Return the cheapest exact recompute policy for a metric."""
    return RecomputePolicy.NEIGHBORHOOD if is_locality_eligible(metric) else RecomputePolicy.FULL


@dataclass(frozen=True, slots=True)
class CellOutcome:
    """Result of one (network, metric) run: its dendrogram and modularity curve."""

    network: str
    metric: MetricId
    dendrogram: Dendrogram
    curve: ModularityCurve


def run_cell(network: str, graph: Graph, metric: MetricId, k_max: int = SWEEP_K_MAX) -> CellOutcome:
    """
    Run one metric on one network up to k_max communities and sweep modularity.

    A Radicchi deadlock keeps the partial dendrogram; its curve simply ends
    at the last component count reached.
    """
    target = min(k_max, graph.node_count)
    detector = Detector(graph, strict=False).using(metric).with_policy(policy_for(metric))
    dendrogram = (detector.until(target) if target >= 2 else detector.until_exhausted()).run()  # noqa: PLR2004
    curve = modularity_sweep(graph, dendrogram, k_max, k_min=1)
    logger.info(
        "Cell %s/%s: %d removals, stop=%s, %d curve points",
        network,
        metric.value,
        len(dendrogram.removals),
        dendrogram.stop_reason.value,
        len(curve),
    )
    return CellOutcome(network, metric, dendrogram, curve)


def _run_cell_args(args: tuple[str, Graph, MetricId, int]) -> CellOutcome:
    return run_cell(*args)


def run_cells(
    cells: Sequence[tuple[str, Graph, MetricId]],
    *,
    workers: int = 1,
    k_max: int = SWEEP_K_MAX,
) -> list[CellOutcome]:
    """
    Run experiment cells, in parallel when workers > 1.

    Results come back in the order of ``cells`` whatever the worker count.
    """
    jobs = [(network, graph, metric, k_max) for network, graph, metric in cells]
    if workers <= 1 or len(jobs) < 2:  # noqa: PLR2004
        return [_run_cell_args(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_cell_args, jobs))


# Reports


@dataclass(frozen=True, slots=True)
class ReportRow:
    """One (metric, k) line of an experiment report."""

    metric: MetricId
    k: int
    modularity: float
    nmi: float | None = None


@dataclass(frozen=True, slots=True)
class Provenance:
    """Where a report came from: input checksum, run settings and toolkit version."""

    input_sha256: str | None
    config: dict[str, object]
    version: str = field(default_factory=toolkit_version)

    def to_json(self) -> bytes:
        """Serialize as a stable, sorted JSON document."""
        payload = {"input_sha256": self.input_sha256, "config": self.config, "version": self.version}
        return (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode("utf-8")


_METRIC_ORDER = {metric: index for index, metric in enumerate(MetricId)}


@dataclass(frozen=True, slots=True)
class ExperimentReport:
    """Per-metric modularity and NMI of one network, rows sorted by (metric, k)."""

    network: str
    rows: tuple[ReportRow, ...]
    provenance: Provenance

    @classmethod
    def build(cls, network: str, rows: Iterable[ReportRow], provenance: Provenance) -> ExperimentReport:
        """Sort the rows into canonical order and build the report."""
        ordered = sorted(rows, key=lambda row: (_METRIC_ORDER[row.metric], row.k))
        return cls(network, tuple(ordered), provenance)


def reference_from_run(graph: Graph, metric: MetricId, k: int) -> Partition:
    """
    Partition at k communities from a run of another metric, used as NMI reference.

    Raises:
        DeadlockStopError: If the reference run deadlocks.
        KNotReachedError: If the reference run cannot reach k communities.

    """
    dendrogram = run_divisive(graph, RunConfig(metric, k, policy_for(metric)))
    return partition_at_k(dendrogram, k)


def compare(
    graph: Graph,
    network: str,
    metrics: Sequence[MetricId],
    k: int,
    *,
    reference: Partition | None = None,
    reference_label: str | None = None,
    input_sha256: str | None = None,
) -> ExperimentReport:
    """
    Detect k communities with each metric and score them.

    Args:
        graph: The network.
        network: Name written in the report.
        metrics: Metrics to compare.
        k: Community count for every metric.
        reference: Partition to compute NMI against. NMI is left empty when None.
        reference_label: Description of the reference for the provenance block.
        input_sha256: Checksum of the input file for the provenance block.

    Returns:
        The report.

    Raises:
        DeadlockStopError: A metric deadlocks before reaching k.
        PartitionMismatchError: The reference covers a different node set.

    """
    rows: list[ReportRow] = []
    for metric in metrics:
        partition = partition_at_k(run_divisive(graph, RunConfig(metric, k, policy_for(metric))), k)
        score = nmi(partition, reference) if reference is not None else None
        rows.append(ReportRow(metric, k, modularity(graph, partition), score))
        logger.info("compare %s k=%d: %s", network, k, metric.value)
    provenance = Provenance(
        input_sha256,
        {"k": k, "metrics": [m.value for m in metrics], "reference": reference_label},
    )
    return ExperimentReport.build(network, rows, provenance)


@dataclass(slots=True)
class ReproductionResult:
    """Everything reproduce() produced: files written and per-cell verdicts."""

    files: list[Path] = field(default_factory=list)
    cells: list[CellResult] = field(default_factory=list)

    @property
    def failed(self) -> list[CellResult]:
        """Return the hard cells that did not match."""
        return [cell for cell in self.cells if cell.status is CellStatus.FAIL]


_TABLE1_COLUMNS = (
    "node_count",
    "edge_count",
    "degree_avg",
    "clustering_coef_avg",
    "avg_path_length",
    "eigenvector_avg",
    "closeness_avg",
    "betweenness_avg",
)
_CURVE_COLUMNS = ("max_k", "max_q", *(f"elbow{w}_{c}" for w in ELBOW_WINDOWS for c in ("k", "q")))
_COUNT_COLUMNS = ("max_k", *(f"elbow{w}_k" for w in ELBOW_WINDOWS))
_SHORT = {MetricId.BETWEENNESS: "gn", MetricId.RADICCHI: "rad"}


def _write(path: Path, data: bytes, result: ReproductionResult) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    _ = path.write_bytes(data)
    result.files.append(path)


def _curve_summary(curve: ModularityCurve) -> dict[str, float]:
    summary: dict[str, float] = {}
    if len(curve) == 0:
        return summary
    summary["max_k"], summary["max_q"] = best_point(curve)
    if len(curve) >= 2:  # noqa: PLR2004
        for w in ELBOW_WINDOWS:
            summary[f"elbow{w}_k"], summary[f"elbow{w}_q"] = elbow_select(curve, w)
    return summary


def _nmi_or_none(x: Partition | None, y: Partition | None) -> float | None:
    if x is None or y is None:
        return None
    return nmi(x, y)


def _partition_or_none(dendrogram: Dendrogram, k: int) -> Partition | None:
    try:
        return partition_at_k(dendrogram, k)
    except KNotReachedError:
        return None


def _load_networks(entries: Sequence[DatasetEntry], paths: dict[str, Path]) -> dict[str, Graph]:
    graphs: dict[str, Graph] = {}
    for entry in entries:
        graph, _ = load_graph(paths[entry.name], entry.fmt)
        if (graph.node_count, graph.edge_count) != (entry.node_count, entry.edge_count):
            logger.warning(
                "%s has %d nodes / %d edges, manifest says %d / %d",
                entry.name,
                graph.node_count,
                graph.edge_count,
                entry.node_count,
                entry.edge_count,
            )
        graphs[entry.name] = graph
    return graphs


def _observations(
    stats: dict[str, GraphStats],
    summaries: dict[tuple[str, MetricId], dict[str, float]],
) -> dict[tuple[str, str, str], float]:
    observed: dict[tuple[str, str, str], float] = {}
    for name, graph_stat in stats.items():
        for column in _TABLE1_COLUMNS:
            observed["table1", name, column] = float(getattr(graph_stat, column))
    for (name, metric), summary in summaries.items():
        for column, value in summary.items():
            if metric is MetricId.BETWEENNESS:
                observed["table2", name, column] = value
            elif metric is MetricId.RADICCHI:
                observed["table3", name, column] = value
            if name == "karate":
                observed["table5", name, f"{metric.value}_{column}"] = value
    return observed


def _karate_nmi_rows(
    outcomes: dict[tuple[str, MetricId], CellOutcome],
    truth: Partition | None,
) -> list[tuple[str, int, float | None, float | None]]:
    """NMI of every metric's karate partitions against betweenness and, when given, the ground truth."""
    reference = outcomes["karate", MetricId.BETWEENNESS].dendrogram
    rows: list[tuple[str, int, float | None, float | None]] = []
    for metric in MetricId:
        if metric is MetricId.BETWEENNESS:
            continue
        dendrogram = outcomes["karate", metric].dendrogram
        for k in NMI_KS:
            partition = _partition_or_none(dendrogram, k)
            vs_reference = _nmi_or_none(partition, _partition_or_none(reference, k))
            rows.append((metric.value, k, vs_reference, _nmi_or_none(partition, truth)))
    return rows


def reproduce(
    dataset_dir: Path,
    out_dir: Path,
    *,
    networks: Iterable[str] | None = None,
    workers: int = 1,
) -> ReproductionResult:
    """
    Regenerate the benchmark tables and compare them with the published values.

    Writes table1.csv to table6.csv, figure1_data/<network>_<metric>.csv and
    provenance.json into out_dir. Tables 5 and 6 cover the karate network
    only and are written when it is selected.

    Args:
        dataset_dir: Directory holding the benchmark files.
        out_dir: Output directory, created if needed.
        networks: Subset of networks to run. All six when None.
        workers: Processes used to run (network, metric) cells.

    Returns:
        Written files and per-cell verdicts.

    Raises:
        DatasetError: Dataset files are missing or fail verification.

    """
    entries = manifest_entries(networks)
    paths = verify_datasets(dataset_dir, entries)
    result = ReproductionResult()

    graphs = _load_networks(entries, paths)
    stats = {name: graph_stats(graph) for name, graph in graphs.items()}
    cells = [(name, graph, metric) for name, graph in graphs.items() for metric in MetricId]
    outcomes = {(o.network, o.metric): o for o in run_cells(cells, workers=workers)}
    summaries = {key: _curve_summary(outcome.curve) for key, outcome in outcomes.items()}
    observed = _observations(stats, summaries)

    _write(out_dir / "table1.csv", write_stats_table(stats.items()), result)
    for table, metric in (("table2", MetricId.BETWEENNESS), ("table3", MetricId.RADICCHI)):
        rows = [(name, *(summaries[name, metric].get(c) for c in _CURVE_COLUMNS)) for name in graphs]
        _write(out_dir / f"{table}.csv", write_table(("network", *_CURVE_COLUMNS), rows), result)

    pair = (MetricId.BETWEENNESS, MetricId.RADICCHI)
    header4 = ("network", *(f"{_SHORT[m]}_{c}" for c in _COUNT_COLUMNS for m in pair))
    rows4 = [(name, *(summaries[name, m].get(c) for c in _COUNT_COLUMNS for m in pair)) for name in graphs]
    _write(out_dir / "table4.csv", write_table(header4, rows4), result)

    if "karate" in graphs:
        rows5 = [(metric.value, *(summaries["karate", metric].get(c) for c in _CURVE_COLUMNS)) for metric in MetricId]
        _write(out_dir / "table5.csv", write_table(("metric", *_CURVE_COLUMNS), rows5), result)

        truth_path = dataset_dir / KARATE_TRUTH_FILE
        truth = read_partition(truth_path.read_bytes(), graphs["karate"]) if truth_path.is_file() else None
        rows6 = _karate_nmi_rows(outcomes, truth)
        for metric_id, k, vs_gn, _ in rows6:
            if vs_gn is not None:
                observed["table6", "karate", f"{metric_id}_nmi_k{k}"] = vs_gn
        header6 = ("metric", "k", "nmi_vs_betweenness", "nmi_vs_ground_truth")
        _write(out_dir / "table6.csv", write_table(header6, rows6), result)

    for (name, metric), outcome in outcomes.items():
        elbows = {w: elbow_select(outcome.curve, w) for w in ELBOW_WINDOWS if len(outcome.curve) >= 2}  # noqa: PLR2004
        _write(out_dir / "figure1_data" / f"{name}_{metric.value}.csv", write_curve(outcome.curve, elbows), result)

    provenance = Provenance(
        None,
        {
            "inputs": {entry.name: file_sha256(paths[entry.name]) for entry in entries},
            "k_max": SWEEP_K_MAX,
            "policies": {metric.value: policy_for(metric).value for metric in MetricId},
            "stop_reasons": {
                f"{name}/{metric.value}": outcome.dendrogram.stop_reason.value
                for (name, metric), outcome in outcomes.items()
                if outcome.dendrogram.stop_reason is not StopReason.TARGET_REACHED
            },
            "tolerance": TOLERANCE,
        },
    )
    _write(out_dir / "provenance.json", provenance.to_json(), result)

    result.cells = [
        CellResult(expectation, observed.get((expectation.table, expectation.network, expectation.column)))
        for expectation in expectations(graphs)
    ]
    return result
