from __future__ import annotations

import csv
import io
import json
from dataclasses import astuple, fields
from typing import TYPE_CHECKING

from .divisive import Partition, RemovalRecord
from .edge_metrics import GraphStats
from .errors import FormatError, NodeNotFoundError, PartitionMismatchError
from .graph import NodeId, make_edge
from .parsers import decode_text

if TYPE_CHECKING:
    from collections.abc import Iterable, Mapping, Sequence

    from .bench import ExperimentReport
    from .divisive import Dendrogram
    from .evaluation import ModularityCurve
    from .graph import Graph


PARTITION_HEADER = ("node", "community")
CURVE_HEADER = ("k", "modularity")
REPORT_HEADER = ("network", "metric", "k", "modularity", "nmi_vs_reference")
STATS_HEADER = ("network", *(field.name for field in fields(GraphStats)))


def _csv_bytes(header: Sequence[str], rows: Iterable[Sequence[object]], trailer: Iterable[str] = ()) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    for line in trailer:
        buffer.write(f"# {line}\n")
    return buffer.getvalue().encode("utf-8")


def write_table(header: Sequence[str], rows: Iterable[Sequence[object]]) -> bytes:
    """Serialize rows as CSV under a header; None cells are written empty."""
    return _csv_bytes(header, rows)


def label_sort_key(label: str) -> tuple[int, int, str]:
    """Order integer-looking labels numerically, before all other labels."""
    try:
        return (0, int(label), "")
    except ValueError:
        return (1, 0, label)


def write_edge_list(graph: Graph) -> bytes:
    """
    Serialize a graph as a whitespace-separated edge list, one edge per line.

    Edges are written in canonical order with their labels. An isolated node
    is written as a self-loop line, which parse_edge_list reads back as an
    isolated node, so the label set survives the round trip.

    Raises:
        FormatError: If a label is empty, holds whitespace, or starts with ``#``.

    """
    for label in graph.labels:
        if not label or label.startswith("#") or any(ch.isspace() for ch in label):
            msg = f"label {label!r} cannot be written to an edge list"
            raise FormatError(msg)
    labels = graph.labels
    lines = [f"{labels[u]} {labels[v]}\n" for u, v in graph.edges()]
    lines += [f"{labels[u]} {labels[u]}\n" for u in graph.nodes if graph.degree(NodeId(u)) == 0]
    return "".join(lines).encode("utf-8")


def write_partition(partition: Partition, labels: Sequence[str]) -> bytes:
    """
    Serialize a partition as ``node,community`` CSV.

    Rows are sorted by node label. Community ids are the partition's
    canonical ids (0-based, ordered by smallest member node id).

    Raises:
        PartitionMismatchError: If the partition and the label table differ in size.

    """
    if len(partition) != len(labels):
        msg = f"partition covers {len(partition)} nodes, label table has {len(labels)}"
        raise PartitionMismatchError(msg)
    rows = sorted(zip(labels, partition.assignment, strict=True), key=lambda row: label_sort_key(row[0]))
    return _csv_bytes(PARTITION_HEADER, rows)


def read_partition(data: bytes | str, graph: Graph) -> Partition:
    """
    Read a ``node,community`` CSV against a graph's label table.

    Community values may be any strings; they are renumbered canonically.

    Raises:
        FormatError: If the header or a row is malformed.
        PartitionMismatchError: If the CSV does not list every node of the graph exactly once.

    """
    reader = csv.reader(io.StringIO(decode_text(data)))
    try:
        header = next(reader)
    except StopIteration:
        msg = "empty partition file"
        raise FormatError(msg, 1) from None
    if tuple(cell.strip() for cell in header) != PARTITION_HEADER:
        msg = f"expected header {','.join(PARTITION_HEADER)}"
        raise FormatError(msg, 1)

    labels: list[str | None] = [None] * graph.node_count
    for row in reader:
        if not row:
            continue
        if len(row) != 2:  # noqa: PLR2004
            msg = f"expected 2 columns, got {len(row)}"
            raise FormatError(msg, reader.line_num)
        node_label, community = (cell.strip() for cell in row)
        try:
            node = graph.node_of(node_label)
        except NodeNotFoundError:
            msg = f"node {node_label!r} is not part of the graph"
            raise PartitionMismatchError(msg) from None
        if labels[node] is not None:
            msg = f"node {node_label!r} is listed twice"
            raise PartitionMismatchError(msg)
        labels[node] = community
    missing = [graph.labels[i] for i, label in enumerate(labels) if label is None]
    if missing:
        msg = f"{len(missing)} node(s) have no community, first is {missing[0]!r}"
        raise PartitionMismatchError(msg)
    return Partition.from_assignment(labels)


def write_dendrogram(dendrogram: Dendrogram, labels: Sequence[str]) -> bytes:
    """
    Serialize the removal sequence as a JSON array of removal records.

    Scores are written as shortest round-trip floats, so parsing the output
    gives back the exact values.
    """
    records = [
        {
            "step": record.step,
            "edge": [labels[record.edge[0]], labels[record.edge[1]]],
            "score": record.score,
            "components_after": record.components_after,
        }
        for record in dendrogram.removals
    ]
    if not records:
        return b"[]\n"
    return (json.dumps(records, indent=2, allow_nan=False) + "\n").encode("utf-8")


def _record_from(item: object, index: int, graph: Graph) -> RemovalRecord:
    if not isinstance(item, dict):
        msg = f"record {index} is not an object"
        raise FormatError(msg)
    try:
        step, edge, score, after = item["step"], item["edge"], item["score"], item["components_after"]
    except KeyError as e:
        msg = f"record {index} lacks field {e.args[0]!r}"
        raise FormatError(msg) from None
    if not (isinstance(step, int) and isinstance(after, int) and isinstance(score, (int, float))):
        msg = f"record {index} has a field of the wrong type"
        raise FormatError(msg)
    if not (isinstance(edge, list) and len(edge) == 2 and all(isinstance(x, str) for x in edge)):  # noqa: PLR2004
        msg = f"record {index} edge must be a pair of labels"
        raise FormatError(msg)
    try:
        u, v = graph.node_of(edge[0]), graph.node_of(edge[1])
    except NodeNotFoundError as e:
        msg = f"record {index} names unknown node {e.node!r}"
        raise FormatError(msg) from None
    return RemovalRecord(step, make_edge(u, v), float(score), after)


def parse_dendrogram(data: bytes | str, graph: Graph) -> tuple[RemovalRecord, ...]:
    """
    Parse the output of write_dendrogram() against the graph it was run on.

    Raises:
        FormatError: If the JSON is malformed, names unknown nodes or edges,
            repeats an edge, or breaks the step / component-count ordering.

    """
    try:
        items = json.loads(decode_text(data))
    except json.JSONDecodeError as e:
        raise FormatError(e.msg, e.lineno) from None
    if not isinstance(items, list):
        msg = "dendrogram must be a JSON array"
        raise FormatError(msg)

    records: list[RemovalRecord] = []
    seen: set[tuple[NodeId, NodeId]] = set()
    for index, item in enumerate(items, start=1):
        record = _record_from(item, index, graph)
        if record.step != index:
            msg = f"record {index} has step {record.step}"
            raise FormatError(msg)
        if not graph.has_edge(*record.edge) or record.edge in seen:
            msg = f"record {index} removes an edge that is absent or already removed"
            raise FormatError(msg)
        if records and not 0 <= record.components_after - records[-1].components_after <= 1:
            msg = f"record {index} changes the component count by more than one step"
            raise FormatError(msg)
        seen.add(record.edge)
        records.append(record)
    return tuple(records)


def write_curve(curve: ModularityCurve, elbows: Mapping[int, tuple[int, float]] | None = None) -> bytes:
    """
    Serialize a modularity curve as ``k,modularity`` CSV.

    Args:
        curve: The curve.
        elbows: Optional elbow selections keyed by window size, appended as
            ``# elbow w=<w> k=<k> modularity=<q>`` comment lines.

    """
    trailer = [f"elbow w={w} k={k} modularity={q!r}" for w, (k, q) in sorted((elbows or {}).items())]
    return _csv_bytes(CURVE_HEADER, curve.points, trailer)


def write_report(report: ExperimentReport) -> bytes:
    """Serialize an experiment report as CSV, one row per (metric, k)."""
    rows = (
        (report.network, row.metric.value, row.k, row.modularity, "" if row.nmi is None else row.nmi)
        for row in report.rows
    )
    return _csv_bytes(REPORT_HEADER, rows)


def write_stats_table(rows: Iterable[tuple[str, GraphStats]]) -> bytes:
    """Serialize GraphStats rows, one per named network."""
    return _csv_bytes(STATS_HEADER, ((name, *astuple(stats)) for name, stats in rows))


def write_stats(name: str, stats: GraphStats) -> bytes:
    """Serialize one network's GraphStats as a header plus one CSV row."""
    return write_stats_table([(name, stats)])
