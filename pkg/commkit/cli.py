from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import fields
from pathlib import Path
from typing import TYPE_CHECKING

from .bench import DATASET_DIR_ENV, compare, file_sha256, reference_from_run, reproduce, toolkit_version
from .catalog import MetricId, RecomputePolicy
from .divisive import RunConfig, partition_at_k, run_divisive
from .edge_metrics import graph_stats
from .errors import CommkitError, DeadlockStopError, InvalidConfigError, KNotReachedError
from .evaluation import best_point, elbow_select, modularity, modularity_sweep
from .parsers import GraphFormat, load_graph
from .writers import read_partition, write_curve, write_dendrogram, write_partition, write_report, write_stats

if TYPE_CHECKING:
    from collections.abc import Sequence

    from .divisive import Dendrogram, Partition
    from .graph import Graph

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED_CELLS = 1
EXIT_INPUT = 2
EXIT_ALGORITHMIC_STOP = 3

_ELBOW_WINDOWS = (2, 3, 5)


def _out(text: str) -> None:
    _ = sys.stdout.write(text + "\n")


def _err(text: str) -> None:
    _ = sys.stderr.write(text + "\n")


def _metric(text: str) -> MetricId:
    try:
        return MetricId.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _metric_list(text: str) -> list[MetricId]:
    return [_metric(part) for part in text.split(",") if part.strip()]


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        msg = f"expected a positive integer, got {text}"
        raise argparse.ArgumentTypeError(msg)
    return value


def _load(args: argparse.Namespace) -> Graph:
    fmt = GraphFormat(args.format) if args.format else None
    graph, diagnostics = load_graph(args.input, fmt)
    logger.debug("Parse diagnostics: %s", diagnostics)
    return graph


def _write_bytes(path: str | None, data: bytes) -> None:
    if path is None:
        sys.stdout.flush()
        _ = sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        _ = Path(path).write_bytes(data)


# Subcommands


def cmd_stats(args: argparse.Namespace) -> int:
    """Print the descriptive statistics of a network."""
    graph = _load(args)
    stats = graph_stats(graph)
    width = max(len(field.name) for field in fields(stats))
    for field in fields(stats):
        value = getattr(stats, field.name)
        rendered = f"{value:.3f}" if isinstance(value, float) else str(value)
        _out(f"{field.name:<{width}}  {rendered}")
    if args.csv:
        _ = Path(args.csv).write_bytes(write_stats(Path(args.input).stem, stats))
    return EXIT_OK


def _write_detect_outputs(args: argparse.Namespace, dendrogram: Dendrogram, partition: Partition | None) -> None:
    graph = dendrogram.base_graph
    if args.out_dendrogram:
        _ = Path(args.out_dendrogram).write_bytes(write_dendrogram(dendrogram, graph.labels))
    if args.out_partition and partition is not None:
        _ = Path(args.out_partition).write_bytes(write_partition(partition, graph.labels))


def cmd_detect(args: argparse.Namespace) -> int:
    """Split a network with one metric and report the partition's modularity."""
    graph = _load(args)
    config = RunConfig(args.metric, None if args.all else args.k, RecomputePolicy(args.policy))
    try:
        dendrogram = run_divisive(graph, config)
    except DeadlockStopError as e:
        partial = e.dendrogram
        _write_detect_outputs(args, partial, partition_at_k(partial, partial.final_components))
        _out(f"stop_reason={partial.stop_reason.value} components={partial.final_components}")
        raise

    if args.all:
        curve = modularity_sweep(graph, dendrogram, dendrogram.final_components, k_min=1)
        k, _ = best_point(curve)
    else:
        k = args.k
    partition = partition_at_k(dendrogram, k)
    _write_detect_outputs(args, dendrogram, partition)
    _out(f"k={partition.community_count} Q={modularity(graph, partition):.6f}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    """Emit the modularity curve of one metric with its elbow selections."""
    graph = _load(args)
    target = min(args.k_max, graph.node_count)
    config = RunConfig(args.metric, target if target >= 2 else None, RecomputePolicy(args.policy))  # noqa: PLR2004
    try:
        dendrogram = run_divisive(graph, config)
    except DeadlockStopError as e:
        curve = modularity_sweep(graph, e.dendrogram, args.k_max, k_min=args.k_min)
        _write_bytes(args.out, write_curve(curve))
        _err(f"stop_reason={e.dendrogram.stop_reason.value} components={e.dendrogram.final_components}")
        raise

    curve = modularity_sweep(graph, dendrogram, args.k_max, k_min=args.k_min)
    elbows = {w: elbow_select(curve, w) for w in _ELBOW_WINDOWS if len(curve) >= 2}  # noqa: PLR2004
    _write_bytes(args.out, write_curve(curve, elbows))
    return EXIT_OK


def _resolve_reference(source: str | None, graph: Graph, k: int) -> Partition | None:
    if source is None:
        return None
    if source.startswith("run:"):
        try:
            metric = MetricId.parse(source.removeprefix("run:"))
        except ValueError as e:
            raise InvalidConfigError(str(e)) from None
        return reference_from_run(graph, metric, k)
    return read_partition(Path(source).read_bytes(), graph)


def cmd_compare(args: argparse.Namespace) -> int:
    """Run several metrics at the same k and score them against a reference."""
    graph = _load(args)
    reference = _resolve_reference(args.reference, graph, args.k)
    report = compare(
        graph,
        Path(args.input).stem,
        args.metrics,
        args.k,
        reference=reference,
        reference_label=args.reference,
        input_sha256=file_sha256(Path(args.input)),
    )
    _write_bytes(args.out, write_report(report))
    provenance = report.provenance.to_json()
    if args.out:
        _ = Path(f"{args.out}.provenance.json").write_bytes(provenance)
    else:
        # stdout carries the CSV, so the provenance block goes to stderr
        _ = sys.stderr.write(provenance.decode("utf-8"))
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    """Regenerate every benchmark table and print per-cell verdicts."""
    dataset_dir = args.dataset_dir or os.environ.get(DATASET_DIR_ENV)
    if not dataset_dir:
        msg = f"no dataset directory: pass --dataset-dir or set {DATASET_DIR_ENV}"
        raise InvalidConfigError(msg)
    networks = [name for name in args.networks.split(",") if name.strip()] if args.networks else None
    result = reproduce(Path(dataset_dir), Path(args.out), networks=networks, workers=args.workers)
    for cell in result.cells:
        _out(cell.describe())
    failed = result.failed
    _out(f"{len(result.cells)} cells, {len(failed)} hard failure(s), {len(result.files)} files written")
    return EXIT_FAILED_CELLS if failed else EXIT_OK


# Parser


def _add_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="graph file")
    parser.add_argument(
        "--format",
        choices=[fmt.value for fmt in GraphFormat],
        help="input format (default: guessed from the file extension)",
    )


def _add_policy(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--policy",
        choices=[policy.value for policy in RecomputePolicy],
        default=RecomputePolicy.FULL.value,
        help="score refresh after each removal (default: full)",
    )


def build_parser() -> argparse.ArgumentParser:
    """Build the ``commkit`` argument parser."""
    parser = argparse.ArgumentParser(prog="commkit", description="Divisive community detection toolkit.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {toolkit_version()}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="explicit log level (overrides -v)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    stats = sub.add_parser("stats", help="descriptive statistics of a network")
    _add_input(stats)
    stats.add_argument("--csv", help="also write the statistics as CSV")
    stats.set_defaults(handler=cmd_stats)

    detect = sub.add_parser("detect", help="split a network with one metric")
    _add_input(detect)
    detect.add_argument("--metric", type=_metric, required=True)
    target = detect.add_mutually_exclusive_group(required=True)
    target.add_argument("--k", type=int, help="number of communities (>= 2)")
    target.add_argument("--all", action="store_true", help="run to the end and keep the best-modularity k")
    _add_policy(detect)
    detect.add_argument("--out-partition", help="partition CSV output")
    detect.add_argument("--out-dendrogram", help="dendrogram JSON output")
    detect.set_defaults(handler=cmd_detect)

    sweep = sub.add_parser("sweep", help="modularity curve of one metric")
    _add_input(sweep)
    sweep.add_argument("--metric", type=_metric, required=True)
    sweep.add_argument("--k-max", type=_positive, default=10)
    sweep.add_argument("--k-min", type=_positive, default=2, help="use 1 to include the unsplit baseline")
    _add_policy(sweep)
    sweep.add_argument("--out", help="curve CSV output (default: stdout)")
    sweep.set_defaults(handler=cmd_sweep)

    comp = sub.add_parser("compare", help="compare metrics at one k")
    _add_input(comp)
    comp.add_argument("--metrics", type=_metric_list, required=True, help="comma-separated metric ids")
    comp.add_argument("--k", type=int, required=True)
    comp.add_argument("--reference", help="partition CSV path, or run:<metric>")
    comp.add_argument("--out", help="report CSV output (default: stdout)")
    comp.set_defaults(handler=cmd_compare)

    repro = sub.add_parser("reproduce", help="regenerate the benchmark tables")
    repro.add_argument("--dataset-dir", help=f"benchmark files (default: ${DATASET_DIR_ENV})")
    repro.add_argument("--out", required=True, help="output directory")
    repro.add_argument("--workers", type=_positive, default=1)
    repro.add_argument("--networks", help="comma-separated subset of networks")
    repro.set_defaults(handler=cmd_reproduce)
    return parser


def _configure_logging(args: argparse.Namespace) -> None:
    if args.log_level:
        level = getattr(logging, args.log_level)
    else:
        level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def main(argv: Sequence[str] | None = None) -> int:
    """
    Run the ``commkit`` command line.

    Returns:
        0 on success, 1 when reproduce has failing hard cells, 2 on input or
        usage errors, 3 when a run deadlocks or never reaches the requested k.

    """
    args = build_parser().parse_args(argv)
    _configure_logging(args)
    try:
        return args.handler(args)
    except (DeadlockStopError, KNotReachedError) as e:
        _err(f"commkit: {e}")
        return EXIT_ALGORITHMIC_STOP
    except (CommkitError, OSError) as e:
        _err(f"commkit: {e}")
        return EXIT_INPUT
