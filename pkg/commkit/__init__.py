from .bench import ExperimentReport, Provenance, ReportRow, compare, reproduce, toolkit_version
from .catalog import MetricId, Orientation, RecomputePolicy, StopReason, get_orientation, is_locality_eligible
from .detector import Detector
from .divisive import Dendrogram, Partition, RemovalRecord, RunConfig, partition_at_k, run_divisive
from .edge_metrics import (
    EdgeScore,
    EdgeScorer,
    GraphStats,
    closeness,
    edge_betweenness,
    eigenvector_centrality,
    graph_stats,
    node_betweenness,
    node_clustering,
    radicchi_coefficient,
    scorer_for,
    similarity,
)
from .errors import (
    CommkitError,
    DatasetError,
    DeadlockStopError,
    EdgeNotFoundError,
    EmptyGraphError,
    FormatError,
    InsufficientCurveError,
    InvalidConfigError,
    InvalidPairError,
    KNotReachedError,
    NodeNotFoundError,
    PartitionMismatchError,
    UndefinedModularityError,
    UnsupportedFormatError,
)
from .evaluation import (
    ContingencyTable,
    ModularityCurve,
    best_point,
    contingency,
    elbow_select,
    entropy,
    modularity,
    modularity_sweep,
    mutual_information,
    nmi,
)
from .graph import ComponentLabeling, Edge, Graph, GraphBuilder, NodeId, make_edge
from .parsers import GraphFormat, ParseDiagnostics, load_graph, parse_edge_list, parse_gml, parse_graph, parse_pajek
from .writers import (
    parse_dendrogram,
    read_partition,
    write_curve,
    write_dendrogram,
    write_edge_list,
    write_partition,
    write_report,
    write_stats,
)

__version__ = toolkit_version()

__all__ = [
    "CommkitError",
    "ComponentLabeling",
    "ContingencyTable",
    "DatasetError",
    "DeadlockStopError",
    "Dendrogram",
    "Detector",
    "Edge",
    "EdgeNotFoundError",
    "EdgeScore",
    "EdgeScorer",
    "EmptyGraphError",
    "ExperimentReport",
    "FormatError",
    "Graph",
    "GraphBuilder",
    "GraphFormat",
    "GraphStats",
    "InsufficientCurveError",
    "InvalidConfigError",
    "InvalidPairError",
    "KNotReachedError",
    "MetricId",
    "ModularityCurve",
    "NodeId",
    "NodeNotFoundError",
    "Orientation",
    "ParseDiagnostics",
    "Partition",
    "PartitionMismatchError",
    "Provenance",
    "RecomputePolicy",
    "RemovalRecord",
    "ReportRow",
    "RunConfig",
    "StopReason",
    "UndefinedModularityError",
    "UnsupportedFormatError",
    "best_point",
    "closeness",
    "compare",
    "contingency",
    "edge_betweenness",
    "eigenvector_centrality",
    "elbow_select",
    "entropy",
    "get_orientation",
    "graph_stats",
    "is_locality_eligible",
    "load_graph",
    "make_edge",
    "modularity",
    "modularity_sweep",
    "mutual_information",
    "nmi",
    "node_betweenness",
    "node_clustering",
    "parse_dendrogram",
    "parse_edge_list",
    "parse_gml",
    "parse_graph",
    "parse_pajek",
    "partition_at_k",
    "radicchi_coefficient",
    "read_partition",
    "reproduce",
    "run_divisive",
    "scorer_for",
    "similarity",
    "write_curve",
    "write_dendrogram",
    "write_edge_list",
    "write_partition",
    "write_report",
    "write_stats",
]
