from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .divisive import Dendrogram


class CommkitError(Exception):
    """Base exception for all commkit errors."""


class NodeNotFoundError(CommkitError):
    """
    A node id or label is not part of the graph.

    Raised by every graph query and score that takes a node argument.
    """

    node: object

    def __init__(self, node: object, message: str | None = None) -> None:
        """
        Initialize NodeNotFoundError with the offending node.

        Args:
            node: The node id (or label) that was looked up.
            message: Optional custom message. If not provided, a default is used.

        """
        self.node = node
        if message is None:
            message = f"Node not found: {node!r}"
        super().__init__(message)


class InvalidPairError(CommkitError):
    """A pair query was made with identical endpoints (u == v)."""


class EdgeNotFoundError(CommkitError):
    """
    An edge-only query was made on a pair that is not an edge.

    Raised by triangles_on_edge() and radicchi_coefficient().
    """

    edge: tuple[int, int]

    def __init__(self, u: int, v: int) -> None:
        """
        Initialize EdgeNotFoundError with the missing pair.

        Args:
            u: First endpoint.
            v: Second endpoint.

        """
        self.edge = (min(u, v), max(u, v))
        super().__init__(f"Edge not found: {self.edge}")


class EmptyGraphError(CommkitError):
    """The operation needs at least one node (or edge) and the graph has none."""


class FormatError(CommkitError):
    """
    Input text does not follow the expected graph file format.

    Raised by all parsers. When the problem can be pinned to a line of input,
    the 1-based line number is available in ``line``.
    """

    line: int | None

    def __init__(self, message: str, line: int | None = None) -> None:
        """
        Initialize FormatError.

        Args:
            message: Description of the problem.
            line: 1-based line number of the first offending line, if known.

        """
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnsupportedFormatError(CommkitError):
    """
    Input is well-formed but describes a graph commkit does not handle.

    Raised for directed GML graphs (``directed 1``).
    """


class InvalidConfigError(CommkitError):
    """A RunConfig is inconsistent, or inconsistent with the graph it is run on."""


class DeadlockStopError(CommkitError):
    """
    The divisive run stopped because every remaining edge is excluded.

    Only Radicchi scoring excludes edges (pendant edges have an undefined
    coefficient). The partial dendrogram built so far is kept in
    ``dendrogram`` so callers can still extract partitions from it.
    """

    dendrogram: Dendrogram

    def __init__(self, dendrogram: Dendrogram) -> None:
        """
        Initialize DeadlockStopError with the partial result.

        Args:
            dendrogram: The dendrogram recorded up to the deadlock.

        """
        self.dendrogram = dendrogram
        message = (
            f"all {dendrogram.remaining_edges} remaining edges are excluded from scoring; "
            f"stopped at {dendrogram.final_components} components after {len(dendrogram.removals)} removals"
        )
        super().__init__(message)


class KNotReachedError(CommkitError):
    """
    A partition was requested at a community count the dendrogram never reached.
    """

    k: int
    reached: int

    def __init__(self, k: int, reached: int) -> None:
        """
        Initialize KNotReachedError.

        Args:
            k: The requested community count.
            reached: The highest community count in the dendrogram.

        """
        self.k = k
        self.reached = reached
        super().__init__(f"k={k} was not reached; the dendrogram ends at {reached} components")


class UndefinedModularityError(CommkitError):
    """Modularity is undefined on a graph without edges."""


class PartitionMismatchError(CommkitError):
    """Two partitions (or a partition and a graph) cover different node sets."""


class InsufficientCurveError(CommkitError):
    """The elbow selector needs a modularity curve with at least two points."""


class DatasetError(CommkitError):
    """
    Benchmark dataset files are missing or do not match the manifest.
    """

    missing: tuple[str, ...]

    def __init__(self, missing: tuple[str, ...], message: str | None = None) -> None:
        """
        Initialize DatasetError.

        Args:
            missing: File names that are absent or failed verification.
            message: Optional custom message. If not provided, a default is used.

        """
        self.missing = missing
        if message is None:
            message = f"Missing dataset files: {', '.join(missing)}"
        super().__init__(message)
