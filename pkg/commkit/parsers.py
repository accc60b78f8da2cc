from __future__ import annotations

import logging
import re
import shlex
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import TYPE_CHECKING

from .errors import FormatError, UnsupportedFormatError
from .graph import Graph, GraphBuilder

if TYPE_CHECKING:
    import os

logger = logging.getLogger(__name__)


class GraphFormat(str, Enum):
    """Input formats understood by load_graph()."""

    EDGELIST = "edgelist"
    GML = "gml"
    PAJEK = "pajek"

    @classmethod
    def from_path(cls, path: str | os.PathLike[str]) -> GraphFormat:
        """Guess the format from a file extension (.gml, .net/.paj, else edge list)."""
        suffix = Path(path).suffix.lower()
        if suffix == ".gml":
            return cls.GML
        if suffix in {".net", ".paj"}:
            return cls.PAJEK
        return cls.EDGELIST


@dataclass(frozen=True, slots=True)
class ParseDiagnostics:
    """
    What a parser silently repaired while reading a file.

    Attributes:
        dropped_self_loops: Edges (u, u) that were skipped.
        dropped_duplicate_edges: Repeated edges that collapsed into one.
        line_of_first_error: Line of the first fatal problem. Always None on a
            successful parse; failures are reported through FormatError.line.
        discarded_weights: Pajek edge lines whose weight column was ignored.
        symmetrized_arcs: Pajek arcs read as undirected edges.

    """

    dropped_self_loops: int = 0
    dropped_duplicate_edges: int = 0
    line_of_first_error: int | None = None
    discarded_weights: int = 0
    symmetrized_arcs: int = 0


def decode_text(data: bytes | str) -> str:
    """
    Decode UTF-8 input (BOM tolerated) and normalize CRLF line endings to LF.

    Raises:
        FormatError: If the bytes are not valid UTF-8.

    """
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            msg = f"input is not valid UTF-8 (byte offset {exc.start})"
            raise FormatError(msg) from None
    else:
        text = data
    return text.replace("\r\n", "\n")


def _decode(data: bytes | str) -> list[str]:
    return [line.rstrip("\r") for line in decode_text(data).split("\n")]


def _diagnostics(builder: GraphBuilder, *, discarded_weights: int = 0, symmetrized_arcs: int = 0) -> ParseDiagnostics:
    return ParseDiagnostics(
        dropped_self_loops=builder.dropped_self_loops,
        dropped_duplicate_edges=builder.dropped_duplicate_edges,
        discarded_weights=discarded_weights,
        symmetrized_arcs=symmetrized_arcs,
    )


def parse_edge_list(data: bytes | str) -> tuple[Graph, ParseDiagnostics]:
    """
    Parse a whitespace-separated edge list.

    Every line that is neither blank nor a ``#`` comment must hold exactly two
    node labels.

    Args:
        data: File contents (UTF-8 bytes or text). LF and CRLF are accepted.

    Returns:
        The graph and the repairs applied while reading it.

    Raises:
        FormatError: A line does not hold exactly two labels, or the input is
            not UTF-8.

    """
    builder = GraphBuilder()
    for lineno, raw in enumerate(_decode(data), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:  # noqa: PLR2004
            msg = f"expected 2 labels, found {len(tokens)}"
            raise FormatError(msg, lineno)
        builder.add_edge(tokens[0], tokens[1])
    return builder.build(), _diagnostics(builder)


# GML

_GML_TOKEN = re.compile(r'\s+|#[^\n]*|\[|\]|"[^"]*"|[^\s\[\]"]+|"')


@dataclass(frozen=True, slots=True)
class _GmlEntry:
    key: str
    value: str | list[_GmlEntry]
    line: int


def _gml_tokens(lines: list[str]) -> list[tuple[str, int]]:
    text = "\n".join(lines)
    tokens: list[tuple[str, int]] = []
    line = 1
    for match in _GML_TOKEN.finditer(text):
        token = match.group()
        if token == '"':
            msg = "unterminated string"
            raise FormatError(msg, line)
        if not token.isspace() and not token.startswith("#"):
            tokens.append((token, line))
        line += token.count("\n")
    return tokens


def _gml_read(tokens: list[tuple[str, int]]) -> list[_GmlEntry]:
    # explicit stack so deeply nested input cannot exhaust the interpreter stack
    root: list[_GmlEntry] = []
    stack: list[list[_GmlEntry]] = [root]
    opened_at: list[int] = []
    pos = 0
    while pos < len(tokens):
        token, line = tokens[pos]
        if token == "]":
            if len(stack) == 1:
                msg = "unbalanced ']'"
                raise FormatError(msg, line)
            _ = stack.pop()
            _ = opened_at.pop()
            pos += 1
            continue
        if token == "[" or token.startswith('"'):
            msg = f"expected a key, found {token!r}"
            raise FormatError(msg, line)
        if pos + 1 >= len(tokens):
            msg = f"key {token!r} has no value"
            raise FormatError(msg, line)
        value, _ = tokens[pos + 1]
        if value == "]":
            msg = f"key {token!r} has no value"
            raise FormatError(msg, line)
        if value == "[":
            child: list[_GmlEntry] = []
            stack[-1].append(_GmlEntry(token, child, line))
            stack.append(child)
            opened_at.append(line)
        else:
            stack[-1].append(_GmlEntry(token, value.strip('"'), line))
        pos += 2
    if opened_at:
        msg = "unbalanced '[' (block is never closed)"
        raise FormatError(msg, opened_at[-1])
    return root


def _gml_int(entry: _GmlEntry) -> int:
    if isinstance(entry.value, list):
        msg = f"{entry.key} must be an integer, found a block"
        raise FormatError(msg, entry.line)
    try:
        return int(entry.value)
    except ValueError:
        msg = f"{entry.key} must be an integer, found {entry.value!r}"
        raise FormatError(msg, entry.line) from None


def _gml_field(block: _GmlEntry, fields: list[_GmlEntry], key: str) -> _GmlEntry:
    for entry in fields:
        if entry.key == key:
            return entry
    msg = f"{block.key} block without {key!r}"
    raise FormatError(msg, block.line)


def parse_gml(data: bytes | str) -> tuple[Graph, ParseDiagnostics]:
    """
    Parse the subset of GML used by the classic benchmark networks.

    Reads ``graph [ node [ id N ... ] ... edge [ source A target B ... ] ]``.
    Keys other than ``id``, ``source``, ``target`` and ``directed`` are skipped,
    so labels, values and weights are ignored. Nodes are labelled by their id.

    Args:
        data: File contents (UTF-8 bytes or text).

    Returns:
        The graph and the repairs applied while reading it.

    Raises:
        FormatError: Unbalanced brackets, missing graph block, non-integer
            ids, or an edge referring to an undeclared node.
        UnsupportedFormatError: The graph is declared ``directed 1``.

    """
    entries = _gml_read(_gml_tokens(_decode(data)))
    body: list[_GmlEntry] | None = None
    for entry in entries:
        if entry.key == "graph" and isinstance(entry.value, list):
            body = entry.value
            break
    if body is None:
        msg = "no 'graph [ ... ]' block"
        raise FormatError(msg)

    builder = GraphBuilder()
    edge_blocks: list[tuple[_GmlEntry, list[_GmlEntry]]] = []
    for entry in body:
        if entry.key == "directed" and _gml_int(entry) != 0:
            msg = "directed GML graphs are not supported"
            raise UnsupportedFormatError(msg)
        if not isinstance(entry.value, list):
            continue
        if entry.key == "node":
            label = str(_gml_int(_gml_field(entry, entry.value, "id")))
            if label in builder:
                msg = f"node id {label} declared twice"
                raise FormatError(msg, entry.line)
            _ = builder.add_node(label)
        elif entry.key == "edge":
            edge_blocks.append((entry, entry.value))

    for block, fields in edge_blocks:
        ends: list[str] = []
        for key in ("source", "target"):
            ref = _gml_field(block, fields, key)
            label = str(_gml_int(ref))
            if label not in builder:
                msg = f"edge refers to undeclared node id {label}"
                raise FormatError(msg, ref.line)
            ends.append(label)
        builder.add_edge(ends[0], ends[1])
    return builder.build(), _diagnostics(builder)


# Pajek

_PAJEK_EDGE_SECTIONS = {"*edges": False, "*arcs": True}
_PAJEK_LIST_SECTIONS = {"*edgeslist": False, "*arcslist": True}
# larger vertex tables than this are rejected before anything is allocated
MAX_PAJEK_VERTICES = 1_000_000


def _pajek_ids(tokens: list[str], count: int, lineno: int) -> list[int]:
    ids: list[int] = []
    for token in tokens:
        try:
            value = int(token)
        except ValueError:
            msg = f"vertex id must be an integer, found {token!r}"
            raise FormatError(msg, lineno) from None
        if not 1 <= value <= count:
            msg = f"vertex id {value} out of range 1..{count}"
            raise FormatError(msg, lineno)
        ids.append(value)
    return ids


def parse_pajek(data: bytes | str) -> tuple[Graph, ParseDiagnostics]:  # noqa: C901, PLR0912
    """
    Parse a Pajek ``.net`` file.

    Supports ``*Vertices N`` with optional ``id "label"`` lines, followed by
    ``*Edges`` / ``*Arcs`` (one pair per line, extra columns such as weights are
    discarded) or ``*Edgeslist`` / ``*Arcslist`` (adjacency lists). Arcs are
    read as undirected edges. Vertices without a label line are labelled by
    their 1-based id.

    Args:
        data: File contents (UTF-8 bytes or text).

    Returns:
        The graph and the repairs applied while reading it.

    Raises:
        FormatError: Missing ``*Vertices`` header, vertex id out of range,
            malformed lines, a vertex count above MAX_PAJEK_VERTICES, or
            duplicate vertex labels.
        UnsupportedFormatError: A section kind commkit does not read (e.g. ``*Matrix``).

    """
    count: int | None = None
    labels: list[str] = []
    builder: GraphBuilder | None = None
    section = ""
    weights = 0
    arcs = 0

    for lineno, raw in enumerate(_decode(data), start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        if line.startswith("*"):
            head = line.split()
            if head[0].lower() == "*network":
                continue
            section = head[0].lower()
            if section == "*vertices":
                if count is not None or len(head) < 2:  # noqa: PLR2004
                    msg = "malformed or repeated *Vertices header"
                    raise FormatError(msg, lineno)
                try:
                    count = int(head[1])
                except ValueError:
                    msg = f"vertex count must be an integer, found {head[1]!r}"
                    raise FormatError(msg, lineno) from None
                if count < 0:
                    msg = "vertex count must not be negative"
                    raise FormatError(msg, lineno)
                if count > MAX_PAJEK_VERTICES:
                    msg = f"vertex count {count} exceeds the supported maximum of {MAX_PAJEK_VERTICES}"
                    raise FormatError(msg, lineno)
                labels = [str(i) for i in range(1, count + 1)]
                continue
            if count is None:
                msg = "missing *Vertices header"
                raise FormatError(msg, lineno)
            if section not in _PAJEK_EDGE_SECTIONS and section not in _PAJEK_LIST_SECTIONS:
                msg = f"unsupported Pajek section {head[0]}"
                raise UnsupportedFormatError(msg)
            if builder is None:
                builder = _pajek_nodes(labels, lineno)
            continue

        if count is None:
            msg = "missing *Vertices header"
            raise FormatError(msg, lineno)
        try:
            tokens = shlex.split(line)
        except ValueError:
            msg = "unbalanced quotes"
            raise FormatError(msg, lineno) from None
        if not tokens:
            continue

        if section == "*vertices":
            (vid,) = _pajek_ids(tokens[:1], count, lineno)
            if len(tokens) > 1:
                labels[vid - 1] = tokens[1]
            continue

        assert builder is not None  # noqa: S101
        if section in _PAJEK_EDGE_SECTIONS:
            if len(tokens) < 2:  # noqa: PLR2004
                msg = "edge line needs two vertex ids"
                raise FormatError(msg, lineno)
            a, b = _pajek_ids(tokens[:2], count, lineno)
            if len(tokens) > 2:  # noqa: PLR2004
                weights += 1
            if _PAJEK_EDGE_SECTIONS[section]:
                arcs += 1
            builder.add_edge(labels[a - 1], labels[b - 1])
        else:
            ids = _pajek_ids(tokens, count, lineno)
            for b in ids[1:]:
                if _PAJEK_LIST_SECTIONS[section]:
                    arcs += 1
                builder.add_edge(labels[ids[0] - 1], labels[b - 1])

    if count is None:
        msg = "missing *Vertices header"
        raise FormatError(msg, 1)
    if builder is None:
        builder = _pajek_nodes(labels, None)
    if weights:
        logger.warning("Discarded the weight column of %d Pajek edge line(s)", weights)
    if arcs:
        logger.warning("Read %d Pajek arc(s) as undirected edges", arcs)
    return builder.build(), _diagnostics(builder, discarded_weights=weights, symmetrized_arcs=arcs)


def _pajek_nodes(labels: list[str], lineno: int | None) -> GraphBuilder:
    builder = GraphBuilder()
    for label in labels:
        if label in builder:
            msg = f"duplicate vertex label {label!r}"
            raise FormatError(msg, lineno)
        _ = builder.add_node(label)
    return builder


_PARSERS = {
    GraphFormat.EDGELIST: parse_edge_list,
    GraphFormat.GML: parse_gml,
    GraphFormat.PAJEK: parse_pajek,
}


def parse_graph(data: bytes | str, fmt: GraphFormat) -> tuple[Graph, ParseDiagnostics]:
    """Parse data in the given format."""
    return _PARSERS[fmt](data)


def load_graph(
    path: str | os.PathLike[str],
    fmt: GraphFormat | None = None,
) -> tuple[Graph, ParseDiagnostics]:
    """
    Read and parse a graph file.

    Args:
        path: File to read.
        fmt: Input format. Guessed from the extension when None.

    Returns:
        The graph and the repairs applied while reading it.

    Raises:
        OSError: The file cannot be read.
        FormatError: The contents do not follow the format.
        UnsupportedFormatError: The contents describe an unsupported graph.

    """
    if fmt is None:
        fmt = GraphFormat.from_path(path)
    graph, diagnostics = parse_graph(Path(path).read_bytes(), fmt)
    logger.info("Loaded %s (%s): %d nodes, %d edges", path, fmt.value, graph.node_count, graph.edge_count)
    return graph, diagnostics
