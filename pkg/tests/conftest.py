from __future__ import annotations

import random
import tempfile
from pathlib import Path
from typing import TYPE_CHECKING

import networkx as nx
import pytest

from commkit.graph import Graph

if TYPE_CHECKING:
    from collections.abc import Callable, Generator


def karate_pairs() -> list[tuple[str, str]]:
    """Zachary karate club edges with 1-based labels."""
    return [(str(u + 1), str(v + 1)) for u, v in nx.karate_club_graph().edges()]


def karate_gml() -> str:
    """Karate club as GML text, node ids 1..34."""
    lines = ["graph [", "  directed 0"]
    lines += [f"  node [ id {i} label \"n{i}\" ]" for i in range(1, 35)]
    lines += [f"  edge [ source {u} target {v} ]" for u, v in karate_pairs()]
    lines.append("]")
    return "\n".join(lines) + "\n"


def random_graph(seed: int, n: int, p: float) -> Graph:
    """Seeded G(n, p) graph with labels 0..n-1 in id order."""
    rng = random.Random(seed)
    pairs = [(str(u), str(v)) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(pairs, isolated=[str(i) for i in range(n)])


def to_networkx(graph: Graph) -> nx.Graph:
    """Copy a Graph into networkx, keeping node ids."""
    g = nx.Graph()
    g.add_nodes_from(graph.nodes)
    g.add_edges_from(graph.edges())
    return g


@pytest.fixture
def toy() -> Graph:
    """Two triangles' worth of structure: 1-2, 1-3, 2-3, 3-4, 4-5."""
    return Graph.from_edges([("1", "2"), ("1", "3"), ("2", "3"), ("3", "4"), ("4", "5")])


@pytest.fixture
def k3() -> Graph:
    """Triangle."""
    return Graph.from_edges([("a", "b"), ("b", "c"), ("a", "c")])


@pytest.fixture
def k4() -> Graph:
    """Complete graph on four nodes."""
    return Graph.from_edges([(str(u), str(v)) for u in range(4) for v in range(u + 1, 4)])


@pytest.fixture
def star() -> Graph:
    """Star with hub 0 and leaves 1..4."""
    return Graph.from_edges([("0", str(leaf)) for leaf in range(1, 5)])


@pytest.fixture
def karate() -> Graph:
    """Zachary karate club, NodeId = label - 1."""
    return Graph.from_edges(karate_pairs(), isolated=[str(i) for i in range(1, 35)])


@pytest.fixture
def make_random() -> Callable[[int, int, float], Graph]:
    """Factory for seeded random graphs."""
    return random_graph


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for testing."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)
