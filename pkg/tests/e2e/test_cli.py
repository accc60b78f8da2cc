import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from tests.conftest import karate_gml


def _commkit(*args: str, env: dict[str, str] | None = None) -> subprocess.CompletedProcess[str]:
    return subprocess.run(
        [sys.executable, "-m", "commkit", *args],
        capture_output=True,
        text=True,
        timeout=300,
        check=False,
        env={**os.environ, **(env or {})},
    )


@pytest.fixture
def karate_file(temp_dir: Path) -> Path:
    """Karate club written as GML."""
    path = temp_dir / "karate.gml"
    _ = path.write_text(karate_gml())
    return path


@pytest.fixture
def star_file(temp_dir: Path) -> Path:
    """Star graph written as an edge list."""
    path = temp_dir / "star.txt"
    _ = path.write_text("c x\nc y\nc z\n")
    return path


class TestStatsCommand:
    """E2E tests for commkit stats."""

    def test_karate(self, karate_file: Path, temp_dir: Path) -> None:
        """Should print the karate features and write CSV."""
        csv_path = temp_dir / "stats.csv"
        result = _commkit("stats", str(karate_file), "--csv", str(csv_path))
        assert result.returncode == 0, result.stderr
        assert "node_count" in result.stdout
        assert "4.588" in result.stdout
        assert csv_path.read_text().splitlines()[1].startswith("karate,34,78,")

    def test_pajek(self, temp_dir: Path) -> None:
        """Should read a Pajek file with an explicit format."""
        path = temp_dir / "tiny.txt"
        _ = path.write_text('*Vertices 3\n1 "a"\n2 "b"\n3 "c"\n*Edges\n1 2\n2 3\n')
        result = _commkit("stats", "--format", "pajek", str(path))
        assert result.returncode == 0, result.stderr
        assert "edge_count" in result.stdout

    def test_malformed_file(self, temp_dir: Path) -> None:
        """Should exit 2 with the offending line number."""
        path = temp_dir / "bad.txt"
        _ = path.write_text("1 2\n3\n")
        result = _commkit("stats", str(path))
        assert result.returncode == 2
        assert "line 2" in result.stderr

    def test_missing_file(self, temp_dir: Path) -> None:
        """Should exit 2 when the input does not exist."""
        result = _commkit("stats", str(temp_dir / "nope.txt"))
        assert result.returncode == 2


class TestDetectCommand:
    """E2E tests for commkit detect."""

    def test_betweenness_two_way(self, karate_file: Path, temp_dir: Path) -> None:
        """Should split karate in two with Q close to 0.360."""
        partition = temp_dir / "p.csv"
        dendrogram = temp_dir / "d.json"
        result = _commkit(
            "detect",
            str(karate_file),
            "--metric",
            "betweenness",
            "--k",
            "2",
            "--out-partition",
            str(partition),
            "--out-dendrogram",
            str(dendrogram),
        )
        assert result.returncode == 0, result.stderr
        line = result.stdout.strip()
        assert line.startswith("k=2 Q=")
        assert float(line.split("Q=")[1]) == pytest.approx(0.360, abs=0.005)
        rows = partition.read_text().splitlines()
        assert rows[0] == "node,community"
        assert len(rows) == 35
        records = json.loads(dendrogram.read_text())
        assert records[-1]["components_after"] == 2

    def test_all(self, karate_file: Path) -> None:
        """Should pick the best-modularity k of a full run."""
        result = _commkit("detect", str(karate_file), "--metric", "betweenness", "--all")
        assert result.returncode == 0, result.stderr
        assert result.stdout.startswith("k=5 ")

    def test_salton_five_way(self, karate_file: Path) -> None:
        """Should report the smallest-edge tie path value for Salton at k = 5."""
        result = _commkit("detect", str(karate_file), "--metric", "sa", "--k", "5")
        assert result.returncode == 0, result.stderr
        line = result.stdout.splitlines()[0]
        assert line.startswith("k=5 Q=")
        assert float(line.split("Q=")[1]) == pytest.approx(0.366, abs=0.0006)

    def test_star_deadlock(self, star_file: Path) -> None:
        """Should exit 3 when Radicchi deadlocks."""
        result = _commkit("detect", str(star_file), "--metric", "radicchi", "--k", "2")
        assert result.returncode == 3
        assert "stop_reason=deadlock" in result.stdout

    def test_unknown_metric(self, karate_file: Path) -> None:
        """Should exit 2 on an unknown metric."""
        result = _commkit("detect", str(karate_file), "--metric", "katz", "--k", "2")
        assert result.returncode == 2

    def test_k_below_two(self, karate_file: Path) -> None:
        """Should exit 2 for k = 1."""
        result = _commkit("detect", str(karate_file), "--metric", "ja", "--k", "1")
        assert result.returncode == 2

    def test_neighborhood_for_betweenness(self, karate_file: Path) -> None:
        """Should exit 2 when NEIGHBORHOOD is requested for betweenness."""
        result = _commkit(
            "detect", str(karate_file), "--metric", "betweenness", "--k", "2", "--policy", "neighborhood"
        )
        assert result.returncode == 2


class TestSweepCommand:
    """E2E tests for commkit sweep."""

    def test_karate_curve(self, karate_file: Path, temp_dir: Path) -> None:
        """Should write k = 2..10 with elbow comments."""
        out = temp_dir / "curve.csv"
        result = _commkit("sweep", str(karate_file), "--metric", "betweenness", "--out", str(out))
        assert result.returncode == 0, result.stderr
        lines = out.read_text().splitlines()
        assert lines[0] == "k,modularity"
        data = [line.split(",") for line in lines[1:] if not line.startswith("#")]
        assert [int(k) for k, _ in data] == list(range(2, 11))
        best = max(data, key=lambda row: float(row[1]))
        assert best[0] == "5"
        assert sum(line.startswith("# elbow") for line in lines) == 3

    def test_single_point(self, karate_file: Path) -> None:
        """Should print one data row to stdout for k-max 2."""
        result = _commkit("sweep", str(karate_file), "--metric", "betweenness", "--k-max", "2")
        assert result.returncode == 0, result.stderr
        lines = result.stdout.splitlines()
        assert len(lines) == 2
        assert lines[1].startswith("2,")


class TestCompareCommand:
    """E2E tests for commkit compare."""

    def test_reference_run(self, karate_file: Path, temp_dir: Path) -> None:
        """Should write one row per metric and a provenance sidecar."""
        out = temp_dir / "report.csv"
        result = _commkit(
            "compare",
            str(karate_file),
            "--metrics",
            "ja,betweenness",
            "--k",
            "4",
            "--reference",
            "run:betweenness",
            "--out",
            str(out),
        )
        assert result.returncode == 0, result.stderr
        lines = out.read_text().splitlines()
        assert lines[0] == "network,metric,k,modularity,nmi_vs_reference"
        assert [line.split(",")[1] for line in lines[1:]] == ["betweenness", "ja"]
        assert float(lines[1].split(",")[4]) == pytest.approx(1.0)
        provenance = json.loads(Path(f"{out}.provenance.json").read_text())
        assert provenance["config"]["reference"] == "run:betweenness"
        assert len(provenance["input_sha256"]) == 64

    def test_partition_reference(self, karate_file: Path, temp_dir: Path) -> None:
        """Should read a reference partition CSV."""
        reference = temp_dir / "ref.csv"
        _ = reference.write_text("node,community\n" + "".join(f"{i},{i % 2}\n" for i in range(1, 35)))
        result = _commkit("compare", str(karate_file), "--metrics", "sa", "--k", "3", "--reference", str(reference))
        assert result.returncode == 0, result.stderr
        assert result.stdout.splitlines()[1].startswith("karate,sa,3,")

    def test_provenance_on_stderr_without_out(self, karate_file: Path) -> None:
        """Should print the provenance block to stderr when the report goes to stdout."""
        result = _commkit("compare", str(karate_file), "--metrics", "ja", "--k", "2", "--reference", "run:ja")
        assert result.returncode == 0, result.stderr
        assert result.stdout.startswith("network,metric,k,modularity,nmi_vs_reference\n")
        assert "input_sha256" not in result.stdout
        start = result.stderr.index('{\n  "config"')
        provenance = json.loads(result.stderr[start : result.stderr.index("\n}", start) + 2])
        assert provenance["config"]["reference"] == "run:ja"
        assert len(provenance["input_sha256"]) == 64


class TestReproduceCommand:
    """E2E tests for commkit reproduce."""

    def test_missing_dataset_dir(self, temp_dir: Path) -> None:
        """Should exit 2 when the dataset files are absent."""
        result = _commkit("reproduce", "--out", str(temp_dir / "out"), env={"COMMKIT_DATASET_DIR": str(temp_dir)})
        assert result.returncode == 2
        assert "Missing dataset files" in result.stderr

    def test_karate_only(self, karate_file: Path, temp_dir: Path) -> None:
        """Should run the karate cells and print verdicts."""
        out = temp_dir / "out"
        result = _commkit(
            "reproduce", "--dataset-dir", str(karate_file.parent), "--out", str(out), "--networks", "karate"
        )
        assert result.returncode == 1, result.stderr
        assert "PASS table2 karate max_q" in result.stdout
        assert (out / "table1.csv").is_file()
