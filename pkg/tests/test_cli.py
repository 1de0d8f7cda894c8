import json
import subprocess
import sys

import pytest

from cyclefire.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_analyze(capsys, data_dir):
    code, doc, _ = run(capsys, "analyze", data_dir / "diamond.json")
    assert code == 0
    assert (doc["genus"], doc["trees"], doc["group"]) == (2, 8, [8])
    _, doc, _ = run(capsys, "analyze", data_dir / "k5.json")
    assert (doc["genus"], doc["trees"]) == (6, 125)
    _, doc, _ = run(capsys, "analyze", data_dir / "path4.json")
    assert (doc["genus"], doc["trees"], doc["group"]) == (0, 1, [])


def test_analyze_missing_file(capsys, tmp_path):
    code, doc, err = run(capsys, "analyze", tmp_path / "nope.json")
    assert code == 1 and doc is None and "FileNotFoundError" in err


def test_analyze_bad_graph(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"vertices": 2, "edges": [[0, 1], [0, 1]]}))
    code, _, err = run(capsys, "analyze", path)
    assert code == 1 and "duplicate edge 0-1" in err


def test_mbasis(capsys, data_dir, tmp_path):
    out = tmp_path / "cert.json"
    code, doc, _ = run(capsys, "mbasis", data_dir / "k5.json", "--out", out)
    assert code == 0 and doc["determinant"] == "125"
    L = [[int(x) for x in row] for row in doc["dual_laplacian"]]
    assert all(L[i][j] <= 0 for i in range(6) for j in range(6) if i != j)
    assert json.loads(out.read_text()) == doc


def test_mbasis_from_faces_is_unchanged(capsys, data_dir):
    _, faces, _ = run(capsys, "faces", data_dir / "diamond.json")
    _, doc, _ = run(capsys, "mbasis", data_dir / "diamond.json", "--start", "faces")
    assert doc["vectors"] == faces["vectors"]
    assert doc["dual_laplacian"] == [["3", "-1"], ["-1", "3"]]


def test_mbasis_without_rotation(capsys, data_dir):
    code, doc, _ = run(capsys, "mbasis", data_dir / "k33.json", "--start", "fundamental")
    assert code == 0 and doc["determinant"] == "81"


def test_mbasis_rejects_bad_start(capsys, data_dir, tmp_path):
    path = tmp_path / "basis.json"
    path.write_text(json.dumps({"vectors": [[2, -2, 0, 2, 0], [0, 2, -2, 0, 2]]}))
    code, _, err = run(capsys, "mbasis", data_dir / "diamond.json", "--start", path)
    assert code == 1 and "does not span" in err


def test_circuit_basis_exit_codes(capsys, data_dir):
    code, doc, _ = run(capsys, "circuit-basis", data_dir / "k33.json")
    assert code == 0 and len(doc["circuits"]) == 4
    code, doc, _ = run(capsys, "circuit-basis", data_dir / "k5.json", "--exact-lens", "3")
    assert code == 2 and doc["status"] == "infeasible"
    code, doc, _ = run(capsys, "circuit-basis", data_dir / "k5.json", "--budget", "1")
    assert code == 3 and doc["status"] == "inconclusive"


def test_zsuper(capsys, data_dir):
    code, doc, _ = run(capsys, "zsuper", data_dir / "k5.json", "--basis", data_dir / "k5_basis.json")
    assert code == 0
    assert doc["count"] == 125 and doc["histogram"] == [1, 6, 19, 38, 39, 19, 3]
    assert len(doc["maximal"]) == 22
    _, doc, _ = run(capsys, "zsuper", data_dir / "diamond.json", "--basis", "faces")
    assert doc["configurations"] == [[0, 0], [0, 1], [0, 2], [1, 0], [1, 1], [1, 2], [2, 0], [2, 1]]
    for name in ("diamond", "k5", "k33"):
        _, doc, _ = run(capsys, "zsuper", data_dir / f"{name}.json")
        assert doc["count"] == doc["trees"]


def test_zsuper_rejects_non_m_basis(capsys, data_dir, tmp_path):
    path = tmp_path / "basis.json"
    path.write_text(json.dumps({"vectors": [[1, -1, 0, 1, 0], [0, -1, 1, 0, -1]]}))
    code, _, err = run(capsys, "zsuper", data_dir / "diamond.json", "--basis", path)
    assert code == 1 and "not a Z-matrix" in err


def test_stabilize(capsys, data_dir):
    basis = data_dir / "k5_basis.json"
    code, doc, _ = run(capsys, "stabilize", data_dir / "k5.json", "--basis", basis,
                       "--config", "1,1,0,0,0,1", "--multiset", "5,3,8,6,4,6")
    assert code == 0 and doc["result"] == [0] * 6
    _, doc, _ = run(capsys, "stabilize", data_dir / "k5.json", "--basis", basis, "--config", "1,1,0,0,0,1")
    assert doc["firing_counts"] == [0] * 6
    _, doc, _ = run(capsys, "stabilize", data_dir / "k5.json", "--basis", basis, "--config", "9,9,9,9,9,9")
    assert all(s < d for s, d in zip(doc["stable"], [4, 4, 4, 5, 5, 3]))
    _, doc, _ = run(capsys, "stabilize", data_dir / "diamond.json", "--config", "2,0,0")
    assert doc["stable"] == [0, 1, 0]


@pytest.mark.parametrize("config, message", [("1,2", "expected 3"), ("-1,0,0", "effective"), ("a,b", "integers")])
def test_stabilize_errors(capsys, data_dir, config, message):
    code, _, err = run(capsys, "stabilize", data_dir / "diamond.json", f"--config={config}")
    assert code == 1 and message in err


def test_superstables(capsys, data_dir):
    code, doc, _ = run(capsys, "superstables", data_dir / "diamond.json")
    assert code == 0 and doc["count"] == 8
    assert [1, 2, 1] in doc["criticals"] and [0, 0, 0] in doc["configurations"]


def test_faces(capsys, data_dir):
    code, doc, _ = run(capsys, "faces", data_dir / "diamond.json")
    assert code == 0 and doc["group"] == [8]
    code, _, err = run(capsys, "faces", data_dir / "k5.json")
    assert code == 1 and "rotation" in err


def test_usage_errors_exit_1(data_dir):
    proc = subprocess.run([sys.executable, "-m", "cyclefire.cli", "nonsense"], capture_output=True)
    assert proc.returncode == 1
    proc = subprocess.run([sys.executable, "-m", "cyclefire.cli", "circuit-basis",
                           str(data_dir / "k5.json"), "--budget", "x"], capture_output=True)
    assert proc.returncode == 1


def test_output_is_deterministic(data_dir):
    cmd = [sys.executable, "-m", "cyclefire.cli", "circuit-basis", str(data_dir / "k5.json")]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    assert first.returncode == 0
    assert first.stdout == second.stdout
