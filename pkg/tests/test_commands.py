# Test cases for the magdiv commands and the command-line entry point

# Imports
import json
import math
from pathlib import Path

import pytest

import main
from modules.diversity.profile import InvalidGrid
from modules.report.commands import (
    InputKind,
    cmd_check,
    cmd_converge,
    cmd_diversity,
    cmd_gen,
    cmd_magnitude,
    cmd_oracle,
    cmd_probe,
    cmd_profile,
    convergence_table,
)
from modules.tree.generator import LengthLaw
from modules.tree.tree_file import HEADER, load_tree
from modules.tree.weighted_tree import WeightedTree


# Helper functions
def write(path: Path, text: str) -> Path:
    path.write_text(text)
    return path


# Fixtures
@pytest.fixture()
def two_point_file(tmp_path) -> Path:
    return write(tmp_path / "two.tree", f"{HEADER}\na b 2.0\n")


@pytest.fixture()
def star_file(tmp_path) -> Path:
    return write(tmp_path / "star.tree", f"{HEADER}\nc x 0.5\nc y 0.5\nc z 0.5\n")


@pytest.fixture()
def path_file(tmp_path) -> Path:
    return write(tmp_path / "path.tree", f"{HEADER}\na b 0.3\nb c 0.9\n")


@pytest.fixture()
def matrix_file(tmp_path) -> Path:
    return write(tmp_path / "square.csv", "label,p,q,r,s\np,0,1,1.5,1\nq,1,0,1,1.5\nr,1.5,1,0,1\ns,1,1.5,1,0\n")


# Command tests
def test_magnitude_two_points(two_point_file: Path) -> None:
    """Test the magnitude report of a single edge of length 2."""

    results = cmd_magnitude(two_point_file).results
    assert results["magnitude"] == pytest.approx(1.0 + math.tanh(1.0), abs=1e-12)
    assert results["weights"]["a"] == pytest.approx(1.0 / (1.0 + math.exp(-2.0)))
    assert results["residual"] <= 1e-9


def test_magnitude_single_vertex(tmp_path) -> None:
    """Test that a lone vertex has magnitude 1."""

    results = cmd_magnitude(write(tmp_path / "one.tree", f"{HEADER}\na\n")).results
    assert results["magnitude"] == 1.0
    assert results["edges"] == 0


def test_magnitude_matrix(matrix_file: Path) -> None:
    """Test the dense weighting of a distance matrix."""

    results = cmd_magnitude(matrix_file, InputKind.MATRIX).results
    assert results["points"] == 4
    assert results["residual"] <= 1e-9
    assert sum(results["weights"].values()) == pytest.approx(results["magnitude"])


def test_diversity_two_points(two_point_file: Path) -> None:
    """Test that two points keep both points and are certified."""

    results = cmd_diversity(two_point_file).results
    assert set(results["support"]) == {"a", "b"}
    assert results["certified"] is True
    assert results["certificate"]["min_off_support_slack"] is None


def test_diversity_scale(two_point_file: Path) -> None:
    """Test that --scale multiplies the distances."""

    results = cmd_diversity(two_point_file, scale_factor=0.5).results
    assert results["diversity"] == pytest.approx(1.0 + math.tanh(0.5), abs=1e-12)
    assert results["scale"] == 0.5


def test_diversity_star(star_file: Path) -> None:
    """Test that the center of a short star is outside the support and flagged by both exclusion tests."""

    results = cmd_diversity(star_file).results
    assert "c" not in results["support"]
    assert results["excluded_by_inequality"] == ["c"]
    assert results["excluded_by_certificate"] == ["c"]


def test_diversity_matrix(matrix_file: Path) -> None:
    """Test peeling on a distance matrix against the oracle."""

    peeled = cmd_diversity(matrix_file, InputKind.MATRIX).results
    exact = cmd_oracle(matrix_file, InputKind.MATRIX).results
    assert "certified" in peeled
    if peeled["certified"]:
        assert peeled["diversity"] == pytest.approx(exact["diversity"], abs=1e-9)


def test_oracle_matches_diversity(path_file: Path) -> None:
    """Test that the oracle and peeling agree on a three-vertex path."""

    exact = cmd_oracle(path_file).results
    peeled = cmd_diversity(path_file).results
    assert exact["diversity"] == pytest.approx(peeled["diversity"], abs=1e-9)
    assert sorted(exact["winning_subset"]) == ["a", "b", "c"]


def test_profile_limits(path_file: Path, tmp_path) -> None:
    """Test the ends of the profile and the pending CSV sidecar."""

    csv_path = tmp_path / "profile.csv"
    report = cmd_profile(path_file, tmin=1e-4, tmax=1e4, steps=9, csv_path=csv_path)
    profile = report.results["profile"]

    assert profile[0]["diversity"] == pytest.approx(1.0, abs=0.01)
    assert profile[-1]["diversity"] == pytest.approx(3.0, abs=0.01)
    assert all(b["diversity"] >= a["diversity"] - 1e-9 for a, b in zip(profile, profile[1:]))

    table = report.outputs[csv_path]
    assert table.splitlines()[0] == "t,diversity,support_size,certified,magnitude,log_slope"
    assert len(table.splitlines()) == 10
    assert not csv_path.exists()


def test_profile_invalid_grid(path_file: Path) -> None:
    """Test that an invalid grid is rejected."""

    with pytest.raises(InvalidGrid):
        cmd_profile(path_file, tmin=2.0, tmax=1.0)


def test_convergence_table() -> None:
    """Test that gaps to 1 + L/2 are positive, shrink about fourfold per doubling, and start at the magnitude."""

    t = WeightedTree(("a", "b"), (("a", "b", 1.0),))
    rows = convergence_table(t, [1, 2, 4, 8])

    assert rows[0]["magnitude"] == pytest.approx(1.0 + math.tanh(0.5))
    assert rows[0]["order"] is None
    assert all(row["target"] == 1.5 for row in rows)
    assert all(row["gap"] > 0 for row in rows)
    assert all(a["gap"] > b["gap"] for a, b in zip(rows, rows[1:]))
    for a, b in zip(rows, rows[1:]):
        assert 3.5 <= a["gap"] / b["gap"] <= 4.5
    assert rows[-1]["order"] == pytest.approx(2.0, abs=0.05)
    assert all(a["atom_gap"] > b["atom_gap"] for a, b in zip(rows, rows[1:]))


@pytest.mark.parametrize("k_list", [[], [0, 1], [2, 1], [1, 1]])
def test_convergence_table_invalid(k_list: list[int]) -> None:
    """Test that subdivision factors must be positive and increasing."""

    with pytest.raises(InvalidGrid):
        convergence_table(WeightedTree(("a", "b"), (("a", "b", 1.0),)), k_list)


def test_converge_csv(two_point_file: Path, tmp_path) -> None:
    """Test the converge report and its CSV sidecar."""

    csv_path = tmp_path / "converge.csv"
    report = cmd_converge(two_point_file, [1, 2, 4], csv_path)
    assert report.results["continuum_magnitude"] == 2.0
    assert report.outputs[csv_path].splitlines()[0] == "k,magnitude,target,gap,order,atom_gap"


def test_gen(tmp_path) -> None:
    """Test that generation is deterministic per seed and only pending until the command finishes."""

    out = tmp_path / "gen.tree"
    first = cmd_gen(10, LengthLaw(), 7, out)
    second = cmd_gen(10, LengthLaw(), 7, out)

    assert first.input_digest == second.input_digest == first.results["digest"]
    assert first.outputs[out] == second.outputs[out]
    assert not out.exists()

    two = cmd_gen(2, LengthLaw.fixed(1.0), 0, out)
    assert two.outputs[out] == f"{HEADER}\nv0 v1 1\n"


def test_check(two_point_file: Path, tmp_path) -> None:
    """Test certificates of user-supplied measures."""

    uniform = write(tmp_path / "uniform.json", json.dumps({"a": 0.5, "b": 0.5}))
    results = cmd_check(two_point_file, uniform).results
    assert results["certified"] is True
    assert results["diversity"] == pytest.approx(1.0 + math.tanh(1.0), abs=1e-12)

    dirac = write(tmp_path / "dirac.json", json.dumps({"a": 1.0}))
    results = cmd_check(two_point_file, dirac).results
    assert results["certified"] is False
    assert results["support"] == ["a"]

    with pytest.raises(KeyError):
        cmd_check(two_point_file, write(tmp_path / "unknown.json", json.dumps({"z": 1.0})))
    with pytest.raises(ValueError):
        cmd_check(two_point_file, write(tmp_path / "list.json", json.dumps([0.5, 0.5])))


@pytest.mark.parametrize("mass", [None, [1], "half", {"value": 1}])
def test_check_rejects_non_numeric_masses(two_point_file: Path, tmp_path, mass) -> None:
    """Test that a mass that is not a number is a ValueError naming the point."""

    measure = write(tmp_path / "bad.json", json.dumps({"a": mass, "b": 0.5}))
    with pytest.raises(ValueError, match="'a'"):
        cmd_check(two_point_file, measure)


def test_probe_writes_counterexamples_only_when_found(tmp_path) -> None:
    """Test that the counterexample artifact is only produced for failing instances."""

    path = tmp_path / "counterexamples.json"
    report = cmd_probe(count=3, min_points=4, max_points=5, seed=2, counterexamples_path=path)
    assert report.results["instances"] == 3
    assert (path in report.outputs) == bool(report.results["counterexamples"])


# Entry point tests
def test_main_prints_report(two_point_file: Path, capsys) -> None:
    """Test that the report is the only thing on stdout and the exit status is 0."""

    assert main.main(["magnitude", str(two_point_file)]) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["command"] == "magnitude"
    assert document["results"]["magnitude"] == pytest.approx(1.0 + math.tanh(1.0), abs=1e-12)


def test_main_is_deterministic(path_file: Path, capsys) -> None:
    """Test that reruns on the same input print identical bytes."""

    main.main(["diversity", str(path_file)])
    first = capsys.readouterr().out
    main.main(["diversity", str(path_file)])
    assert capsys.readouterr().out == first


def test_main_writes_files(tmp_path, capsys) -> None:
    """Test --out and the generated tree file, which parses back."""

    tree_path = tmp_path / "big.tree"
    report_path = tmp_path / "report.json"
    assert main.main(["--out", str(report_path), "--timestamp", "gen", "--n", "500", "--seed", "3", str(tree_path)]) == 0

    assert capsys.readouterr().out == ""
    assert load_tree(tree_path).size == 500
    document = json.loads(report_path.read_text())
    assert document["command"] == "gen"
    assert "timestamp" in document


def test_main_error_document(tmp_path, capsys) -> None:
    """Test that failures print a structured error, exit with 1 and leave no output files."""

    bad = write(tmp_path / "bad.tree", f"{HEADER}\na b -1\n")
    csv_path = tmp_path / "profile.csv"

    assert main.main(["profile", str(bad), "--csv", str(csv_path)]) == 1
    document = json.loads(capsys.readouterr().out)
    assert document["error"]["type"] == "TreeFileError"
    assert document["error"]["line_number"] == 2
    assert not csv_path.exists()


def test_main_check_bad_mass(two_point_file: Path, tmp_path, capsys) -> None:
    """Test that a null mass ends in the error document and exit status 1."""

    measure = write(tmp_path / "null.json", json.dumps({"a": None}))
    assert main.main(["check", str(two_point_file), str(measure)]) == 1
    document = json.loads(capsys.readouterr().out)
    assert document["command"] == "check"
    assert document["error"]["type"] == "ValueError"


def test_main_usage_error(capsys) -> None:
    """Test that argument errors exit with status 2."""

    with pytest.raises(SystemExit) as error:
        main.main(["diversity"])
    assert error.value.code == 2
