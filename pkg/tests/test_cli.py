"""Command-line interface: formats, exit codes, determinism."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
MARBLES = str(FIXTURES / "marbles.json")


def run_cli(*args: str) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "microcanon.cli", *args],
        capture_output=True, text=True, timeout=120,
    )


class TestExitCodes:
    def test_success_is_zero(self):
        proc = run_cli("gas", "enumerate", "--n", "3", "--m", "3", "--e", "2")
        assert proc.returncode == 0
        assert proc.stderr == ""

    def test_computation_error_is_one(self):
        proc = run_cli("gas", "enumerate", "--n", "1", "--m", "3", "--e", "5")
        assert proc.returncode == 1
        err = json.loads(proc.stderr)
        assert err["error"] == "InfeasibleEnergy"
        assert "message" in err

    def test_usage_error_is_two(self):
        proc = run_cli("gas", "solve", "--n")
        assert proc.returncode == 2
        proc = run_cli("gas", "solve", "--t", "1")
        assert proc.returncode == 2  # --n missing

    def test_missing_model_file_is_one(self):
        proc = run_cli("ontology", "validate", "/nonexistent/model.json")
        assert proc.returncode == 1


class TestGasCommands:
    def test_enumerate_csv(self):
        proc = run_cli("gas", "enumerate", "--n", "3", "--m", "3", "--e", "2")
        lines = proc.stdout.splitlines()
        assert lines[0] == "binning,omega,entropy,mu"
        assert len(lines) == 3
        assert "[1, 2, 0]" in lines[1]
        assert "[2, 0, 1]" in lines[2]

    def test_argmax_reports_ties(self):
        proc = run_cli("gas", "argmax", "--n", "3", "--m", "3", "--e", "2")
        assert proc.returncode == 0
        assert proc.stdout.count("\n") == 3  # header + two tied maximizers

    def test_solve_value(self):
        proc = run_cli("gas", "solve", "--n", "1000", "--t", "1")
        assert proc.returncode == 0
        lines = proc.stdout.splitlines()
        assert lines[0] == "e1"
        assert float(lines[1]) == pytest.approx(1000.0, rel=1e-9)

    def test_solve_boltzmann_scale(self):
        plain = run_cli("gas", "solve", "--n", "1000", "--t", "2")
        scaled = run_cli("gas", "solve", "--n", "1000", "--t", "1", "--k", "2")
        assert plain.stdout == scaled.stdout

    def test_sample_deterministic(self):
        args = ("gas", "sample", "--n", "3", "--m", "3", "--e", "2",
                "--steps", "20000", "--seed", "42", "--format", "json")
        a, b = run_cli(*args), run_cli(*args)
        assert a.returncode == 0
        assert a.stdout == b.stdout
        counts = json.loads(a.stdout)
        assert set(counts) == {"[1, 2, 0]", "[2, 0, 1]"}
        assert sum(counts.values()) == 20000

    def test_fit_output(self):
        proc = run_cli("gas", "fit", "--n", "60", "--m", "4", "--e", "75",
                       "--format", "json")
        doc = json.loads(proc.stdout)
        pred = doc["predicted"]
        assert sum(pred) == pytest.approx(60.0, rel=1e-10)
        assert "alpha" in doc and "beta" in doc

    def test_measure_distribution(self):
        proc = run_cli("gas", "measure", "--n", "3", "--m", "3", "--e", "2",
                       "--format", "json")
        doc = json.loads(proc.stdout)
        probs = [row["p"] for row in doc]
        assert probs == pytest.approx([0.5, 1 / 3, 1 / 6], abs=1e-12)

    def test_output_file(self, tmp_path):
        out = tmp_path / "states.csv"
        proc = run_cli("gas", "enumerate", "--n", "3", "--m", "3", "--e", "2",
                       "--out", str(out))
        assert proc.returncode == 0
        assert out.read_text().startswith("binning,omega")


class TestOntologyCommands:
    def test_validate_clean_model(self):
        proc = run_cli("ontology", "validate", MARBLES)
        assert proc.returncode == 0
        doc = json.loads(proc.stdout)
        assert doc["valid"] is True
        assert doc["violations"] == []

    def test_overlap_pair(self):
        proc = run_cli("ontology", "overlap", MARBLES, "--pair", "E", "F")
        lines = proc.stdout.splitlines()
        assert lines[0] == "class,omega,common_support"
        cls, omega, common = lines[1].split(",")
        assert cls == "partial"
        assert float(omega) == pytest.approx(0.25)
        assert common == "R"

    def test_check_deviation(self):
        proc = run_cli("ontology", "check", MARBLES, "--format", "json")
        doc = json.loads(proc.stdout)
        assert doc["max_deviation"] == 0.0

    def test_classify(self):
        proc = run_cli("ontology", "classify", MARBLES, "--format", "json")
        doc = json.loads(proc.stdout)
        assert "minimal" in doc["verdict"]

    def test_unknown_preparation_is_error(self):
        proc = run_cli("ontology", "overlap", MARBLES, "--pair", "A", "Z")
        assert proc.returncode == 1


class TestPbrCommands:
    def test_demo_curve(self):
        proc = run_cli("pbr", "demo", "--q-grid", "0,0.5,1.0")
        lines = proc.stdout.splitlines()
        assert lines[0] == "q,min_forbidden_prob"
        rows = [line.split(",") for line in lines[1:]]
        assert [float(r[0]) for r in rows] == [0.0, 0.5, 1.0]
        vals = [float(r[1]) for r in rows]
        assert vals[0] == pytest.approx(0.0, abs=1e-9)
        assert vals[1] == pytest.approx(0.0625, abs=1e-9)
        assert vals[2] == pytest.approx(0.25, abs=1e-9)

    def test_scan_requires_grid(self):
        proc = run_cli("pbr", "scan")
        assert proc.returncode == 2

    def test_scan_curve(self):
        proc = run_cli("pbr", "scan", "--eps-grid", "0,0.0625")
        lines = proc.stdout.splitlines()
        assert lines[0] == "eps,q_max"
        first = lines[1].split(",")
        second = lines[2].split(",")
        assert float(first[1]) == 0.0
        assert float(second[1]) == pytest.approx(0.5, abs=1e-6)

    def test_cat_round_trips_through_validate(self, tmp_path):
        model_path = tmp_path / "cat.json"
        proc = run_cli("pbr", "cat", "--a", "0.6", "--b", "0.8",
                       "--out", str(model_path))
        assert proc.returncode == 0
        check = run_cli("ontology", "validate", str(model_path))
        assert check.returncode == 0
        assert json.loads(check.stdout)["valid"] is True
        dev = run_cli("ontology", "check", str(model_path), "--format", "json")
        assert json.loads(dev.stdout)["max_deviation"] == 0.0

    def test_cat_bad_amplitudes(self):
        proc = run_cli("pbr", "cat", "--a", "1", "--b", "1")
        assert proc.returncode == 1
        assert json.loads(proc.stderr)["error"] == "NormalizationError"
