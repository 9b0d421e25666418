"""
Tests for the heisqg command line: exit codes, written files, report table.
"""

import sys
from pathlib import Path

import pandas as pd
import pytest
import yaml

# Add src to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / 'heisqg' / 'src'))

from cli.main import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main
from suites import registry
from suites.report import CheckResult, SuiteReport


def _config(tmp_path, doc):
    path = tmp_path / "run.yaml"
    path.write_text(yaml.safe_dump(doc), encoding="utf-8")
    return str(path)


class TestVerify:
    """Test `heisqg verify`."""

    def test_single_suite(self, tmp_path, capsys):
        """--suite groups writes only groups.json and exits 0."""
        out = tmp_path / "reports"
        assert main(["verify", "--suite", "groups", "--out", str(out)]) == EXIT_PASS
        assert sorted(p.name for p in out.iterdir()) == ["groups.json"]
        assert "groups" in capsys.readouterr().out

    def test_repeated_suite_flag(self, tmp_path):
        """--suite is repeatable."""
        out = tmp_path / "reports"
        assert main(["verify", "--suite", "groups", "--suite", "lie", "--out", str(out)]) == EXIT_PASS
        assert sorted(p.name for p in out.iterdir()) == ["groups.json", "lie.json"]

    def test_lambda_zero_quantum_suite(self, tmp_path, capsys):
        """λ = 0 with pentagon selected is a usage error naming the constraint."""
        cfg = _config(tmp_path, {"model": {"lambda": 0.0}})
        assert main(["verify", "--config", cfg, "--suite", "pentagon", "--out", str(tmp_path)]) == EXIT_USAGE
        assert "lambda = 0" in capsys.readouterr().err

    def test_lambda_zero_classical_suites(self, tmp_path):
        """λ = 0 runs the classical suites."""
        cfg = _config(tmp_path, {"model": {"lambda": 0.0}})
        assert main(["verify", "--config", cfg, "--suite", "groups", "--out", str(tmp_path)]) == EXIT_PASS

    def test_failing_check_exits_one(self, tmp_path, capsys, monkeypatch):
        """A failing row gives exit 1 and is listed with its anchor."""
        def failing(cfg, rep):
            rep.add(CheckResult.below("groups.forced", "forced identity", 1.0, 1e-9))
        monkeypatch.setitem(registry.SUITES, "groups", failing)
        assert main(["verify", "--suite", "groups", "--out", str(tmp_path)]) == EXIT_FAIL
        out = capsys.readouterr().out
        assert "groups.forced" in out
        assert "forced identity" in out

    def test_unknown_suite_is_usage_error(self):
        """argparse rejects an unknown suite with exit 2."""
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--suite", "nope"])
        assert exc.value.code == 2

    def test_print_defaults(self, capsys):
        """Prints the shipped YAML."""
        assert main(["verify", "--print-defaults"]) == EXIT_PASS
        doc = yaml.safe_load(capsys.readouterr().out)
        assert doc["model"] == {"n": 1, "lambda": 1.0, "hbar": 1.0}


class TestSweep:
    """Test `heisqg sweep`."""

    def _doc(self):
        return {"sweep": {"mc_samples": 4096}, "grid": {"N": 32}}

    def test_writes_both_tables(self, tmp_path):
        """Two CSV files with four rows each."""
        out = tmp_path / "sweeps"
        main(["sweep", "--config", _config(tmp_path, self._doc()), "--out", str(out)])
        for name in ("hbar_sweep.csv", "lambda_sweep.csv"):
            df = pd.read_csv(out / name)
            assert list(df.columns) == ["parameter", "defect_L1", "defect_L2", "ratio"]
            assert len(df) == 4

    def test_byte_identical(self, tmp_path):
        """Same seed, same bytes."""
        cfg = _config(tmp_path, self._doc())
        main(["sweep", "--config", cfg, "--seed", "3", "--out", str(tmp_path / "a")])
        main(["sweep", "--config", cfg, "--seed", "3", "--out", str(tmp_path / "b")])
        for name in ("hbar_sweep.csv", "lambda_sweep.csv"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_one_point_rejected(self, tmp_path, capsys):
        """A one-point sweep is a usage error."""
        cfg = _config(tmp_path, {"sweep": {"hbar": [1.0]}})
        assert main(["sweep", "--config", cfg, "--out", str(tmp_path)]) == EXIT_USAGE
        assert "at least 3" in capsys.readouterr().err


class TestReport:
    """Test `heisqg report`."""

    def _write(self, out, suite, defect, tol=1e-9):
        rep = SuiteReport(suite, {"n": 1}, [CheckResult.below(f"{suite}.x", f"{suite} identity", defect, tol)])
        rep.write(out)

    def test_empty_directory(self, tmp_path, capsys):
        """No reports: message and exit 1."""
        assert main(["report", str(tmp_path)]) == EXIT_FAIL
        assert "no reports found" in capsys.readouterr().out

    def test_missing_directory(self, tmp_path, capsys):
        """A missing directory is treated like an empty one."""
        assert main(["report", str(tmp_path / "absent")]) == EXIT_FAIL
        assert "no reports found" in capsys.readouterr().out

    def test_all_pass(self, tmp_path, capsys):
        """Every suite appears; exit 0."""
        self._write(tmp_path, "pentagon", 1e-12)
        self._write(tmp_path, "qybe", 2e-12)
        assert main(["report", str(tmp_path)]) == EXIT_PASS
        out = capsys.readouterr().out
        assert "pentagon" in out and "qybe" in out

    def test_failures_first(self, tmp_path, capsys):
        """A failing suite is printed before passing ones."""
        self._write(tmp_path, "antipode", 1e-12)
        self._write(tmp_path, "qybe", 1.0)
        assert main(["report", str(tmp_path)]) == EXIT_FAIL
        out = capsys.readouterr().out
        assert out.index("qybe") < out.index("antipode")

    def test_corrupt_file(self, tmp_path, capsys):
        """A corrupt report is itemized and the exit is nonzero."""
        self._write(tmp_path, "pentagon", 1e-12)
        (tmp_path / "broken.json").write_text("{oops", encoding="utf-8")
        assert main(["report", str(tmp_path)]) == EXIT_FAIL
        assert "broken.json" in capsys.readouterr().out

    def test_golden_match(self, tmp_path, capsys):
        """Identical check rows match the golden directory."""
        run, golden = tmp_path / "run", tmp_path / "golden"
        for d in (run, golden):
            self._write(d, "pentagon", 1e-12)
        assert main(["report", str(run), "--golden", str(golden)]) == EXIT_PASS
        assert "match" in capsys.readouterr().out

    def test_golden_mismatch(self, tmp_path, capsys):
        """A changed defect is reported and fails."""
        run, golden = tmp_path / "run", tmp_path / "golden"
        self._write(run, "pentagon", 1e-12)
        self._write(golden, "pentagon", 2e-12)
        assert main(["report", str(run), "--golden", str(golden)]) == EXIT_FAIL
        assert "pentagon.x" in capsys.readouterr().out

    def test_verify_then_report(self, tmp_path):
        """A real run reads back cleanly."""
        out = tmp_path / "reports"
        assert main(["verify", "--suite", "lie", "--out", str(out)]) == EXIT_PASS
        assert main(["report", str(out)]) == EXIT_PASS
