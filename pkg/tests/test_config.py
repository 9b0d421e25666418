"""
Unit tests for config loading, overlay and validation.
"""

import sys
from pathlib import Path

import numpy as np
import pytest
import yaml

# Add src to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / 'heisqg' / 'src'))

from config.loader import (
    SUITE_NAMES,
    default_config,
    defaults_text,
    from_dict,
    load_config,
    merge_overrides,
    validate_sweep,
)
from utils.errors import ConfigurationError


def _write(tmp_path, doc, name="run.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(doc), encoding="utf-8")
    return path


class TestDefaults:
    """Test the shipped defaults."""

    def test_default_values(self):
        """n=1, λ=1, ℏ=1, 64-point grid, every suite selected."""
        cfg = default_config()
        assert (cfg.params.n, cfg.params.lam, cfg.params.hbar) == (1, 1.0, 1.0)
        assert (cfg.grid.N, cfg.grid.L) == (64, 4.0)
        assert cfg.suites == list(SUITE_NAMES)
        assert cfg.hbar_sweep == [1.0, 0.5, 0.25, 0.125]
        assert cfg.lambda_sweep == [0.5, 0.25, 0.125, 0.0625]

    def test_tolerance_lookup(self):
        """Named families resolve; unknown ones raise."""
        cfg = default_config()
        assert cfg.tol("pentagon") == 1e-9
        assert cfg.tol("hbar_ratio") == 0.6
        with pytest.raises(ConfigurationError):
            cfg.tol("no_such_family")

    def test_per_suite_options(self):
        """Per-suite blocks are reachable through option()."""
        cfg = default_config()
        assert cfg.option("pentagon", "trials") == 100
        assert cfg.option("qybe", "vectors") == 20
        assert cfg.option("qybe", "missing", 7) == 7

    def test_defaults_text_is_the_file(self):
        """--print-defaults output parses back to the same config."""
        doc = yaml.safe_load(defaults_text())
        assert from_dict(doc).to_dict() == default_config().to_dict()


class TestUserFile:
    """Test overlaying a user file."""

    def test_partial_override(self, tmp_path):
        """Only listed keys change."""
        path = _write(tmp_path, {"model": {"hbar": 0.5}, "tolerances": {"pentagon": 1e-8}})
        cfg = load_config(path)
        assert cfg.params.hbar == 0.5
        assert cfg.params.lam == 1.0
        assert cfg.tol("pentagon") == 1e-8
        assert cfg.tol("coproduct") == 1e-9

    def test_unknown_key_rejected(self, tmp_path):
        """A typo fails loudly."""
        path = _write(tmp_path, {"model": {"lamda": 0.5}})
        with pytest.raises(ConfigurationError, match="model.lamda"):
            load_config(path)

    def test_section_must_be_mapping(self, tmp_path):
        """A scalar where a section belongs is rejected."""
        path = _write(tmp_path, {"grid": 64})
        with pytest.raises(ConfigurationError):
            load_config(path)

    def test_invalid_yaml(self, tmp_path):
        """Unparseable text raises ConfigurationError."""
        path = tmp_path / "bad.yaml"
        path.write_text("model: [unclosed\n", encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_config(path)

    def test_missing_file(self, tmp_path):
        """A missing file raises ConfigurationError."""
        with pytest.raises(ConfigurationError):
            load_config(tmp_path / "absent.yaml")

    def test_empty_file_is_defaults(self, tmp_path):
        """An empty file changes nothing."""
        path = tmp_path / "empty.yaml"
        path.write_text("", encoding="utf-8")
        assert load_config(path).to_dict() == default_config().to_dict()


class TestValidation:
    """Test RunConfig.validate()."""

    def test_lambda_zero_with_quantum_suites(self, tmp_path):
        """λ = 0 and a quantum suite: the message names the constraint."""
        path = _write(tmp_path, {"model": {"lambda": 0.0}})
        with pytest.raises(ConfigurationError, match="lambda = 0"):
            load_config(path)

    def test_lambda_zero_classical_suites(self, tmp_path):
        """λ = 0 is allowed for lie, groups and limits."""
        path = _write(tmp_path, {"model": {"lambda": 0.0}, "suites": ["lie", "groups", "limits"]})
        assert load_config(path).params.lam == 0.0

    def test_unknown_suite(self):
        """Suite names are checked."""
        with pytest.raises(ConfigurationError, match="unknown suite"):
            merge_overrides(default_config(), suites=["pentagone"])

    def test_nonpositive_tolerance(self, tmp_path):
        """Tolerances must be positive."""
        path = _write(tmp_path, {"tolerances": {"qybe": 0.0}})
        with pytest.raises(ConfigurationError, match="qybe"):
            load_config(path)

    def test_bad_grid(self, tmp_path):
        """N must be a power of two."""
        path = _write(tmp_path, {"grid": {"N": 60}})
        with pytest.raises(ConfigurationError):
            load_config(path)


class TestSweepSpec:
    """Test sweep validation."""

    def test_one_point_rejected(self):
        """Ratios need at least three points."""
        with pytest.raises(ConfigurationError, match="at least 3"):
            validate_sweep("hbar", [1.0])

    def test_not_dyadic_rejected(self):
        """Each point must halve the previous one."""
        with pytest.raises(ConfigurationError, match="dyadic"):
            validate_sweep("lambda", [0.5, 0.3, 0.15])

    def test_nonpositive_rejected(self):
        """Points must be positive."""
        with pytest.raises(ConfigurationError):
            validate_sweep("hbar", [0.0, 0.0, 0.0])

    def test_three_points_accepted(self):
        """1, 1/2, 1/4 is the shortest valid sweep."""
        validate_sweep("hbar", [1.0, 0.5, 0.25])

    def test_one_point_in_file(self, tmp_path):
        """The loader applies the same rule."""
        path = _write(tmp_path, {"sweep": {"hbar": [1.0]}})
        with pytest.raises(ConfigurationError):
            load_config(path)


class TestOverrides:
    """Test command-line overrides."""

    def test_seed_suites_out(self):
        """Overrides replace fields and keep the rest."""
        cfg = merge_overrides(default_config(), seed=7, suites=["pentagon", "qybe", "pentagon"], out_dir="x")
        assert cfg.seed == 7
        assert cfg.suites == ["pentagon", "qybe"]
        assert cfg.out_dir == "x"
        assert cfg.params.lam == 1.0

    def test_none_changes_nothing(self):
        """No overrides gives the same config."""
        base = default_config()
        assert merge_overrides(base).to_dict() == base.to_dict()


class TestSeeding:
    """Test the per-test reset of numpy's global stream."""

    def test_global_stream_starts_at_42(self):
        """The autouse fixture leaves numpy's legacy stream at seed 42."""
        expected = np.random.RandomState(42).random_sample(3)
        assert np.array_equal(np.random.random_sample(3), expected)

    def test_global_stream_starts_at_42_again(self):
        """A second test sees the same draws, so nothing leaks across tests."""
        expected = np.random.RandomState(42).random_sample(3)
        assert np.array_equal(np.random.random_sample(3), expected)
