"""
Unit tests for the cross-module suites: comultiplication kernel, antipode
axiom, Haar weight, report records and the suite registry.
"""

import json
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

# Add src to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root / 'heisqg' / 'src'))

from config.loader import SUITE_NAMES, default_config, merge_overrides
from functions.closed_form import zero_at_origin_function
from functions.hopf import haar_witness
from functions.io import load_sampled
from groups.params import ModelParams
from suites import registry
from suites.kernels import (
    antipode_axiom_value,
    check_antipode_axiom,
    check_comultiplication_kernel,
    check_haar_left_invariance,
    check_haar_trace,
    check_kernel_classical_reduction,
    check_kernel_support,
    default_kernel_pair,
    persist_haar_witness,
)
from suites.report import CheckResult, SuiteReport, run_params, summary_table, sweep_table, write_sweep
from utils.errors import HeisqgError


def _cfg(tmp_path, suites, **options):
    cfg = merge_overrides(default_config(), suites=suites, out_dir=str(tmp_path))
    merged = {k: dict(v) for k, v in cfg.options.items()}
    for suite, opts in options.items():
        merged.setdefault(suite, {}).update(opts)
    return replace(cfg, options=merged)


# ═══════════════════════════════════════════════════════════════
# KERNELS
# ═══════════════════════════════════════════════════════════════

class TestComultiplicationKernel:
    """Test the integral kernel F of U(L_φ⊗1)U*(1⊗L_ψ)."""

    def test_matches_operator_chain(self, params):
        """F agrees with the four-operator chain on Gaussian vectors."""
        phi, psi = default_kernel_pair()
        assert check_comultiplication_kernel(phi, psi, params, vectors=2).defect < 1e-6

    def test_matches_operator_chain_small_hbar(self, params):
        """Same at ℏ = 1/4."""
        phi, psi = default_kernel_pair()
        assert check_comultiplication_kernel(phi, psi, params.with_hbar(0.25), vectors=1).defect < 1e-6

    def test_support_in_r_prime(self, params):
        """F vanishes once r' leaves the support of the narrow ψ."""
        phi, _ = default_kernel_pair()
        result = check_kernel_support(phi, params)
        assert result.detail["inside_peak"] > 0
        assert result.defect == 0.0

    def test_classical_reduction(self, params):
        """λ = 0 gives the Heisenberg-group kernel."""
        phi, psi = default_kernel_pair()
        assert check_kernel_classical_reduction(phi, psi, params).defect < 1e-10


class TestAntipodeAxiom:
    """Test m(κ⊗id)Δφ = ε(φ)1."""

    def test_equals_counit(self, params):
        """The reduced integral is φ(0,0,0) at every point."""
        phi, _ = default_kernel_pair()
        result = check_antipode_axiom(phi, params, points=4)
        assert result.defect < 1e-5

    def test_zero_counit(self, params):
        """A function vanishing at the origin gives zero."""
        assert check_antipode_axiom(zero_at_origin_function(), params, points=4).defect < 1e-5

    def test_independent_of_point(self, params):
        """Two distant points give the same value."""
        phi, _ = default_kernel_pair()
        a = antipode_axiom_value(phi, params, (0.0, 0.0, 0.0))
        b = antipode_axiom_value(phi, params, (0.7, -0.4, 0.25))
        assert abs(a - b) / abs(a) < 1e-5


class TestHaarWeight:
    """Test trace property and left invariance."""

    def test_trace(self, grid, params, gaussian_pair):
        """h(φ*×φ) = ‖φ‖² and h(φ×ψ) = h(ψ×φ)."""
        phi, psi = gaussian_pair
        assert check_haar_trace(phi, psi, params, grid).defect < 1e-6

    def test_left_invariance(self, params):
        """Both sides agree at random points."""
        phi, psi = default_kernel_pair()
        assert check_haar_left_invariance(phi, psi, params, points=3).defect < 1e-5

    def test_left_invariance_other_lambda(self):
        """λ = -0.6, ℏ = 0.5."""
        phi, psi = default_kernel_pair()
        p = ModelParams(n=1, lam=-0.6, hbar=0.5)
        assert check_haar_left_invariance(phi, psi, p, points=2, seed=3).defect < 1e-5

    def test_persist_witness(self, tmp_path):
        """Descriptor and samples land next to the reports."""
        w = haar_witness(cross_check=False)
        paths = persist_haar_witness(w, tmp_path)
        doc = json.loads(Path(paths["descriptor"]).read_text(encoding="utf-8"))
        assert doc["ratio"] == pytest.approx(w.ratio)
        assert "samples" not in paths

    def test_persist_witness_samples(self, tmp_path):
        """With the grid cross-check the sampled witness is written too."""
        w = haar_witness()
        paths = persist_haar_witness(w, tmp_path)
        loaded = load_sampled(paths["samples"])
        assert loaded.grid == w.sampled.grid


# ═══════════════════════════════════════════════════════════════
# REPORTS
# ═══════════════════════════════════════════════════════════════

class TestCheckResult:
    """Test check rows."""

    def test_below(self):
        """Strictly below passes."""
        assert CheckResult.below("a.b", "x = y", 1e-10, 1e-9).passed
        assert not CheckResult.below("a.b", "x = y", 1e-9, 1e-9).passed

    def test_above(self):
        """Witness rows pass above tol."""
        assert CheckResult.above("a.w", "x ≠ y", 0.5, 0.1).passed
        assert not CheckResult.above("a.w", "x ≠ y", 0.05, 0.1).passed

    def test_nan_fails(self):
        """NaN never passes and is written as null."""
        row = CheckResult.below("a.b", "x = y", float("nan"), 1.0)
        assert not row.passed
        assert row.to_dict()["defect"] is None

    def test_error_row(self):
        """Exceptions become <suite>.error rows."""
        row = CheckResult.error("haar", ValueError("boom"))
        assert row.name == "haar.error"
        assert "boom" in row.anchor
        assert not row.passed


class TestSuiteReport:
    """Test per-suite reports."""

    def _report(self):
        rep = SuiteReport("pentagon", run_params(ModelParams(), default_config().grid, 0))
        rep.add(CheckResult.below("pentagon.U", "U₁₂U₁₃U₂₃ = U₂₃U₁₂", 3e-12, 1e-9))
        rep.add(CheckResult.below("pentagon.unitarity", "UU* = id", 5e-10, 1e-9))
        return rep

    def test_schema(self):
        """Top-level keys and params block."""
        doc = self._report().to_dict()
        assert set(doc) == {"suite", "params", "checks", "wall_ms"}
        assert doc["params"] == {"n": 1, "lambda": 1.0, "hbar": 1.0, "grid": {"N": 64, "L": 4.0}, "seed": 0}
        assert set(doc["checks"][0]) == {"name", "anchor", "defect", "tol", "pass"}

    def test_worst_is_closest_to_tol(self):
        """With no failures, the row with the largest defect/tol."""
        assert self._report().worst().name == "pentagon.unitarity"

    def test_worst_prefers_failure(self):
        """A failing row wins."""
        rep = self._report()
        rep.add(CheckResult.below("pentagon.U_ext", "Ũ pentagon", 1e-3, 1e-9))
        assert rep.worst().name == "pentagon.U_ext"
        assert not rep.passed

    def test_empty_report_fails(self):
        """No checks is not a pass."""
        rep = SuiteReport("qybe", {})
        assert not rep.passed
        assert rep.worst().name == "qybe.empty"

    def test_write_and_read(self, tmp_path):
        """Written JSON reads back to the same rows."""
        rep = self._report()
        path = rep.write(tmp_path)
        assert path.name == "pentagon.json"
        back = SuiteReport.read(path)
        assert back.to_dict() == rep.to_dict()

    def test_json_is_deterministic(self):
        """Same report, same bytes."""
        assert self._report().to_json() == self._report().to_json()

    def test_corrupt_file(self, tmp_path):
        """Unparseable JSON raises HeisqgError."""
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(HeisqgError):
            SuiteReport.read(path)

    def test_missing_fields(self):
        """A document without checks is malformed."""
        with pytest.raises(HeisqgError):
            SuiteReport.from_dict({"suite": "x", "params": {}})


class TestTables:
    """Test sweep and summary tables."""

    def test_sweep_ratios(self):
        """First ratio is empty, the rest are successive quotients."""
        df = sweep_table([1.0, 0.5, 0.25], [4.0, 2.0, 1.0], [2.0, 1.0, 0.5])
        assert list(df.columns) == ["parameter", "defect_L1", "defect_L2", "ratio"]
        assert math.isnan(df["ratio"][0])
        assert df["ratio"][1:].tolist() == [0.5, 0.5]

    def test_sweep_csv_bytes(self, tmp_path):
        """Writing the same table twice gives identical files."""
        df = sweep_table([1.0, 0.5, 0.25], [4.0, 2.1, 1.0], [2.0, 1.0, 0.5])
        a = write_sweep(df, tmp_path / "a.csv").read_bytes()
        b = write_sweep(df, tmp_path / "b.csv").read_bytes()
        assert a == b
        assert a.splitlines()[0] == b"parameter,defect_L1,defect_L2,ratio"

    def test_summary_failures_first(self):
        """Failing suites are listed before passing ones."""
        ok = SuiteReport("antipode", {}, [CheckResult.below("antipode.x", "a", 1e-12, 1e-9)])
        bad = SuiteReport("qybe", {}, [CheckResult.below("qybe.R", "b", 1.0, 1e-9)])
        ok2 = SuiteReport("counit", {}, [CheckResult.below("counit.x", "c", 1e-12, 1e-9)])
        table = summary_table([ok, bad, ok2])
        assert table["suite"].tolist() == ["qybe", "antipode", "counit"]
        assert table["status"].tolist() == ["FAIL", "PASS", "PASS"]


# ═══════════════════════════════════════════════════════════════
# REGISTRY
# ═══════════════════════════════════════════════════════════════

class TestRegistry:
    """Test suite registration and running."""

    def test_every_suite_registered(self):
        """Registry names match the config's suite list."""
        assert set(registry.SUITES) == set(SUITE_NAMES)

    def test_lie_suite_passes(self, tmp_path):
        """Exact Lie checks all pass with zero nonzero entries."""
        rep = registry.run_suite("lie", _cfg(tmp_path, ["lie"]))
        assert rep.passed, [c.to_dict() for c in rep.failures]
        assert rep.checks[0].defect == 0

    def test_groups_suite_passes(self, tmp_path):
        """Group laws hold to round-off."""
        rep = registry.run_suite("groups", _cfg(tmp_path, ["groups"]))
        assert rep.passed, [c.to_dict() for c in rep.failures]
        assert len(rep.checks) == 9

    def test_qybe_suite_small(self, tmp_path):
        """QYBE at a reduced vector count still meets its tolerance."""
        rep = registry.run_suite("qybe", _cfg(tmp_path, ["qybe"], qybe={"vectors": 2}))
        assert rep.passed

    def test_pentagon_suite_small(self, tmp_path):
        """Pentagon rows at reduced trials."""
        cfg = _cfg(tmp_path, ["pentagon"], pentagon={"trials": 10, "lambdas": 2})
        rep = registry.run_suite("pentagon", cfg)
        assert rep.passed, [c.to_dict() for c in rep.failures]
        assert {c.name for c in rep.checks} >= {"pentagon.U", "pentagon.U_ext"}

    def test_exception_becomes_row(self, tmp_path, monkeypatch):
        """A crashing runner yields a failing <suite>.error row."""
        def broken(cfg, rep):
            raise RuntimeError("kaput")
        monkeypatch.setitem(registry.SUITES, "qybe", broken)
        rep = registry.run_suite("qybe", _cfg(tmp_path, ["qybe"]))
        assert [c.name for c in rep.checks] == ["qybe.error"]
        assert "kaput" in rep.checks[0].anchor

    def test_wall_time_off(self, tmp_path):
        """record_wall_time false writes 0."""
        cfg = replace(_cfg(tmp_path, ["groups"]), record_wall_time=False)
        assert registry.run_suite("groups", cfg).wall_ms == 0

    def test_reports_byte_identical(self, tmp_path):
        """Same seed, same report bytes."""
        cfg = replace(_cfg(tmp_path / "a", ["groups", "lie"]), record_wall_time=False)
        registry.run_suites(cfg)
        registry.run_suites(replace(cfg, out_dir=str(tmp_path / "b")))
        for name in ("groups.json", "lie.json"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_hbar_sweep_table(self, tmp_path):
        """Four rows, ratios within 0.6."""
        df = registry.hbar_sweep_table(_cfg(tmp_path, ["limits"]))
        assert len(df) == 4
        assert np.all(df["ratio"][1:] <= 0.6)
        assert df["defect_L1"].is_monotonic_decreasing


# ═══════════════════════════════════════════════════════════════
# THRESHOLDS
# ═══════════════════════════════════════════════════════════════

CONTRACT_TOLERANCES = {
    "group_law": 1e-12,
    "eta_ulps": 4.0,
    "poisson": 1e-4,
    "associativity": 1e-6,
    "product_oracle": 1e-7,
    "fft_direct": 1e-10,
    "involution": 1e-7,
    "involutive": 1e-10,
    "hbar_zero": 1e-10,
    "pentagon": 1e-9,
    "coproduct": 1e-9,
    "comultiplication_kernel": 1e-6,
    "counit": 1e-6,
    "counit_routes": 1e-8,
    "counit_exact": 1e-12,
    "T_involution": 1e-9,
    "T_dagger": 1e-9,
    "anti_multiplicative": 1e-5,
    "antipode_axiom": 1e-5,
    "antipode_flip": 1e-6,
    "antipode_orders": 1e-6,
    "haar_trace": 1e-6,
    "haar_invariance": 1e-5,
    "haar_witness": 0.1,
    "r_symbolic": 1e-9,
    "r_gaussian": 1e-5,
    "gaussian_engine": 1e-12,
    "fresnel": 1e-10,
    "quasitriangular": 1e-8,
    "qybe": 1e-8,
    "hbar_ratio": 0.6,
    "lambda_ratio": 0.7,
    "commutator_oracle": 1e-3,
}


class TestThresholds:
    """Test that shipped tolerances sit at the documented contract values."""

    @pytest.mark.parametrize("family,expected", sorted(CONTRACT_TOLERANCES.items()))
    def test_family_tolerance(self, family, expected):
        """Each check family ships its contract value."""
        assert default_config().tol(family) == expected

    def test_group_trials(self):
        """Group laws are sampled on at least 1000 triples."""
        assert registry.GROUP_TRIALS >= 1000

    def test_groups_rows_carry_contract(self, tmp_path):
        """Group-law rows report 1e-12, the η row reports 4 ulps."""
        rep = registry.run_suite("groups", _cfg(tmp_path, ["groups"]))
        tols = {c.name: c.tol for c in rep.checks}
        assert tols.pop("groups.eta_identity") == 4.0
        assert set(tols.values()) == {1e-12}
