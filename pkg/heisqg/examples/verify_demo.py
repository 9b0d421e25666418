"""
Walkthrough: from the Lie bialgebra to the R-matrix

Runs a cut-down version of every verification layer at desk scale and
prints what each one measured:

    classical r-matrix → group laws → deformed product → pentagon
    → comultiplication kernel → antipode → Haar weight → R-matrix → limits

The full runs (all trials, all suites, JSON reports) go through the
command line instead:

    python heisqg/src/cli/main.py verify --out reports
"""

import os
import sys
from dataclasses import replace

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from config.loader import default_config, merge_overrides
from suites.registry import run_suite


DEMO_OPTIONS = {
    "pentagon": {"trials": 20, "lambdas": 3},
    "comultiplication": {"trials": 20, "vectors": 1},
    "antipode": {"points": 4, "vectors": 8},
    "haar": {"points": 4, "persist_witness": False, "cross_check": False},
    "rmatrix": {"trials": 20, "vectors": 1},
    "qybe": {"vectors": 3},
}


def run_demo(out_dir: str = "demo_reports", with_limits: bool = False):
    """
    Run each suite once and print its rows.

    Args:
        out_dir: Where the limits suite writes its CSV tables
        with_limits: Include the ℏ and λ sweeps (a few minutes)
    """
    print("=" * 70)
    print("HEISQG VERIFICATION WALKTHROUGH")
    print("=" * 70)
    print()

    cfg = merge_overrides(default_config(), out_dir=out_dir)
    options = {k: dict(v) for k, v in cfg.options.items()}
    for suite, opts in DEMO_OPTIONS.items():
        options.setdefault(suite, {}).update(opts)
    cfg = replace(cfg, options=options, mc_samples=1 << 16)

    p = cfg.params
    print(f"Parameters: n={p.n}  λ={p.lam}  ℏ={p.hbar}  grid N={cfg.grid.N} L={cfg.grid.L}  seed={cfg.seed}")
    print()

    suites = [s for s in cfg.suites if with_limits or s != "limits"]
    failed = 0
    for name in suites:
        rep = run_suite(name, cfg)
        print(f"┌─ {name}  ({'PASS' if rep.passed else 'FAIL'}, {rep.wall_ms} ms)")
        for c in rep.checks:
            mark = "✓" if c.passed else "✗"
            print(f"│  {mark} {c.name:<40} {c.defect:10.3e}  tol {c.tol:.0e}")
        print()
        failed += len(rep.failures)

    print("=" * 70)
    print("ALL CHECKS PASSED" if not failed else f"{failed} CHECK(S) FAILED")
    print("=" * 70)
    return failed


if __name__ == "__main__":
    sys.exit(1 if run_demo(with_limits="--limits" in sys.argv) else 0)
