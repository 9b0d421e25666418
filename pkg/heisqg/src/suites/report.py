"""
Suite Reports - Check rows, per-suite reports and sweep tables

PURPOSE:
    A suite produces one SuiteReport: the parameter set it ran with and a
    list of CheckResults (name, anchor, defect, tolerance, pass flag).
    Reports are written as JSON, one file per suite; sweeps are written
    as CSV through pandas.

    JSON layout:

        {"suite": "pentagon",
         "params": {"n": 1, "lambda": 1.0, "hbar": 1.0,
                    "grid": {"N": 64, "L": 4.0}, "seed": 0},
         "checks": [{"name": ..., "anchor": ..., "defect": ..., "tol": ..., "pass": true}],
         "wall_ms": 812}

ARCHITECTURE ROLE:
    Written by suites/registry.py, read back by `heisqg report`.

DEBUGGING NOTES:
    - Floats are written with json's repr, so identical defects give
      identical bytes. Set report.record_wall_time to false when whole
      files must compare equal.
    - NaN defects always fail and are written as null.
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence, Union

import pandas as pd

from utils.errors import HeisqgError
from utils.numerics import successive_ratios

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ["parameter", "defect_L1", "defect_L2", "ratio"]


@dataclass
class CheckResult:
    """
    One verified identity.

    Attributes:
        name: Dotted check id, e.g. "pentagon.U"
        anchor: The statement being checked, in words and formulas
        defect: Measured discrepancy (or witness size for lower bounds)
        tol: Threshold
        passed: defect < tol, or defect > tol for witnesses
    """
    name: str
    anchor: str
    defect: float
    tol: float
    passed: bool

    @classmethod
    def below(cls, name: str, anchor: str, defect: float, tol: float) -> "CheckResult":
        defect = float(defect)
        return cls(name, anchor, defect, float(tol), bool(math.isfinite(defect) and defect < tol))

    @classmethod
    def above(cls, name: str, anchor: str, defect: float, tol: float) -> "CheckResult":
        """Witness rows: pass when the measured gap exceeds tol."""
        defect = float(defect)
        return cls(name, anchor, defect, float(tol), bool(math.isfinite(defect) and defect > tol))

    @classmethod
    def error(cls, suite: str, exc: Exception) -> "CheckResult":
        return cls(f"{suite}.error", f"{type(exc).__name__}: {exc}", float("nan"), 0.0, False)

    @property
    def severity(self) -> float:
        """defect/tol, used to pick the worst row of a suite."""
        if not math.isfinite(self.defect):
            return math.inf
        return self.defect / self.tol if self.tol > 0 else math.inf

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "defect": self.defect if math.isfinite(self.defect) else None,
            "tol": self.tol,
            "pass": self.passed,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CheckResult":
        defect = doc["defect"]
        return cls(doc["name"], doc["anchor"], float("nan") if defect is None else float(defect),
                   float(doc["tol"]), bool(doc["pass"]))


@dataclass
class SuiteReport:
    suite: str
    params: dict
    checks: List[CheckResult] = field(default_factory=list)
    wall_ms: int = 0

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def worst(self) -> CheckResult:
        """First failing row, else the row closest to its tolerance."""
        if not self.checks:
            return CheckResult(f"{self.suite}.empty", "suite produced no checks", float("nan"), 0.0, False)
        if self.failures:
            return self.failures[0]
        return max(self.checks, key=lambda c: c.severity if c.defect < c.tol else 0.0)

    def add(self, check: CheckResult):
        self.checks.append(check)
        logger.debug("%s: defect=%.3e tol=%.1e %s", check.name, check.defect, check.tol,
                     "pass" if check.passed else "FAIL")

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "checks": [c.to_dict() for c in self.checks],
            "wall_ms": int(self.wall_ms),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def write(self, out_dir: Union[str, Path]) -> Path:
        path = Path(out_dir) / f"{self.suite}.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_json(), encoding="utf-8")
        return path

    @classmethod
    def from_dict(cls, doc: dict) -> "SuiteReport":
        try:
            return cls(doc["suite"], dict(doc["params"]), [CheckResult.from_dict(c) for c in doc["checks"]],
                       int(doc.get("wall_ms", 0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise HeisqgError(f"malformed report: {exc}") from exc

    @classmethod
    def read(cls, path: Union[str, Path]) -> "SuiteReport":
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise HeisqgError(f"{path}: {exc}") from exc
        if not isinstance(doc, dict):
            raise HeisqgError(f"{path}: report must be a JSON object")
        return cls.from_dict(doc)


def run_params(params, grid, seed: int) -> dict:
    """The params block of a report."""
    out = params.to_dict()
    out["grid"] = {"N": int(grid.N), "L": float(grid.L)}
    out["seed"] = int(seed)
    return out


# ═══════════════════════════════════════════════════════════════
# TABLES
# ═══════════════════════════════════════════════════════════════

def sweep_table(parameters: Sequence[float], l1: Sequence[float], l2: Sequence[float]) -> pd.DataFrame:
    """Sweep rows with the successive L¹ ratio (empty for the first row)."""
    ratios = [float("nan")] + successive_ratios(list(l1))
    return pd.DataFrame({"parameter": list(parameters), "defect_L1": list(l1),
                         "defect_L2": list(l2), "ratio": ratios}, columns=SWEEP_COLUMNS)


def write_sweep(df: pd.DataFrame, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    df.to_csv(path, index=False, float_format="%.12e", lineterminator="\n")
    return path


def summary_table(reports: Sequence[SuiteReport]) -> pd.DataFrame:
    """One row per suite: worst check, failures first, then by suite name."""
    rows = []
    for rep in reports:
        w = rep.worst()
        rows.append({
            "suite": rep.suite,
            "worst_defect": w.defect,
            "tol": w.tol,
            "check": w.name,
            "anchor": w.anchor,
            "status": "PASS" if rep.passed else "FAIL",
        })
    df = pd.DataFrame(rows, columns=["suite", "worst_defect", "tol", "check", "anchor", "status"])
    if df.empty:
        return df
    df["_order"] = (df["status"] == "PASS").astype(int)
    return df.sort_values(["_order", "suite"], kind="mergesort").drop(columns="_order").reset_index(drop=True)
