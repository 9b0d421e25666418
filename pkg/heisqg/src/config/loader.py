"""
Config Loader - RunConfig from YAML

PURPOSE:
    Reads default_params.yaml, overlays a user file and command-line
    overrides, and validates the result into a RunConfig.

ARCHITECTURE ROLE:
    The CLI builds one RunConfig per invocation and hands it to the suite
    registry; nothing else reads YAML.

DEBUGGING NOTES:
    - A typo in a user file fails loudly: every key must already exist in
      the defaults.
    - `heisqg verify --print-defaults` prints the shipped file verbatim.
"""

import copy
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import yaml

from functions.grid import Grid
from groups.params import ModelParams
from utils.errors import ConfigurationError

logger = logging.getLogger(__name__)

DEFAULTS_PATH = Path(__file__).with_name("default_params.yaml")

SUITE_NAMES = ("lie", "groups", "algebra", "pentagon", "comultiplication", "counit",
               "antipode", "haar", "rmatrix", "qybe", "limits")
CLASSICAL_SUITES = ("lie", "groups", "limits")
PER_SUITE_SECTIONS = ("pentagon", "comultiplication", "antipode", "haar", "rmatrix", "qybe", "limits")


@dataclass
class RunConfig:
    """
    One validated run.

    Attributes:
        params: n, λ, ℏ
        grid: Function-algebra lattice
        seed: Master seed; every check derives its own stream
        out_dir: Report directory
        record_wall_time: False writes wall_ms = 0
        suites: Selected suite names, in run order
        tolerances: Check family → threshold
        hbar_sweep, lambda_sweep: Dyadic sweep points
        mc_samples: Monte-Carlo samples per λ-sweep point
        options: Per-suite settings
    """
    params: ModelParams
    grid: Grid
    seed: int = 0
    out_dir: str = "reports"
    record_wall_time: bool = True
    suites: List[str] = field(default_factory=lambda: list(SUITE_NAMES))
    tolerances: Dict[str, float] = field(default_factory=dict)
    hbar_sweep: List[float] = field(default_factory=list)
    lambda_sweep: List[float] = field(default_factory=list)
    mc_samples: int = 1_000_000
    options: Dict[str, dict] = field(default_factory=dict)

    def tol(self, family: str) -> float:
        try:
            return float(self.tolerances[family])
        except KeyError:
            raise ConfigurationError(f"no tolerance for check family {family!r}") from None

    def option(self, suite: str, key: str, default=None):
        return self.options.get(suite, {}).get(key, default)

    # ───────────────────────────────────────────────────────────
    # validation
    # ───────────────────────────────────────────────────────────

    def validate(self) -> "RunConfig":
        """Raises ConfigurationError naming the first violated constraint."""
        unknown = [s for s in self.suites if s not in SUITE_NAMES]
        if unknown:
            raise ConfigurationError(f"unknown suite(s) {unknown}; choose from {list(SUITE_NAMES)}")
        if not self.suites:
            raise ConfigurationError("no suites selected")
        quantum = [s for s in self.suites if s not in CLASSICAL_SUITES]
        if self.params.lam == 0.0 and quantum:
            raise ConfigurationError(f"lambda = 0 is only allowed for suites {list(CLASSICAL_SUITES)}; "
                                     f"quantum suites selected: {quantum}")
        for family, value in self.tolerances.items():
            if not float(value) > 0:
                raise ConfigurationError(f"tolerance {family!r} must be positive, got {value}")
        if self.mc_samples <= 0:
            raise ConfigurationError("sweep.mc_samples must be positive")
        validate_sweep("hbar", self.hbar_sweep)
        validate_sweep("lambda", self.lambda_sweep)
        return self

    def to_dict(self) -> dict:
        return {
            "model": {"n": self.params.n, "lambda": self.params.lam, "hbar": self.params.hbar},
            "grid": self.grid.to_dict(),
            "seed": self.seed,
            "report": {"out_dir": self.out_dir, "record_wall_time": self.record_wall_time},
            "suites": list(self.suites),
            "tolerances": dict(self.tolerances),
            "sweep": {"hbar": list(self.hbar_sweep), "lambda": list(self.lambda_sweep),
                      "mc_samples": self.mc_samples},
            **{k: dict(v) for k, v in self.options.items()},
        }


def validate_sweep(name: str, points: Sequence[float]):
    """At least three positive points, each half of the previous one."""
    if len(points) < 3:
        raise ConfigurationError(f"{name} sweep needs at least 3 points for ratio diagnostics, got {len(points)}")
    if any(float(p) <= 0 for p in points):
        raise ConfigurationError(f"{name} sweep points must be positive")
    for a, b in zip(points[:-1], points[1:]):
        if abs(float(b) / float(a) - 0.5) > 1e-12:
            raise ConfigurationError(f"{name} sweep must be dyadic (halving), got {a} -> {b}")


# ═══════════════════════════════════════════════════════════════
# LOADING
# ═══════════════════════════════════════════════════════════════

def _read_yaml(path: Union[str, Path]) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"{path}: invalid YAML: {exc}") from exc
    if doc is None:
        return {}
    if not isinstance(doc, dict):
        raise ConfigurationError(f"{path}: top level must be a mapping")
    return doc


def _overlay(base: dict, user: dict, where: str = "") -> dict:
    """Recursive merge; keys missing from base are errors, lists replace."""
    out = copy.deepcopy(base)
    for key, value in user.items():
        path = f"{where}.{key}" if where else str(key)
        if key not in base:
            raise ConfigurationError(f"unknown config key {path!r}")
        if isinstance(base[key], dict):
            if not isinstance(value, dict):
                raise ConfigurationError(f"config key {path!r} must be a mapping")
            out[key] = _overlay(base[key], value, path)
        else:
            out[key] = value
    return out


def from_dict(doc: dict) -> RunConfig:
    try:
        model, grid, report, sweep = doc["model"], doc["grid"], doc["report"], doc["sweep"]
        return RunConfig(
            params=ModelParams(n=int(model["n"]), lam=float(model["lambda"]), hbar=float(model["hbar"])),
            grid=Grid(N=int(grid["N"]), L=float(grid["L"]), N_r=int(grid["N_r"]), L_r=float(grid["L_r"])),
            seed=int(doc["seed"]),
            out_dir=str(report["out_dir"]),
            record_wall_time=bool(report["record_wall_time"]),
            suites=[str(s) for s in doc["suites"]],
            tolerances={str(k): float(v) for k, v in doc["tolerances"].items()},
            hbar_sweep=[float(h) for h in sweep["hbar"]],
            lambda_sweep=[float(v) for v in sweep["lambda"]],
            mc_samples=int(sweep["mc_samples"]),
            options={s: dict(doc.get(s) or {}) for s in PER_SUITE_SECTIONS},
        )
    except ConfigurationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"invalid config value: {exc}") from exc


def default_config() -> RunConfig:
    return from_dict(_read_yaml(DEFAULTS_PATH)).validate()


def load_config(path: Optional[Union[str, Path]] = None) -> RunConfig:
    """Defaults overlaid with the file at path (if any), validated."""
    doc = _read_yaml(DEFAULTS_PATH)
    if path is not None:
        doc = _overlay(doc, _read_yaml(path))
        logger.info("loaded config %s", path)
    return from_dict(doc).validate()


def merge_overrides(cfg: RunConfig, seed: Optional[int] = None, suites: Optional[Sequence[str]] = None,
                    out_dir: Optional[str] = None) -> RunConfig:
    """Command-line overrides on top of a loaded config, validated again."""
    updates = {}
    if seed is not None:
        updates["seed"] = int(seed)
    if suites:
        updates["suites"] = list(dict.fromkeys(suites))
    if out_dir is not None:
        updates["out_dir"] = str(out_dir)
    return replace(cfg, **updates).validate()


def defaults_text() -> str:
    return DEFAULTS_PATH.read_text(encoding="utf-8")
