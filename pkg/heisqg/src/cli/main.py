"""
heisqg Command Line

PURPOSE:
    Three subcommands over one RunConfig:

        verify   run the selected suites, write <suite>.json per suite
        sweep    write hbar_sweep.csv and lambda_sweep.csv
        report   summarize a directory of JSON reports (optionally against
                 a golden directory)

EXIT CODES:
    0  every check passed
    1  a check failed, or a report is missing, corrupt or differs from golden
    2  usage or configuration error

USAGE:
    python heisqg/src/cli/main.py verify --suite pentagon --out reports
    python heisqg/src/cli/main.py verify --print-defaults > my_run.yaml
    python heisqg/src/cli/main.py sweep --config my_run.yaml --out sweeps
    python heisqg/src/cli/main.py report reports --golden golden/

DEBUGGING NOTES:
    - -v turns on per-suite INFO lines; --log-level DEBUG prints every
      check defect as it is recorded.
    - report.record_wall_time: false makes whole report files comparable
      byte for byte; --golden compares the check rows only.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

# Add src to path
sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

import pandas as pd  # noqa: E402

from config.loader import SUITE_NAMES, RunConfig, defaults_text, load_config, merge_overrides  # noqa: E402
from suites.registry import run_suites, sweep_tables  # noqa: E402
from suites.report import SuiteReport, summary_table, write_sweep  # noqa: E402
from utils.errors import ConfigurationError, HeisqgError  # noqa: E402

logger = logging.getLogger("heisqg.cli")

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


# ═══════════════════════════════════════════════════════════════
# ARGUMENTS
# ═══════════════════════════════════════════════════════════════

def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", type=Path, help="YAML file overlaid on the shipped defaults")
    parser.add_argument("--seed", type=int, help="master seed (overrides the config)")
    parser.add_argument("--out", type=Path, help="output directory (overrides report.out_dir)")
    parser.add_argument("--print-defaults", action="store_true", help="print the default config and exit")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heisqg",
        description="Verify the Hopf structure of the quantum Heisenberg-type group numerically.",
    )
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="root log level")
    parser.add_argument("-v", "--verbose", action="store_true", help="shorthand for --log-level INFO")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run verification suites")
    _add_common(verify)
    verify.add_argument("--suite", dest="suites", action="append", choices=SUITE_NAMES,
                        help="run only this suite (repeatable)")

    sweep = sub.add_parser("sweep", help="write the hbar and lambda sweep tables")
    _add_common(sweep)

    report = sub.add_parser("report", help="summarize a directory of JSON reports")
    report.add_argument("report_dir", type=Path)
    report.add_argument("--golden", type=Path, help="directory of reference reports to compare check rows against")
    return parser


def configure_logging(level: str, verbose: bool):
    if verbose and level == "WARNING":
        level = "INFO"
    logging.basicConfig(level=getattr(logging, level),
                        format="%(asctime)s %(levelname)-7s %(name)s: %(message)s")


def _load(args) -> RunConfig:
    cfg = load_config(args.config)
    return merge_overrides(cfg, seed=args.seed, suites=getattr(args, "suites", None),
                           out_dir=str(args.out) if args.out is not None else None)


# ═══════════════════════════════════════════════════════════════
# COMMANDS
# ═══════════════════════════════════════════════════════════════

def cmd_verify(cfg: RunConfig) -> int:
    """Runs cfg.suites, writes one report per suite, prints failing checks."""
    reports = run_suites(cfg)
    failures = [(rep.suite, c) for rep in reports for c in rep.failures]
    for rep in reports:
        print(f"{rep.suite:<18} {'PASS' if rep.passed else 'FAIL'}  ({len(rep.checks)} checks, {rep.wall_ms} ms)")
    if failures:
        print()
        print(f"{len(failures)} failing check(s):")
        for suite, c in failures:
            print(f"  {c.name}: defect={_fmt(c.defect)} tol={c.tol:.1e}  [{c.anchor}]")
        return EXIT_FAIL
    print(f"all {len(reports)} suite(s) passed; reports in {cfg.out_dir}")
    return EXIT_PASS


def cmd_sweep(cfg: RunConfig) -> int:
    """Writes both sweep tables; exits 1 when a successive ratio exceeds its tolerance."""
    hbar_df, lambda_df = sweep_tables(cfg)
    out = Path(cfg.out_dir)
    status = EXIT_PASS
    for name, df, family in (("hbar", hbar_df, "hbar_ratio"), ("lambda", lambda_df, "lambda_ratio")):
        path = write_sweep(df, out / f"{name}_sweep.csv")
        worst = float(df["ratio"].max())
        ok = worst <= cfg.tol(family)
        print(f"{path}: {len(df)} rows, max ratio {worst:.3f} ({'PASS' if ok else 'FAIL'} ≤ {cfg.tol(family)})")
        if not ok:
            status = EXIT_FAIL
    return status


def read_reports(report_dir: Path):
    """(reports, problems): every readable report and one message per bad file."""
    reports, problems = [], []
    for path in sorted(report_dir.glob("*.json")):
        if path.name == "haar_witness.json":
            continue
        try:
            reports.append(SuiteReport.read(path))
        except HeisqgError as exc:
            problems.append(str(exc))
    return reports, problems


def golden_differences(reports: Sequence[SuiteReport], golden_dir: Path) -> List[str]:
    """Suites whose check rows differ from the golden copy."""
    diffs = []
    for rep in reports:
        path = golden_dir / f"{rep.suite}.json"
        if not path.exists():
            diffs.append(f"{rep.suite}: no golden report at {path}")
            continue
        try:
            golden = SuiteReport.read(path)
        except HeisqgError as exc:
            diffs.append(str(exc))
            continue
        mine = [c.to_dict() for c in rep.checks]
        theirs = [c.to_dict() for c in golden.checks]
        if mine != theirs:
            names = {d["name"] for d in mine} ^ {d["name"] for d in theirs}
            changed = [a["name"] for a, b in zip(mine, theirs) if a != b]
            diffs.append(f"{rep.suite}: rows differ ({', '.join(sorted(names) + changed)})")
    return diffs


def cmd_report(report_dir: Path, golden_dir: Optional[Path] = None) -> int:
    if not report_dir.is_dir():
        print(f"no reports found in {report_dir}")
        return EXIT_FAIL
    reports, problems = read_reports(report_dir)
    for msg in problems:
        logger.warning("%s", msg)
        print(f"warning: {msg}")
    if not reports:
        print("no reports found")
        return EXIT_FAIL

    table = summary_table(reports)
    with pd.option_context("display.max_colwidth", 60, "display.width", 200):
        print(table.to_string(index=False, formatters={"worst_defect": _fmt, "tol": "{:.1e}".format}))

    status = EXIT_PASS if all(rep.passed for rep in reports) and not problems else EXIT_FAIL
    if golden_dir is not None:
        diffs = golden_differences(reports, golden_dir)
        for msg in diffs:
            print(f"golden: {msg}")
        if diffs:
            status = EXIT_FAIL
        else:
            print(f"golden: {len(reports)} suite(s) match {golden_dir}")
    return status


def _fmt(x: float) -> str:
    return "nan" if x != x else f"{x:.3e}"


# ═══════════════════════════════════════════════════════════════
# ENTRY POINT
# ═══════════════════════════════════════════════════════════════

def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level, args.verbose)

    if args.command == "report":
        return cmd_report(args.report_dir, args.golden)
    if args.print_defaults:
        sys.stdout.write(defaults_text())
        return EXIT_PASS
    try:
        cfg = _load(args)
    except ConfigurationError as exc:
        print(f"heisqg: configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "verify":
        return cmd_verify(cfg)
    return cmd_sweep(cfg)


if __name__ == "__main__":
    raise SystemExit(main())
