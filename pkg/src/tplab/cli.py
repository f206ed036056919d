"""Command-line entry points: census, verify, classify, atoms, decide.

Exit codes: 0 pass, 1 usage, 2 verification mismatch, 3 resource limit,
4 undecided.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import __version__

EXIT_OK, EXIT_USAGE, EXIT_MISMATCH, EXIT_RESOURCE, EXIT_UNDECIDED = 0, 1, 2, 3, 4
FORMATS = ("table-text", "csv", "structured")
SUITES = ("obstructions", "completions", "tn", "all")
MAX_CENSUS = (4, 5)
EXPECTED_FILE = Path(__file__).with_name("data") / "expected_tables.json"

log = logging.getLogger("tplab")


@dataclass
class RunConfig:
    command: str
    size: tuple[int, int] = (4, 4)
    db_dir: Path | None = None
    output_format: str = "table-text"
    workers: int = 1
    seed: int = 7
    budget: int | None = None
    samples: int = 100
    out: Path | None = None


class UsageError(Exception):
    pass


def parse_size(text: str) -> tuple[int, int]:
    try:
        m, n = (int(t) for t in text.lower().split("x"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"size must look like 4x5, got {text!r}") from exc
    if m < 1 or n < 1:
        raise argparse.ArgumentTypeError("size must be positive")
    return m, n


def _write(cfg: RunConfig, name: str, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    cfg.out.mkdir(parents=True, exist_ok=True)
    with open(cfg.out / name, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    log.info("wrote %s", cfg.out / name)


# ---------------------------------------------------------------------------
# census


def load_expected(path: Path = EXPECTED_FILE) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)["shapes"]


def compare_census(result, expected: dict, counts: dict) -> tuple[list[str], list[str]]:
    """(mismatches, findings) of a census result against an expected snapshot."""
    tables = {"classification": result.classification,
              "classification_reduced": result.classification_reduced,
              "automation": result.automation,
              "automation_reduced": result.automation_reduced}
    bad, findings = [], []
    for key, rows in expected.get("tables", {}).items():
        table = tables[key]
        for label, want in rows.items():
            got = table.rows.get(label)
            if got is None:
                bad.append(f"{key}: row {label!r} missing")
                continue
            prov = want.get("provenance", "")
            if "total" in want and sum(got) != want["total"]:
                bad.append(f"{key}: {label} total {sum(got)} != {want['total']} [{prov}]")
            if "cells" in want and list(got) != want["cells"]:
                msg = f"{key}: {label} cells {list(got)} != {want['cells']} [{prov}]"
                (findings if want.get("cells_advisory") else bad).append(msg)
    for key, want in expected.get("counts", {}).items():
        if key not in counts:
            continue
        if counts[key] != want["value"]:
            bad.append(f"{key}: {counts[key]} != {want['value']} [{want['provenance']}]")
    return bad, findings


def census_counts(result, m: int, n: int) -> dict:
    from .classify import Classifier
    from .census import run_census
    counts = {"remaining": len(result.remaining),
              "remaining_reduced": sum(p.is_reduced() for p in result.remaining),
              "remaining_non_reduced": result.remaining_non_reduced(),
              "survivors": len(result.survivors)}
    if (m, n) == (4, 4):
        counts["survivors_without_db"] = len(run_census(m, n, Classifier(with_db=False)).survivors)
    if (m, n) == (4, 5):
        from .obstructions import load_appendix_b
        ref = {p.canonical().bits for p in load_appendix_b()}
        counts["remaining_equals_appendix_list"] = ref == {p.canonical().bits for p in result.remaining}
    return counts


def cmd_census(cfg: RunConfig) -> int:
    from .census import run_census
    from .classify import Classifier
    m, n = min(cfg.size), max(cfg.size)
    if m < 3 or (m, n) > MAX_CENSUS or not Classifier.in_bounds((m, n)):
        log.error("census supports shapes from 3x3 up to %dx%d and 3x7", *MAX_CENSUS)
        return EXIT_RESOURCE
    if cfg.workers != 1:
        log.info("running sequentially; worker count %d ignored", cfg.workers)
    t0 = time.perf_counter()
    result = run_census(m, n)
    log.info("census %dx%d in %.1f s", m, n, time.perf_counter() - t0)
    tag = f"{m}x{n}"
    if cfg.output_format == "table-text":
        text = "\n".join(t.render_text() for t in result.tables())
        text += f"\nRemaining patterns ({len(result.remaining)}):\n"
        text += "".join(p.render() + "\n" for p in sorted(result.remaining, key=lambda p: p.bits))
        _write(cfg, f"census_{tag}.txt", text)
    elif cfg.output_format == "csv":
        _write(cfg, f"census_{tag}.csv", "".join(t.render_csv() for t in result.tables()))
    else:
        _write(cfg, f"census_{tag}.json", result.to_json())
    expected = load_expected().get(tag)
    if expected is None:
        log.info("no expected table for %s", tag)
        return EXIT_OK
    counts = census_counts(result, m, n)
    bad, findings = compare_census(result, expected, counts)
    for f in findings:
        print(f"FINDING {f}", file=sys.stderr)
    for b in bad:
        print(f"MISMATCH {b}", file=sys.stderr)
    if bad:
        return EXIT_MISMATCH
    unresolved = result.classification.rows.get("Unresolved", [0])
    return EXIT_UNDECIDED if sum(unresolved) and m > 3 else EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _report_code(reports) -> int:
    if any(not r.passed and not r.undecided for r in reports):
        return EXIT_MISMATCH
    if any(r.undecided for r in reports):
        return EXIT_UNDECIDED
    return EXIT_OK


def verify_obstructions(cfg: RunConfig) -> int:
    from .obstructions import CheckResult, helly_bound_ok, load_4x4, verify_witness
    reports = []
    for rec in load_4x4():
        rep = verify_witness(rec, cfg.budget)
        k = len(rec.witness.vars)
        rep.checks.append(CheckResult("helly_bound", helly_bound_ok(rec),
                                      f"{len(rec.system.constraints)} constraints, {k} variables"))
        if k == 4:
            rep.checks.append(CheckResult("four_constraints", len(rec.system.constraints) == 4))
        reports.append(rep)
        print("\n".join(rep.lines()))
    print(f"obstructions: {sum(r.passed for r in reports)}/{len(reports)} records pass")
    return _report_code(reports)


def verify_completions(cfg: RunConfig, erratum: bool = False) -> int:
    from .catalog import complete_and_verify, load_catalog, random_params
    from .classify import default_classifier
    clf = default_classifier()
    rng = random.Random(cfg.seed)
    code = EXIT_OK
    for entry in load_catalog():
        fails, branches = [], {}
        for _ in range(cfg.samples):
            params = random_params(entry, rng)
            for name, taken in entry.branch(params).items():
                branches.setdefault(name, set()).add(taken)
            res = complete_and_verify(entry, params, classify=clf.status, erratum=erratum)
            if not res.ok:
                fails.append(params)
        missing = [k for k, v in branches.items() if v != {True, False}]
        status = "pass" if not fails and not missing else "FAIL"
        extra = f" branches not both taken: {missing}" if missing else ""
        print(f"entry {entry.id}\t{status}\t{cfg.samples - len(fails)}/{cfg.samples} samples{extra}")
        for params in fails[:3]:
            print(f"entry {entry.id}\tfailing parameters " + ", ".join(f"{k}={v}" for k, v in params.items()))
        if status != "pass":
            code = EXIT_MISMATCH
    return code


def verify_tn(cfg: RunConfig) -> int:
    from .tn import (single_entry_pattern, tn_contains_obstruction, tn_single_entry_completable,
                     verify_tn_witnesses, verify_tp_tn_counterexample)
    reports = verify_tn_witnesses() + [verify_tp_tn_counterexample()]
    for r in reports:
        print("\n".join(r.lines()))
    bad = [(m, n, i, j) for m in range(1, 7) for n in range(1, 7)
           for i in range(1, m + 1) for j in range(1, n + 1)
           if tn_single_entry_completable(m, n, i, j) == tn_contains_obstruction(single_entry_pattern(m, n, i, j))]
    print(f"single_entry\t{'pass' if not bad else 'FAIL'}\t{len(bad)} disagreements up to 6x6")
    code = _report_code(reports)
    return EXIT_MISMATCH if bad else code


def cmd_verify(cfg: RunConfig, suite: str, erratum: bool = False) -> int:
    codes = []
    if suite in ("obstructions", "all"):
        codes.append(verify_obstructions(cfg))
    if suite in ("completions", "all"):
        codes.append(verify_completions(cfg, erratum))
    if suite in ("tn", "all"):
        codes.append(verify_tn(cfg))
    if EXIT_MISMATCH in codes:
        return EXIT_MISMATCH
    return EXIT_UNDECIDED if EXIT_UNDECIDED in codes else EXIT_OK


# ---------------------------------------------------------------------------
# classify, atoms, decide


def cmd_classify(cfg: RunConfig, texts: Sequence[str]) -> int:
    from .classify import OutOfBounds, default_classifier
    from .pattern import Pattern, PatternError
    clf = default_classifier()
    code = EXIT_OK
    for text in texts:
        try:
            p = Pattern.parse(text)
        except PatternError as exc:
            log.error("%s", exc)
            return EXIT_USAGE
        try:
            rec = clf.classify(p)
        except OutOfBounds as exc:
            log.error("%s", exc)
            return EXIT_RESOURCE
        print(rec.line() if len(texts) == 1 else rec.dump())
        if str(rec.status) == "Unknown":
            code = EXIT_UNDECIDED
    return code


def _parse_cells(text: str) -> set[tuple[int, int]]:
    """'2,2;1,4' in 1-based coordinates."""
    out = set()
    for part in text.split(";"):
        if part.strip():
            r, c = (int(t) for t in part.split(","))
            out.add((r - 1, c - 1))
    return out


def cmd_atoms(cfg: RunConfig, text: str, cells: str | None) -> int:
    from .atoms import enumerate_u_atoms, one_var_atoms
    from .pattern import Pattern, PatternError
    try:
        p = Pattern.parse(text)
        u = _parse_cells(cells) if cells else set(p.unspecified())
        atoms = enumerate_u_atoms(p, u)
    except (PatternError, ValueError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    signs = {}
    if len(u) == 1:
        signs = {(a.rows, a.cols): a.sign for a in one_var_atoms(p, next(iter(u)))}
    rows = [{"rows": [r + 1 for r in R], "cols": [c + 1 for c in C], "sign": signs.get((R, C))}
            for R, C in atoms]
    if cfg.output_format == "structured":
        print(json.dumps({"pattern": p.render(), "u": sorted([r + 1, c + 1] for r, c in u),
                          "atoms": rows}, indent=1))
        return EXIT_OK
    for a in rows:
        line = f"rows {a['rows']} cols {a['cols']}"
        print(line + (f" {a['sign']}" if a["sign"] else ""))
    return EXIT_OK


def cmd_decide(cfg: RunConfig, system_text: str, weak: bool) -> int:
    from .feasibility import InequalitySystem, Verdict, decide
    try:
        system = InequalitySystem.parse(system_text, strict=False if weak else None)
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    res = decide(system, cfg.budget)
    print(res.status)
    if res.witness:
        print(" ".join(f"{k}={v}" for k, v in res.witness.items()))
    if res.reason:
        print(res.reason)
    return {Verdict.UNKNOWN: EXIT_UNDECIDED}.get(res.status, EXIT_OK)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--db-dir", type=Path, help="obstruction database directory (else $TPLAB_DB_DIR)")
    common.add_argument("--format", dest="output_format", choices=FORMATS, default="table-text")
    common.add_argument("--workers", type=int, default=1, help="accepted for compatibility; runs sequentially")
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--budget", type=int, default=None, help="feasibility case-split limit")
    common.add_argument("--out", type=Path, default=None, help="write report files here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="tplab", description="TP completability census and verification")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("census", parents=[common], help="census tables for one shape")
    p.add_argument("--size", type=parse_size, default=(4, 4))
    p = sub.add_parser("verify", parents=[common], help="verify shipped records")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--erratum", action="store_true", help="use replacement completion formulas")
    p = sub.add_parser("classify", parents=[common], help="classify patterns")
    p.add_argument("patterns", nargs="+")
    p = sub.add_parser("atoms", parents=[common], help="list U-atoms of a pattern")
    p.add_argument("pattern")
    p.add_argument("--u", default=None, help="1-based cells 'r,c;r,c' (default: all unspecified)")
    p = sub.add_parser("decide", parents=[common], help="decide an inequality system")
    p.add_argument("system", help="constraints separated by ';' or newlines, or @file")
    p.add_argument("--weak", action="store_true", help="treat every relation as non-strict")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    if args.db_dir is not None:
        os.environ["TPLAB_DB_DIR"] = str(args.db_dir)
    cfg = RunConfig(args.command, getattr(args, "size", (4, 4)), args.db_dir, args.output_format,
                    args.workers, args.seed, args.budget, getattr(args, "samples", 100), args.out)
    try:
        if args.command == "census":
            return cmd_census(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.suite, args.erratum)
        if args.command == "classify":
            return cmd_classify(cfg, args.patterns)
        if args.command == "atoms":
            return cmd_atoms(cfg, args.pattern, args.u)
        text = args.system
        if text.startswith("@"):
            text = Path(text[1:]).read_text(encoding="utf-8")
        return cmd_decide(cfg, text, args.weak)
    except FileNotFoundError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except MemoryError:
        log.error("out of memory")
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
