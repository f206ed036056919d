"""One test per acceptance criterion; each records a PASS/FAIL line for the terminal summary."""

import random
import time

from conftest import ACCEPTANCE
from tplab.atoms import Status
from tplab.catalog import complete_and_verify, load_catalog, random_params
from tplab.census import AUTOMATED, COMPLETABLE_ROW, CONTAINS, NC_SUBTOTAL, TOTAL
from tplab.classify import COMPLETABLE, UNKNOWN
from tplab.obstructions import helly_bound_ok, load_4x4, load_appendix_b, verify_witness
from tplab.pattern import Pattern, count_up_to_symmetry
from tplab.threerow import classify_3byn_by_reductions
from tplab.tn import (single_entry_pattern, tn_complete_case3, tn_contains_obstruction,
                      tn_single_entry_completable, verify_tn_witnesses, verify_tp_tn_counterexample)

from test_tn import _case3_sample, _filled, _is_tn_oracle

SAMPLES = 100


def _record(k: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[k] = (ok, detail)
    assert ok, detail


def _cmp(got: dict, want: dict) -> tuple[bool, str]:
    bad = [f"{k} {got[k]}!={v}" for k, v in want.items() if got[k] != v]
    return not bad, "; ".join(bad) if bad else ", ".join(f"{k} {v}" for k, v in want.items())


def test_criterion_1_orbit_counts():
    t0 = time.perf_counter()
    got = {"4x4": count_up_to_symmetry(4, 4), "4x5": count_up_to_symmetry(4, 5)}
    dt = time.perf_counter() - t0
    ok, detail = _cmp(got, {"4x4": 16960, "4x5": 524800})
    _record(1, ok and dt < 60, f"{detail} in {dt:.1f} s")


def test_criterion_2_full_4x4_census(census44):
    t = census44.classification
    got = {"contains-smaller": t.total(CONTAINS), "db": t.total("4-by-4 obstruction"),
           "nc": t.total(NC_SUBTOTAL), "completable": t.total(COMPLETABLE_ROW),
           "completable var1": t.cell(COMPLETABLE_ROW, 1), "total": t.total(TOTAL)}
    want = {"contains-smaller": 2518, "db": 78, "nc": 2596, "completable": 14364,
            "completable var1": 14355, "total": 16960}
    _record(2, *_cmp(got, want))


def test_criterion_3_reduced_4x4_census(census44):
    t = census44.classification_reduced
    got = {"contains-smaller": t.total(CONTAINS), "nc": t.total(NC_SUBTOTAL),
           "completable": t.total(COMPLETABLE_ROW), "total": t.total(TOTAL)}
    want = {"contains-smaller": 1102, "nc": 1180, "completable": 837, "total": 2017}
    _record(3, *_cmp(got, want))


def test_criterion_4_survivors(census44, census44_nodb):
    got = {"survivors": len(census44.survivors), "without db": len(census44_nodb.survivors),
           "full pattern included": Pattern.full(4, 4) in census44.survivors}
    _record(4, *_cmp(got, {"survivors": 12, "without db": 90, "full pattern included": True}))


def test_criterion_5_4x5_screening(census45):
    ref = {p.canonical().bits for p in load_appendix_b()}
    got = {"automated": census45.automation.total(AUTOMATED),
           "automated reduced": census45.automation_reduced.total(AUTOMATED),
           "remaining": len(census45.remaining),
           "remaining reduced": census45.automation_reduced.notes["Remaining patterns"],
           "non-reduced": census45.remaining_non_reduced(),
           "same set as reference list": {p.canonical().bits for p in census45.remaining} == ref}
    want = {"automated": 524512, "automated reduced": 61158, "remaining": 288, "remaining reduced": 259,
            "non-reduced": 29, "same set as reference list": True}
    _record(5, *_cmp(got, want))


def test_criterion_6_obstruction_records():
    recs = load_4x4()
    failed = []
    for r in recs:
        rep = verify_witness(r)
        failed += [f"{r.id}:{c.name}" for c in rep.checks if c.passed is not True]
    four = [r for r in recs if len(r.witness.vars) == 4]
    helly = all(helly_bound_ok(r) for r in recs)
    ok = len(recs) == 41 and not failed and len(four) == 1 and len(four[0].system.constraints) == 4 and helly
    detail = (f"{len(recs)} records, failing checks: {', '.join(failed) or 'none'}; "
              f"4-variable record constraints {[len(r.system.constraints) for r in four]}; "
              f"constraint bound {'holds' if helly else 'violated'}")
    _record(6, ok, detail)


def test_criterion_7_catalog_completions(clf):
    entries = load_catalog()
    passed, branches, errata = {}, set(), {}
    for e in entries:
        rng = random.Random(1000 + e.id)
        params = [random_params(e, rng) for _ in range(SAMPLES)]
        if e.id == 1:
            branches = {e.branch(p)["y"] for p in params}
        passed[e.id] = sum(complete_and_verify(e, p, classify=clf.status).ok for p in params)
        if e.erratum:
            errata[e.id] = sum(complete_and_verify(e, p, erratum=True).ok for p in params)
    ok = all(v == SAMPLES for v in passed.values()) and branches == {True, False}
    detail = ("published formulas " + " ".join(f"#{k}:{v}/{SAMPLES}" for k, v in passed.items())
              + f"; entry 1 branches hit {sorted(branches)}"
              + "; replacement formulas " + " ".join(f"#{k}:{v}/{SAMPLES}" for k, v in errata.items()))
    _record(7, ok, detail)


def test_criterion_8_three_row_agreement(clf):
    t0 = time.perf_counter()
    total = disagree = unknown = 0
    for n in range(1, 8):
        if n < 3:
            pats = [Pattern(3, n, b) for b in range(1 << (3 * n))]
            mine = [clf.status(p) for p in pats]
        else:
            tab = clf.table((3, n))
            pats = [Pattern(3, n, b) for b in tab.canonical.tolist()]
            code = {UNKNOWN: Status.UNKNOWN, COMPLETABLE: Status.COMPLETABLE}
            mine = [code.get(int(tab.status[p.bits]), Status.NONCOMPLETABLE) for p in pats]
        for p, s in zip(pats, mine):
            v = classify_3byn_by_reductions(p).status
            total += 1
            unknown += s == Status.UNKNOWN or v == Status.UNKNOWN
            disagree += s != v
    dt = time.perf_counter() - t0
    _record(8, disagree == 0 and unknown == 0 and dt < 300,
            f"{total} patterns, {disagree} disagreements, {unknown} Unknown, {dt:.0f} s")


def test_criterion_9_tn_suite():
    wit = all(r.passed for r in verify_tn_witnesses())
    rule = all(tn_single_entry_completable(m, n, i, j) != tn_contains_obstruction(single_entry_pattern(m, n, i, j))
               for m in range(1, 7) for n in range(1, 7) for i in range(1, m + 1) for j in range(1, n + 1))
    rng = random.Random(9)
    case3 = 0
    for _ in range(SAMPLES):
        m = _case3_sample(rng)
        case3 += _is_tn_oracle(_filled(m, tn_complete_case3(m)))
    ce = {c.name: c.passed for c in verify_tp_tn_counterexample().checks}
    ok = wit and rule and case3 == SAMPLES and all(ce.values())
    _record(9, ok, f"witnesses {'ok' if wit else 'fail'}, single-entry rule {'ok' if rule else 'fail'}, "
                   f"case 3 {case3}/{SAMPLES}, counterexample {ce}")
