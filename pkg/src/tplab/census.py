"""Census tables over all patterns of a shape up to symmetry.

Two views are produced for each shape, each over all canonical patterns and
over the reduced ones (every line holds at least 2 specified entries):

* the classification table: non-completable patterns split into those that
  contain a smaller obstruction and database obstructions, then completable
  and unresolved patterns;
* the automation table: the screening procedure that leaves patterns for
  hand analysis.  Patterns are settled by obstruction containment, by the
  optimistic 1-variable screening of catalysis.ScreeningEngine, or by the
  single-entry theorem; the rest are reported as remaining.  Screening treats
  any pattern not known to be non-completable as completable, so its
  verdicts are conditional on the remaining patterns.

Variability columns: containment uses the least variability among contained
obstructions, a database obstruction its recorded variability, catalysis
column 1, the fully specified pattern column 0.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .catalysis import ScreeningEngine
from .classify import (COMPLETABLE, UNKNOWN, Classifier, Method, default_classifier,
                       single_entry_completable)
from .closure import KEY
from .pattern import Pattern

COLUMNS = (0, 1, 2, 3, 4)

CONTAINS = "Contains smaller obstruction"
NC_SUBTOTAL = "Noncompletable subtotal"
COMPLETABLE_ROW = "Completable"
UNRESOLVED_ROW = "Unresolved"
TOTAL = "Total"
AUTO = "Completable automatically"
AUTOMATED = "Automated total"


def obstruction_row(m: int, n: int) -> str:
    return f"{m}-by-{n} obstruction"


@dataclass
class CensusTable:
    title: str
    rows: dict[str, list[int]]
    notes: dict[str, int] = field(default_factory=dict)

    def total(self, label: str) -> int:
        return sum(self.rows[label])

    def cell(self, label: str, var: int) -> int:
        return self.rows[label][var]

    def render_text(self) -> str:
        width = max(len(k) for k in self.rows) + 2
        head = "Variability".ljust(width) + "".join(f"{c:>9}" for c in COLUMNS) + f"{'Total':>10}"
        lines = [self.title, head, "-" * len(head)]
        for label, cells in self.rows.items():
            lines.append(label.ljust(width) + "".join(f"{v:>9}" for v in cells) + f"{sum(cells):>10}")
        for k, v in self.notes.items():
            lines.append(f"{k}: {v}")
        return "\n".join(lines) + "\n"

    def render_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["table", "row"] + [str(c) for c in COLUMNS] + ["Total"])
        for label, cells in self.rows.items():
            w.writerow([self.title, label] + cells + [sum(cells)])
        for k, v in self.notes.items():
            w.writerow([self.title, k] + [""] * len(COLUMNS) + [v])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"title": self.title,
                "rows": {k: {"cells": v, "total": sum(v)} for k, v in self.rows.items()},
                "notes": dict(self.notes)}


@dataclass
class CensusResult:
    shape: tuple[int, int]
    classification: CensusTable
    classification_reduced: CensusTable
    automation: CensusTable
    automation_reduced: CensusTable
    remaining: list[Pattern]
    unresolved: list[Pattern]
    survivors: list[Pattern]

    def remaining_non_reduced(self) -> int:
        return sum(not p.is_reduced() for p in self.remaining)

    def tables(self) -> list[CensusTable]:
        return [self.classification, self.classification_reduced, self.automation, self.automation_reduced]

    def to_dict(self) -> dict:
        return {"shape": list(self.shape),
                "tables": [t.to_dict() for t in self.tables()],
                "remaining": [p.render() for p in self.remaining],
                "survivors": [p.render() for p in self.survivors],
                "unresolved": [p.render() for p in self.unresolved]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1) + "\n"


def reduced_mask(bits: np.ndarray, rows: int, cols: int) -> np.ndarray:
    """Whether each grid has at least 2 specified entries in every line."""
    ok = np.ones(bits.shape, dtype=bool)
    for r in range(rows):
        cnt = np.zeros(bits.shape, dtype=np.int64)
        for c in range(cols):
            cnt += (bits >> np.int64(rows * cols - 1 - (r * cols + c))) & 1
        ok &= cnt >= 2
    for c in range(cols):
        cnt = np.zeros(bits.shape, dtype=np.int64)
        for r in range(rows):
            cnt += (bits >> np.int64(rows * cols - 1 - (r * cols + c))) & 1
        ok &= cnt >= 2
    return ok


def _bucket(var: np.ndarray) -> list[int]:
    out = [0] * len(COLUMNS)
    for v, k in zip(*np.unique(var, return_counts=True)):
        out[min(max(int(v), 0), COLUMNS[-1])] += int(k)
    return out


def screen(clf: Classifier, R: int, C: int) -> np.ndarray:
    """Screening verdict (True = settled as completable) per canonical pattern of the shape."""
    t = clf.table((R, C))
    key, canon = t.closure_key, t.canon

    def is_open(b: int) -> bool:
        return key[canon[b]] == 0

    eng = ScreeningEngine(R, C, clf.subpattern_oracle(R, C), is_open)
    full = (1 << (R * C)) - 1
    out = np.zeros(t.canonical.shape, dtype=bool)
    for i, b in enumerate(t.canonical.tolist()):
        if b == full:
            out[i] = True
        elif key[b] == 0:
            out[i] = eng.catalyst(b, is_open) is not None
    return out


def _single_entry_mask(cb: np.ndarray, R: int, C: int) -> np.ndarray:
    n = R * C
    out = np.zeros(cb.shape, dtype=bool)
    for k in range(n):
        r, c = divmod(n - 1 - k, C)
        if single_entry_completable(R, C, r + 1, c + 1):
            out |= cb == ((1 << n) - 1) ^ (1 << k)
    return out


def run_census(m: int, n: int, classifier: Classifier | None = None) -> CensusResult:
    clf = classifier or default_classifier()
    R, C = min(m, n), max(m, n)
    t = clf.table((R, C))
    cb = t.canonical
    full = (1 << (R * C)) - 1
    key = t.closure_key[cb].astype(np.int64)
    seeded = t.seeded[cb] > 0
    nc = key > 0
    trivial = cb == full
    cat = (t.catalyst[cb] >= 0) & ~nc & ~trivial
    status = t.status[cb]
    var = t.variability[cb].astype(np.int64)
    red = reduced_mask(cb, R, C)
    unresolved = status == UNKNOWN
    screened = screen(clf, R, C) & ~nc & ~trivial
    auto = screened | (_single_entry_mask(cb, R, C) & ~nc)
    remaining = ~nc & ~auto & ~trivial

    def classification(mask: np.ndarray, title: str) -> CensusTable:
        smaller = nc & ~seeded & mask
        db = nc & seeded & mask
        comp = ~nc & (status == COMPLETABLE) & mask
        comp_var = np.where(trivial, 0, np.where(cat | (var < 0), 1, var))
        rows = {
            CONTAINS: _bucket(key[smaller] // KEY),
            obstruction_row(R, C): _bucket(key[db] // KEY),
        }
        rows[NC_SUBTOTAL] = [a + b for a, b in zip(rows[CONTAINS], rows[obstruction_row(R, C)])]
        rows[COMPLETABLE_ROW] = _bucket(comp_var[comp])
        rows[UNRESOLVED_ROW] = [0, int((~nc & unresolved & mask).sum()), 0, 0, 0]
        rows[TOTAL] = [a + b + c for a, b, c in zip(rows[NC_SUBTOTAL], rows[COMPLETABLE_ROW],
                                                    rows[UNRESOLVED_ROW])]
        return CensusTable(title, rows)

    def automation(mask: np.ndarray, title: str) -> CensusTable:
        rows = {CONTAINS: _bucket(key[nc & mask] // KEY),
                AUTO: [int((trivial & mask).sum()), int((auto & mask).sum()), 0, 0, 0]}
        rows[AUTOMATED] = [a + b for a, b in zip(rows[CONTAINS], rows[AUTO])]
        return CensusTable(title, rows, {"Remaining patterns": int((remaining & mask).sum())})

    everything = np.ones(cb.shape, dtype=bool)
    label = f"{R}-by-{C}"
    pats = lambda mask: [Pattern(R, C, int(b)) for b in cb[mask]]  # noqa: E731
    return CensusResult(
        (R, C),
        classification(everything, f"Summary of all {label} patterns"),
        classification(red, f"Summary of reduced {label} patterns"),
        automation(everything, f"Automated screening of all {label} patterns"),
        automation(red, f"Automated screening of reduced {label} patterns"),
        pats(remaining),
        pats(unresolved),
        pats(~nc & ~cat),
    )


def method_counts(m: int, n: int, classifier: Classifier | None = None) -> dict[str, int]:
    clf = classifier or default_classifier()
    t = clf.table((min(m, n), max(m, n)))
    vals, counts = np.unique(t.method[t.canonical], return_counts=True)
    methods = list(Method)
    return {str(methods[int(v)]): int(k) for v, k in zip(vals, counts)}
