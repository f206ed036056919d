"""Obstruction databases, witness verification and insertion-closure containment.

Three shipped databases live in ``tplab/data`` (overridable with the
``TPLAB_DB_DIR`` environment variable):

* ``obstructions_3xn.json``: the 13 three-row obstruction patterns with their
  variability.
* ``obstructions_4x4.json``: the 41 four-by-four inhibitor records.  Each
  record carries witness data (``$name`` marks an inhibitor variable), the
  cells whose values are parenthesised extensions, the blank cells, the stated
  inequality system and the generated obstruction patterns.
* ``obstructions_tn_1var.json``: the two 1-variable TN obstructions.

Witness semantics.  A cell listed in ``blank`` is neither specified nor
unspecified in the inhibitor; when it also carries a value (an ``extension``)
that value is used by the data check so every generated obstruction inherits
partial TP data.  Variables are entries of a TP matrix, so positivity of each
variable is a standing background assumption (its 1x1 atom); when a record
states that positivity itself it is an ordinary member of the system.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .atoms import Status, is_u_atom
from .closure import ClosureTable
from .feasibility import (Constraint, InequalitySystem, Verdict, decide,
                          is_minimal_inhibiting, parse_constraint)
from .matrix import PartialMatrix, is_partial_tp, minor, square_index_sets
from .pattern import Pattern
from .poly import Poly

DATA_DIR = Path(__file__).with_name("data")
DB_FILES = {
    "3xn": "obstructions_3xn.json",
    "4x4": "obstructions_4x4.json",
    "tn": "obstructions_tn_1var.json",
    "appendix_b": "appendix_b_4x5_remaining.txt",
}


def db_dir() -> Path:
    env = os.environ.get("TPLAB_DB_DIR")
    return Path(env) if env else DATA_DIR


def db_path(name: str) -> Path:
    return db_dir() / DB_FILES[name]


def _records(path: Path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    return data["records"] if isinstance(data, dict) else data


# ---------------------------------------------------------------------------
# record types

BLANK = "blank"


@dataclass(frozen=True)
class ThreeRowObstruction:
    id: str
    pattern: Pattern
    variability: int


@dataclass
class InhibitorRecord:
    """An inhibitor: grid of specified / unspecified / blank cells."""
    rows: int
    cols: int
    specified: frozenset
    unspecified: frozenset
    blank: frozenset
    generated: list[Pattern]

    def cell(self, r: int, c: int) -> str:
        if (r, c) in self.blank:
            return BLANK
        return "specified" if (r, c) in self.specified else "unspecified"

    def render(self) -> str:
        sym = {"specified": "*", "unspecified": "?", BLANK: "."}
        return "/".join("".join(sym[self.cell(r, c)] for c in range(self.cols))
                        for r in range(self.rows))

    def admits(self, p: Pattern) -> bool:
        """True when p agrees with the inhibitor on every non-blank cell."""
        if p.shape != (self.rows, self.cols):
            return False
        return all(p.is_specified(r, c) == ((r, c) in self.specified)
                   for r in range(self.rows) for c in range(self.cols)
                   if (r, c) not in self.blank)


@dataclass
class ObstructionRecord:
    id: str
    witness: PartialMatrix
    system: InequalitySystem
    variability: int
    generated: list[Pattern]
    extension: frozenset = frozenset()
    blank: frozenset = frozenset()
    inhibiting_set: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)

    @property
    def var_cells(self) -> dict:
        return dict(self.witness.vars)

    @property
    def pattern(self) -> Pattern:
        """Witness pattern: values specified, variables and '?' unspecified."""
        return self.witness.pattern

    def inhibitor(self) -> InhibitorRecord:
        w = self.witness
        cells = {(r, c) for r in range(w.rows) for c in range(w.cols)}
        spec = frozenset(c for c in w.values if c not in self.blank)
        blank = frozenset(self.blank)
        return InhibitorRecord(w.rows, w.cols, spec, frozenset(cells - spec - blank), blank,
                               list(self.generated))


def load_three_row(path: Path | None = None) -> list[ThreeRowObstruction]:
    path = path or db_path("3xn")
    return [ThreeRowObstruction(r["id"], Pattern.parse(r["pattern"]), int(r["variability"]))
            for r in _records(path)]


def record_from_dict(r: dict) -> ObstructionRecord:
    w = PartialMatrix.parse(r["witness"])
    ext = frozenset(tuple(x) for x in r.get("extension", []))
    w.extension = set(ext)
    return ObstructionRecord(
        id=r["id"],
        witness=w,
        system=InequalitySystem.parse(r["system"]),
        variability=int(r["variability"]),
        generated=[Pattern.parse(g) for g in r.get("generated", [])],
        extension=ext,
        blank=frozenset(tuple(x) for x in r.get("blank", [])),
    )


def load_4x4(path: Path | None = None) -> list[ObstructionRecord]:
    return [record_from_dict(r) for r in _records(path or db_path("4x4"))]


def load_appendix_b(path: Path | None = None) -> list[Pattern]:
    path = path or db_path("appendix_b")
    with open(path, encoding="utf-8") as fh:
        return [Pattern.parse(ln) for ln in fh if ln.strip()]


def db_seeds(three_row: Iterable[ThreeRowObstruction] | None = None,
             four: Iterable[ObstructionRecord] | None = None) -> list[tuple[Pattern, int]]:
    """(pattern, variability) pairs for every obstruction pattern."""
    seeds = [(o.pattern, o.variability) for o in (load_three_row() if three_row is None else three_row)]
    for rec in (load_4x4() if four is None else four):
        seeds.extend((g, rec.variability) for g in rec.generated)
    return seeds


# ---------------------------------------------------------------------------
# witness verification


@dataclass
class CheckResult:
    name: str
    passed: bool | None          # None: undecided
    detail: str = ""

    def label(self) -> str:
        return {True: "pass", False: "FAIL", None: "UNKNOWN"}[self.passed]


@dataclass
class VerificationReport:
    id: str
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed is True for c in self.checks)

    @property
    def undecided(self) -> bool:
        return any(c.passed is None for c in self.checks)

    def lines(self) -> list[str]:
        return [f"{self.id}\t{c.name}\t{c.label()}\t{c.detail}" for c in self.checks]


def _normalised(p: Poly) -> Poly:
    return p.primitive() if not p.is_zero() else p


def _same_up_to_positive_scale(p: Poly, q: Poly) -> bool:
    if p.is_zero() or q.is_zero():
        return p.is_zero() and q.is_zero()
    pp, qq = _normalised(p), _normalised(q)
    return pp == qq


def _is_positivity(c: Constraint, name: str) -> bool:
    return _same_up_to_positive_scale(c.poly, Poly.var(name))


def background_positivity(rec: ObstructionRecord) -> list[Constraint]:
    """Positivity of each variable not already stated in the system."""
    out = []
    for name in rec.witness.vars.values():
        if not any(_is_positivity(c, name) for c in rec.system.constraints):
            out.append(Constraint(Poly.var(name), True))
    return out


def atom_determinants(m: PartialMatrix) -> list[tuple[tuple, tuple, Poly]]:
    """U-atoms of the witness for U = its variable cells, with determinants."""
    pat = m.pattern
    u = set(m.vars)
    out = []
    for R, C in square_index_sets(m.rows, m.cols):
        cells = [(r, c) for r in R for c in C]
        if not any(x in u for x in cells):
            continue
        if any(x not in m.values and x not in u for x in cells):
            continue
        if is_u_atom(pat, u, R, C):
            out.append((R, C, minor(m, R, C)))
    return out


def match_inhibiting_set(rec: ObstructionRecord) -> list[tuple | None]:
    """For each stated constraint, an atom whose determinant equals it up to positive scale."""
    atoms = atom_determinants(rec.witness)
    out = []
    for c in rec.system.constraints:
        hit = next(((R, C) for R, C, d in atoms if _same_up_to_positive_scale(c.poly, d)), None)
        out.append(hit)
    return out


def verify_witness(rec: ObstructionRecord, budget: int | None = None) -> VerificationReport:
    checks = []
    # (1) data partial TP, extensions included
    bad = None
    from .matrix import specified_minors
    for R, C, d in specified_minors(rec.witness):
        if d <= 0:
            bad = (R, C, d)
            break
    checks.append(CheckResult("partial_tp", bad is None,
                              "" if bad is None else f"minor rows{bad[0]} cols{bad[1]} = {bad[2]}"))
    # (2) stated inequalities are atom determinants
    matches = match_inhibiting_set(rec)
    rec.inhibiting_set = [m for m in matches if m is not None]
    missing = [str(c) for c, m in zip(rec.system.constraints, matches) if m is None]
    checks.append(CheckResult("atom_match", not missing,
                              "" if not missing else "unmatched: " + "; ".join(missing)))
    # (3) infeasible together with background positivity
    bg = background_positivity(rec)
    whole = InequalitySystem(list(rec.system.constraints) + bg, list(rec.system.vars))
    res = decide(whole, budget)
    ok = {Verdict.INFEASIBLE: True, Verdict.FEASIBLE: False}.get(res.status)
    detail = res.reason if res.status == Verdict.UNKNOWN else (
        f"witness {res.witness}" if res.status == Verdict.FEASIBLE else "")
    checks.append(CheckResult("infeasible", ok, detail))
    # (4) minimality
    mini = is_minimal_inhibiting(rec.system, budget, bg)
    checks.append(CheckResult("minimal", None if mini == Verdict.UNKNOWN else bool(mini)))
    return VerificationReport(rec.id, checks)


def helly_bound_ok(rec: ObstructionRecord) -> bool:
    """Inhibiting set size is at most |U| + 1."""
    return len(rec.system.constraints) <= len(rec.witness.vars) + 1


def blank_consistent(rec: ObstructionRecord) -> list[Pattern]:
    """Generated patterns that do not extend the inhibitor consistently."""
    inh = rec.inhibitor()
    return [g for g in rec.generated if not inh.admits(g)]


def corrupt(rec: ObstructionRecord, delta: Fraction = Fraction(1)) -> ObstructionRecord:
    """Copy of rec with its first non-extension data entry shifted (negative control)."""
    w = rec.witness.copy()
    cell = next(c for c in sorted(w.values) if c not in rec.extension)
    w.values[cell] = w.values[cell] + delta
    return ObstructionRecord(rec.id + "-corrupt", w, rec.system, rec.variability,
                             list(rec.generated), rec.extension, rec.blank)


# ---------------------------------------------------------------------------
# containment by forward insertion closure

DEFAULT_SHAPES = ((3, 3), (3, 4), (4, 3), (3, 5), (5, 3), (4, 4), (4, 5), (5, 4))

Oracle3 = Callable[[np.ndarray, int, int], np.ndarray]


def closure_shapes(rows: int, cols: int) -> tuple[tuple[int, int], ...]:
    """All shapes from 3x3 up to rows x cols, both orientations."""
    out = set()
    for r in range(3, rows + 1):
        for c in range(3, cols + 1):
            out.add((r, c))
            out.add((c, r))
    return tuple(sorted(out))


@lru_cache(maxsize=8)
def _cached_table(seeds: tuple, shapes: tuple, oracle3) -> ClosureTable:
    return ClosureTable(shapes, seeds, three_line_oracle=oracle3)


def build_closure(seeds: Sequence[tuple[Pattern, int]] | None = None,
                  shapes: Sequence[tuple[int, int]] = DEFAULT_SHAPES,
                  oracle3: Oracle3 | None = None) -> ClosureTable:
    seeds = tuple(db_seeds() if seeds is None else seeds)
    return _cached_table(seeds, tuple(sorted(set(shapes))), oracle3)


def status_oracle3(oracle: Callable[[Pattern], Status]) -> Oracle3:
    """Lift a per-pattern oracle to the vectorised form the closure uses.

    Only a Completable answer makes an insertion available; Unknown blocks it.
    """
    def run(bits: np.ndarray, r: int, c: int) -> np.ndarray:
        uniq, inv = np.unique(bits, return_inverse=True)
        ok = np.array([oracle(Pattern(r, c, int(b))) == Status.COMPLETABLE for b in uniq], dtype=bool)
        return ok[inv]
    return run


def insertion_closure_contains(p: Pattern, db: Sequence[tuple[Pattern, int]] | None = None,
                               oracle3: Oracle3 | None = None) -> bool:
    """True when p is an obstruction of db or is reached from one by insertions.

    With oracle3 None the 3-line completability test of rule (c) is answered
    by the closure itself (a 3-line pattern outside the closure counts as
    completable).
    """
    if min(p.shape) < 3:
        return False
    shapes = closure_shapes(max(p.rows, 3), max(p.cols, 3))
    table = build_closure(db, shapes, oracle3)
    return table.contains(p)


def good_line_check(p: Pattern, line: tuple[str, int],
                    oracle: Callable[[Pattern], Status]) -> bool | None:
    """Whether row/column line of p is good; None when the oracle is undecided.

    The auxiliary pattern keeps the columns (rows) of the line's specified
    entries and blanks the line; a blank line can be deleted without changing
    completability, so the line's entries are completable whenever the
    remaining restriction is a completable pattern.  Bordering lines and lines
    with at most 2 specified entries are always good.
    """
    kind, k = line
    q = p if kind == "row" else p.transpose()
    if not 0 <= k < q.rows:
        raise IndexError(f"{kind} {k} outside {p.shape}")
    cols = [c for c in range(q.cols) if q.is_specified(k, c)]
    if k in (0, q.rows - 1) or len(cols) <= 2:
        return True
    rest = [r for r in range(q.rows) if r != k]
    aux = q.submatrix(rest, cols)
    st = oracle(aux)
    if st == Status.COMPLETABLE:
        return True
    return None if st == Status.UNKNOWN else False


def minimality_violations(records: Sequence[ObstructionRecord] | None = None,
                          three_row: Sequence[ThreeRowObstruction] | None = None) -> list[Pattern]:
    """4x4 DB patterns reachable by insertion from smaller obstructions."""
    records = load_4x4() if records is None else records
    seeds = db_seeds(three_row, records)
    table = build_closure(tuple(seeds))
    return [g for rec in records for g in rec.generated if table.contains_smaller(g)]


# ---------------------------------------------------------------------------
# TN records


@dataclass(frozen=True)
class TnRecord:
    id: str
    pattern: Pattern
    witness: PartialMatrix
    note: str


def load_tn(path: Path | None = None) -> list[TnRecord]:
    return [TnRecord(r["id"], Pattern.parse(r["pattern"]), PartialMatrix.parse(r["witness"]),
                     r.get("note", "")) for r in _records(path or db_path("tn"))]
