"""Totally nonnegative (TN) side: 1-variable TN obstructions and related checks.

Zero lines can be inserted into partial TN data without losing partial TN, so
a pattern containing a non-TN-completable pattern as a (not necessarily
contiguous) submatrix is itself not TN-completable.  The two 1-variable TN
obstructions are the 2x2 pattern with its (1,1) entry unspecified and the 4x4
pattern with its (1,4) entry unspecified, each under the four symmetries.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .feasibility import Constraint, InequalitySystem, Verdict, decide, positivity
from .matrix import MatrixError, PartialMatrix, bareiss_det, is_partial_tn, is_tn, minor, square_index_sets
from .obstructions import CheckResult, VerificationReport, load_4x4, load_tn
from .pattern import Pattern, PatternError
from .poly import Poly

TN_OBSTRUCTIONS = (Pattern.parse("?*/**"), Pattern.parse("***?/****/****/****"))
COUNTEREXAMPLE_ID = "34var-3"
# TN-completable 1-variable atoms (one negative, two positive)
TN_COMPLETABLE_ATOMS = (Pattern.parse("*?/**"), Pattern.parse("?"), Pattern.parse("**?/***/***"))
WITNESS_BOUND = {"tn-4x4": Fraction(-1)}


@lru_cache(maxsize=None)
def _obstruction_grids() -> tuple[tuple[tuple[bool, ...], ...], ...]:
    out = set()
    for p in TN_OBSTRUCTIONS:
        for q in p.images():
            out.add(tuple(tuple(row) for row in q.grid()))
    return tuple(sorted(out))


def tn_contains_obstruction(p: Pattern) -> bool:
    """Whether p has a 1-variable TN obstruction as a submatrix (any rows and columns)."""
    g = p.grid()
    for ob in _obstruction_grids():
        k, l = len(ob), len(ob[0])
        if k > p.rows or l > p.cols:
            continue
        for R in combinations(range(p.rows), k):
            for C in combinations(range(p.cols), l):
                if all(g[r][c] == ob[i][j] for i, r in enumerate(R) for j, c in enumerate(C)):
                    return True
    return False


def single_entry_pattern(m: int, n: int, i: int, j: int) -> Pattern:
    """m-by-n pattern whose only unspecified entry is (i, j), 1-based."""
    if not (1 <= i <= m and 1 <= j <= n):
        raise PatternError(f"position ({i},{j}) outside {m}x{n}")
    return Pattern.from_grid([[(r, c) != (i - 1, j - 1) for c in range(n)] for r in range(m)])


def tn_single_entry_completable(m: int, n: int, i: int, j: int) -> bool:
    if not (1 <= i <= m and 1 <= j <= n):
        raise PatternError(f"position ({i},{j}) outside {m}x{n}")
    k = min(m, n)
    return k == 1 or (k in (2, 3) and (i, j) in ((1, n), (m, 1)))


# ---------------------------------------------------------------------------
# constructive 3x3 completion


def _entries(data: PartialMatrix) -> list[list[Fraction]]:
    if (data.rows, data.cols) != (3, 3):
        raise MatrixError("3x3 data required")
    want = {(r, c) for r in range(3) for c in range(3)} - {(0, 2)}
    if set(data.values) != want:
        raise MatrixError("data must specify every entry except (1,3)")
    return [[data.values.get((r, c), Fraction(0)) for c in range(3)] for r in range(3)]


def _completed(data: PartialMatrix, x: Fraction) -> list[list[Fraction]]:
    g = _entries(data)
    g[0][2] = Fraction(x)
    return g


def tn_complete_case3(data: PartialMatrix) -> Fraction:
    """A value for the (1,3) entry that makes the 3x3 data TN.

    x = 0 is returned when it works.  Otherwise a, b, c, e, h are positive;
    scaling rows and columns to make them 1 turns d into 1 + alpha, and the
    completion x' = 1/(1 + alpha) of the scaled matrix un-scales to b*e/d.
    """
    g = _entries(data)
    if not is_partial_tn(data):
        raise MatrixError("data is not partial TN")
    if is_tn(_completed(data, Fraction(0))):
        return Fraction(0)
    a, b, _ = g[0]
    c, d, e = g[1]
    if min(a, b, c, d, e, g[2][2]) <= 0:
        raise MatrixError("positivity chain fails although x = 0 is not a TN completion")
    # scaling: row1 = 1, col1 = 1/a, col2 = 1/b, row2 = a/c, col3 = c/(a e)
    alpha = a * d / (b * c) - 1
    x_scaled = 1 / (1 + alpha)
    return x_scaled * a * e / c


def case3_determinant(alpha: Fraction, beta: Fraction, f: Fraction) -> Fraction:
    """Determinant of the proof-normalised matrix completed with x = 1/(1+alpha)."""
    g = [[Fraction(1), Fraction(1), 1 / (1 + alpha)],
         [Fraction(1), 1 + alpha, Fraction(1)],
         [f, (1 + alpha) / (1 + beta), Fraction(1)]]
    return bareiss_det(g)


def normalised_case3(alpha, beta, f) -> PartialMatrix:
    alpha, beta, f = Fraction(alpha), Fraction(beta), Fraction(f)
    return PartialMatrix.from_rows([[1, 1, None], [1, 1 + alpha, 1], [f, (1 + alpha) / (1 + beta), 1]])


# ---------------------------------------------------------------------------
# verification


def _witness_minors(w: PartialMatrix) -> list[tuple[tuple, tuple, Poly]]:
    """Minors whose cells are all specified or named, and contain a named cell."""
    out = []
    for R, C in square_index_sets(w.rows, w.cols):
        cells = [(r, c) for r in R for c in C]
        if any(x not in w.values and x not in w.vars for x in cells):
            continue
        if any(x in w.vars for x in cells):
            out.append((R, C, minor(w, R, C)))
    return out


def verify_tn_record(rec) -> VerificationReport:
    w = rec.witness
    checks = [CheckResult("partial_tn", is_partial_tn(w))]
    (name,) = w.vars.values()
    full = minor(w, tuple(range(w.rows)), tuple(range(w.cols)))
    x = Poly.var(name)
    if full.degree_in(name) == 0:
        checks.append(CheckResult("constant_minor", full.const_value() < 0, f"determinant {full}"))
    else:
        co = full.coeffs_in(name)
        slope, const = co.get(1, Poly()).const_value(), co.get(0, Poly()).const_value()
        bound = -const / slope
        expect = WITNESS_BOUND.get(rec.id)
        ok = slope < 0 and (expect is None or bound == expect)
        checks.append(CheckResult("linear_bound", ok, f"determinant >= 0 iff {name} <= {bound}"))
    cons = [Constraint(d, False) for _, _, d in _witness_minors(w)]
    res = decide(InequalitySystem(cons + [Constraint(x, False)], [name]))
    ok = {Verdict.INFEASIBLE: True, Verdict.FEASIBLE: False}.get(res.status)
    checks.append(CheckResult("tn_infeasible", ok, res.reason))
    checks.append(CheckResult("pattern", w.pattern == rec.pattern and tn_contains_obstruction(rec.pattern)))
    return VerificationReport(rec.id, checks)


def verify_tn_witnesses(records=None) -> list[VerificationReport]:
    return [verify_tn_record(r) for r in (load_tn() if records is None else records)]


def verify_tp_tn_counterexample(records=None) -> VerificationReport:
    """The 4-variable TP obstruction whose TN system is solved by zeros."""
    recs = load_4x4() if records is None else records
    rec = next(r for r in recs if r.id == COUNTEREXAMPLE_ID)
    names = list(rec.witness.vars.values())
    strict = InequalitySystem(list(rec.system.constraints) + positivity(names, True), list(names))
    weak = InequalitySystem([Constraint(c.poly, False) for c in strict.constraints], list(names))
    checks = []
    r1 = decide(strict)
    checks.append(CheckResult("tp_infeasible", {Verdict.INFEASIBLE: True, Verdict.FEASIBLE: False}
                              .get(r1.status), r1.reason))
    r2 = decide(weak)
    zero = {v: Fraction(0) for v in names}
    checks.append(CheckResult("tn_feasible_at_zero", r2.status == Verdict.FEASIBLE and weak.satisfied_by(zero),
                              "witness " + " ".join(f"{k}={v}" for k, v in (r2.witness or {}).items())))
    bad = [(R, C) for R, C, d in _witness_minors(rec.witness) if d.evaluate(zero) < 0]
    checks.append(CheckResult("zero_minors_nonnegative", not bad, "" if not bad else f"negative at {bad}"))
    flagged = [p.render() for p in TN_COMPLETABLE_ATOMS if tn_contains_obstruction(p)]
    checks.append(CheckResult("tn_completable_atoms", not flagged, ", ".join(flagged)))
    return VerificationReport(rec.id + "-tn", checks)
