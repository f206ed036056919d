"""U-atoms, derived submatrices and the 1-variable catalysis table."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Callable, Iterable

from .feasibility import Constraint, FeasibilityResult, InequalitySystem, decide
from .pattern import Pattern

Cell = tuple[int, int]
Index = tuple[tuple[int, ...], tuple[int, ...]]


class Status(str, Enum):
    COMPLETABLE = "Completable"
    NONCOMPLETABLE = "NonCompletable"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


def _out_of_u(p: Pattern, u: frozenset, r: int, c: int) -> bool:
    return not p.is_specified(r, c) and (r, c) not in u


def _check_u(p: Pattern, u) -> frozenset:
    u = frozenset(u)
    for r, c in u:
        if p.is_specified(r, c):
            raise ValueError(f"U entry {(r, c)} is specified in {p}")
    return u


def derived_submatrices(p: Pattern, u, rows, cols) -> tuple[Index, Index]:
    """(column-derived, row-derived) index pairs of the square submatrix rows x cols."""
    u = _check_u(p, u)
    rows, cols = tuple(sorted(rows)), tuple(sorted(cols))
    dcols = tuple(c for c in range(cols[0], cols[-1] + 1)
                  if not any(_out_of_u(p, u, r, c) for r in rows))
    drows = tuple(r for r in range(rows[0], rows[-1] + 1)
                  if not any(_out_of_u(p, u, r, c) for c in cols))
    return (rows, dcols), (drows, cols)


def is_u_atom(p: Pattern, u, rows, cols) -> bool:
    u = _check_u(p, u)
    rows, cols = tuple(sorted(rows)), tuple(sorted(cols))
    cells = [(r, c) for r in rows for c in cols]
    if any(_out_of_u(p, u, r, c) for r, c in cells):
        return False
    if not any((r, c) in u for r, c in cells):
        return False
    for c in range(cols[0], cols[-1] + 1):
        if c not in cols and not any(_out_of_u(p, u, r, c) for r in rows):
            return False
    for r in range(rows[0], rows[-1] + 1):
        if r not in rows and not any(_out_of_u(p, u, r, c) for c in cols):
            return False
    return True


def enumerate_u_atoms(p: Pattern, u) -> list[Index]:
    u = _check_u(p, u)
    if not u:
        raise ValueError("U must be nonempty")
    out = []
    for k in range(1, min(p.rows, p.cols) + 1):
        for rows in combinations(range(p.rows), k):
            for cols in combinations(range(p.cols), k):
                if is_u_atom(p, u, rows, cols):
                    out.append((rows, cols))
    return out


@dataclass(frozen=True)
class OneVarAtom:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    positive: bool

    @property
    def sign(self) -> str:
        return "positive" if self.positive else "negative"


def one_var_atoms(p: Pattern, cell: Cell) -> list[OneVarAtom]:
    """Atoms for U = {cell}, signed by the parity of the cell's local position."""
    out = []
    for rows, cols in enumerate_u_atoms(p, {cell}):
        i, j = rows.index(cell[0]), cols.index(cell[1])
        out.append(OneVarAtom(rows, cols, (i + j) % 2 == 0))
    return out


def catalysis_cells(p: Pattern, cell: Cell) -> list[tuple[OneVarAtom, OneVarAtom, Pattern]]:
    """Table of (positive atom, negative atom, smallest subpattern holding both)."""
    atoms = one_var_atoms(p, cell)
    pos = [a for a in atoms if a.positive]
    neg = [a for a in atoms if not a.positive]
    table = []
    for a in pos:
        for b in neg:
            rows = sorted(set(a.rows) | set(b.rows))
            cols = sorted(set(a.cols) | set(b.cols))
            table.append((a, b, p.submatrix(rows, cols)))
    return table


Oracle = Callable[[Pattern], Status]


def entry_completable(p: Pattern, cell: Cell, oracle: Oracle) -> bool:
    """True when every positive/negative atom pair at cell spans a completable subpattern."""
    return all(oracle(sub) == Status.COMPLETABLE for _, _, sub in catalysis_cells(p, cell))


def one_var_catalysis(p: Pattern, oracle: Oracle, cells: Iterable[Cell] | None = None) -> set[Cell]:
    """Unspecified entries that are provably completable on their own."""
    cells = p.unspecified() if cells is None else cells
    return {c for c in cells if entry_completable(p, c, oracle)}


def subset_completable(m, u, budget: int | None = None) -> FeasibilityResult:
    """Decide whether the entries U of partial TP data m can be filled on their own.

    The system is det S > 0 over the U-atoms S.  Cells of U already named in
    m keep their names; the others are named u<r>_<c>.  A Feasible witness is
    keyed by those names.
    """
    from .matrix import MatrixError, PartialMatrix, is_partial_tp, minor

    pat = m.pattern
    u = _check_u(pat, u)
    if not u:
        raise ValueError("U must be nonempty")
    stray = set(m.vars) - u
    if stray:
        raise MatrixError(f"variables outside U: {sorted(stray)}")
    if not is_partial_tp(m):
        raise MatrixError("data is not partial TP")
    names = {cell: m.vars.get(cell, f"u{cell[0] + 1}_{cell[1] + 1}") for cell in sorted(u)}
    data = PartialMatrix(m.rows, m.cols, dict(m.values), names)
    cons = [Constraint(minor(data, R, C)) for R, C in enumerate_u_atoms(pat, u)]
    return decide(InequalitySystem(cons, list(names.values())), budget)
