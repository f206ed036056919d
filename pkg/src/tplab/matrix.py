"""Exact rational partial matrices, minors and positivity tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterator, Sequence

from .pattern import Pattern
from .poly import Poly

Cell = tuple[int, int]


class MatrixError(ValueError):
    pass


def to_fraction(text) -> Fraction:
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text).strip())


@dataclass
class PartialMatrix:
    rows: int
    cols: int
    values: dict[Cell, Fraction] = field(default_factory=dict)
    vars: dict[Cell, str] = field(default_factory=dict)
    extension: set[Cell] = field(default_factory=set)

    def __post_init__(self):
        for (r, c) in list(self.values) + list(self.vars):
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise MatrixError(f"cell {(r, c)} outside {self.rows}x{self.cols}")
        clash = set(self.values) & set(self.vars)
        if clash:
            raise MatrixError(f"cells both specified and variable: {sorted(clash)}")
        if len(set(self.vars.values())) != len(self.vars):
            raise MatrixError("variable names must be unique")

    # -- construction -----------------------------------------------------
    @classmethod
    def parse(cls, text: str) -> "PartialMatrix":
        """Rows split by ';', entries by ','; '?' unspecified, '$name' variable."""
        rows = [r for r in text.strip().split(";") if r.strip()]
        grid = [[e.strip() for e in r.split(",")] for r in rows]
        ncols = len(grid[0])
        values, names = {}, {}
        for i, row in enumerate(grid):
            if len(row) != ncols:
                raise MatrixError(f"ragged matrix text {text!r}")
            for j, e in enumerate(row):
                if e == "?":
                    continue
                if e.startswith("$"):
                    names[(i, j)] = e[1:]
                else:
                    try:
                        values[(i, j)] = to_fraction(e)
                    except (ValueError, ZeroDivisionError) as exc:
                        raise MatrixError(f"bad entry {e!r}") from exc
        return cls(len(grid), ncols, values, names)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "PartialMatrix":
        """Nested lists; None marks unspecified, str marks a variable name."""
        values, names = {}, {}
        for i, row in enumerate(rows):
            for j, e in enumerate(row):
                if e is None:
                    continue
                if isinstance(e, str):
                    names[(i, j)] = e
                else:
                    values[(i, j)] = to_fraction(e)
        return cls(len(rows), len(rows[0]), values, names)

    def render(self) -> str:
        out = []
        for i in range(self.rows):
            row = []
            for j in range(self.cols):
                if (i, j) in self.values:
                    row.append(str(self.values[(i, j)]))
                elif (i, j) in self.vars:
                    row.append("$" + self.vars[(i, j)])
                else:
                    row.append("?")
            out.append(",".join(row))
        return ";".join(out)

    def __str__(self) -> str:
        return self.render()

    # -- views ------------------------------------------------------------
    @property
    def pattern(self) -> Pattern:
        return Pattern.from_grid([[(i, j) in self.values for j in range(self.cols)]
                                  for i in range(self.rows)])

    def entry(self, r: int, c: int):
        """Fraction, Poly variable, or None when unspecified and unnamed."""
        if (r, c) in self.values:
            return self.values[(r, c)]
        if (r, c) in self.vars:
            return Poly.var(self.vars[(r, c)])
        return None

    def with_values(self, assignment: dict[str, Fraction]) -> "PartialMatrix":
        """Substitute named variables; names not in assignment stay symbolic."""
        values = dict(self.values)
        names = {}
        for cell, name in self.vars.items():
            if name in assignment:
                values[cell] = Fraction(assignment[name])
            else:
                names[cell] = name
        return PartialMatrix(self.rows, self.cols, values, names, set(self.extension))

    def without(self, cells) -> "PartialMatrix":
        """Drop the given specified cells back to unspecified."""
        drop = set(cells)
        return PartialMatrix(self.rows, self.cols,
                             {k: v for k, v in self.values.items() if k not in drop},
                             dict(self.vars), self.extension - drop)

    def copy(self) -> "PartialMatrix":
        return PartialMatrix(self.rows, self.cols, dict(self.values), dict(self.vars),
                             set(self.extension))


# ---------------------------------------------------------------------------
# determinants


def bareiss_det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    """Fraction-free elimination; entries may be rationals."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    # clear denominators row by row so elimination runs over integers
    a, scale = [], Fraction(1)
    for row in m:
        den = 1
        for x in row:
            den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
        a.append([int(Fraction(x) * den) for x in row])
        scale /= den
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1] * scale


def laplace_det(m: Sequence[Sequence]):
    """Cofactor expansion along the first row; entries may be Poly."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return m[0][0]
    total = Poly()
    for j in range(n):
        if isinstance(m[0][j], (int, Fraction)) and m[0][j] == 0:
            continue
        sub = [row[:j] + row[j + 1:] for row in m[1:]]
        term = Poly.coerce(m[0][j]) * Poly.coerce(laplace_det(sub))
        total = total + term if j % 2 == 0 else total - term
    return total


def minor(m: PartialMatrix, rows: Sequence[int], cols: Sequence[int]) -> Poly:
    """Exact determinant of a square submatrix as a polynomial in the named variables."""
    if len(rows) != len(cols):
        raise MatrixError("minor needs a square index set")
    sub = []
    symbolic = False
    for r in rows:
        row = []
        for c in cols:
            e = m.entry(r, c)
            if e is None:
                raise MatrixError(f"entry {(r, c)} is unspecified and unnamed")
            symbolic |= isinstance(e, Poly)
            row.append(e)
        sub.append(row)
    if symbolic:
        return Poly.coerce(laplace_det(sub))
    return Poly.const(bareiss_det(sub))


def square_index_sets(rows: int, cols: int, contiguous: bool = False) -> Iterator[tuple[tuple, tuple]]:
    for k in range(1, min(rows, cols) + 1):
        if contiguous:
            rsets = [tuple(range(i, i + k)) for i in range(rows - k + 1)]
            csets = [tuple(range(j, j + k)) for j in range(cols - k + 1)]
        else:
            rsets = list(combinations(range(rows), k))
            csets = list(combinations(range(cols), k))
        for R in rsets:
            for C in csets:
                yield R, C


def specified_minors(m: PartialMatrix) -> Iterator[tuple[tuple, tuple, Fraction]]:
    """Every fully specified square submatrix with its determinant."""
    for R, C in square_index_sets(m.rows, m.cols):
        if all((r, c) in m.values for r in R for c in C):
            yield R, C, bareiss_det([[m.values[(r, c)] for c in C] for r in R])


def is_partial_tp(m: PartialMatrix) -> bool:
    return all(d > 0 for _, _, d in specified_minors(m))


def is_partial_tn(m: PartialMatrix) -> bool:
    return all(d >= 0 for _, _, d in specified_minors(m))


def _full_grid(m) -> list[list[Fraction]]:
    if isinstance(m, PartialMatrix):
        if len(m.values) != m.rows * m.cols:
            raise MatrixError("matrix has unspecified entries")
        return [[m.values[(i, j)] for j in range(m.cols)] for i in range(m.rows)]
    return [[to_fraction(x) for x in row] for row in m]


def fekete_is_tp(m) -> bool:
    """TP test via contiguous square minors only."""
    g = _full_grid(m)
    rows, cols = len(g), len(g[0])
    return all(bareiss_det([[g[r][c] for c in C] for r in R]) > 0
               for R, C in square_index_sets(rows, cols, contiguous=True))


def is_tp(m) -> bool:
    """TP test via every square minor."""
    g = _full_grid(m)
    rows, cols = len(g), len(g[0])
    return all(bareiss_det([[g[r][c] for c in C] for r in R]) > 0
               for R, C in square_index_sets(rows, cols))


def is_tn(m) -> bool:
    g = _full_grid(m)
    rows, cols = len(g), len(g[0])
    return all(bareiss_det([[g[r][c] for c in C] for r in R]) >= 0
               for R, C in square_index_sets(rows, cols))
