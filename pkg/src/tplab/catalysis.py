"""Bitmask 1-variable catalysis for whole-shape sweeps.

Same test as atoms.entry_completable, specialised to raw bit grids: atom
candidates for each entry are precomputed per shape as (needed mask, gap
masks, sign), and subpattern verdicts come from per-shape lookup arrays.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable

import numpy as np


def _pos(rows: int, cols: int, r: int, c: int) -> int:
    return rows * cols - 1 - (r * cols + c)


@dataclass(frozen=True)
class AtomCandidate:
    need: int                # cells that must be specified (the entry itself excluded)
    gaps: tuple[int, ...]    # each gap line must keep an unspecified cell in the window
    positive: bool
    rmask: int
    cmask: int


class Geometry:
    """Atom candidates and subpattern extraction for one shape."""

    def __init__(self, rows: int, cols: int):
        self.rows, self.cols = rows, cols
        self.cands: dict[int, list[AtomCandidate]] = {}
        for r in range(rows):
            for c in range(cols):
                self.cands[_pos(rows, cols, r, c)] = self._candidates(r, c)
        self._extract: dict[tuple[int, int], tuple[int, int, int, tuple[int, ...]]] = {}

    def _candidates(self, r: int, c: int) -> list[AtomCandidate]:
        R, C = self.rows, self.cols
        out = []
        for k in range(1, min(R, C) + 1):
            for rows in combinations(range(R), k):
                if r not in rows:
                    continue
                for cols in combinations(range(C), k):
                    if c not in cols:
                        continue
                    need = 0
                    for i in rows:
                        for j in cols:
                            if (i, j) != (r, c):
                                need |= 1 << _pos(R, C, i, j)
                    gaps = []
                    for j in range(cols[0], cols[-1] + 1):
                        if j not in cols:
                            gaps.append(sum(1 << _pos(R, C, i, j) for i in rows))
                    for i in range(rows[0], rows[-1] + 1):
                        if i not in rows:
                            gaps.append(sum(1 << _pos(R, C, i, j) for j in cols))
                    li, lj = rows.index(r), cols.index(c)
                    out.append(AtomCandidate(need, tuple(gaps), (li + lj) % 2 == 0,
                                             sum(1 << i for i in rows), sum(1 << j for j in cols)))
        return out

    def atoms(self, bits: int, u: int) -> list[AtomCandidate]:
        return [a for a in self.cands[u]
                if bits & a.need == a.need and all(bits & g != g for g in a.gaps)]

    def extractor(self, rmask: int, cmask: int):
        key = (rmask, cmask)
        ex = self._extract.get(key)
        if ex is None:
            rows = [i for i in range(self.rows) if rmask >> i & 1]
            cols = [j for j in range(self.cols) if cmask >> j & 1]
            shifts = tuple(_pos(self.rows, self.cols, i, j) for i in rows for j in cols)
            cellmask = sum(1 << s for s in shifts)
            ex = (len(rows), len(cols), cellmask, shifts)
            self._extract[key] = ex
        return ex


SubOracle = Callable[[int, int, int], bool]


class TableOracle:
    """Completability of small raw grids from per-shape boolean arrays.

    Shapes with at most 2 rows or columns are always completable.  A shape
    absent from the table is treated as not known completable.
    """

    def __init__(self, tables: dict[tuple[int, int], np.ndarray]):
        self.tables = tables

    def __call__(self, h: int, w: int, bits: int) -> bool:
        if h <= 2 or w <= 2:
            return True
        t = self.tables.get((h, w))
        return bool(t[bits]) if t is not None else False


class CatalysisEngine:
    def __init__(self, rows: int, cols: int, oracle: SubOracle):
        self.geo = Geometry(rows, cols)
        self.oracle = oracle
        self._memo: dict[tuple[int, int, int], bool] = {}

    def _cell_ok(self, bits: int, rmask: int, cmask: int) -> bool:
        h, w, cellmask, shifts = self.geo.extractor(rmask, cmask)
        key = (rmask, cmask, bits & cellmask)
        hit = self._memo.get(key)
        if hit is None:
            sub = 0
            for s in shifts:
                sub = (sub << 1) | (bits >> s & 1)
            hit = self.oracle(h, w, sub)
            self._memo[key] = hit
        return hit

    def entry_completable(self, bits: int, u: int) -> bool:
        atoms = self.geo.atoms(bits, u)
        pos = [a for a in atoms if a.positive]
        neg = [a for a in atoms if not a.positive]
        for a in pos:
            for b in neg:
                if not self._cell_ok(bits, a.rmask | b.rmask, a.cmask | b.cmask):
                    return False
        return True

    def unspecified(self, bits: int) -> list[int]:
        n = self.geo.rows * self.geo.cols
        return [s for s in range(n - 1, -1, -1) if not bits >> s & 1]

    def catalyst(self, bits: int, accept: Callable[[int], bool]) -> int | None:
        """First unspecified bit u that is completable with accept(bits | u) true."""
        for u in self.unspecified(bits):
            if accept(bits | (1 << u)) and self.entry_completable(bits, u):
                return u
        return None


def _hull(mask: int) -> int:
    """Fill the gaps between the lowest and highest set bits."""
    lo = (mask & -mask).bit_length() - 1
    return ((1 << mask.bit_length()) - 1) ^ ((1 << lo) - 1)


class ScreeningEngine(CatalysisEngine):
    """Optimistic 1-variable screening, the variant the census automation uses.

    Differs from the sound test in three ways: a pair's subpattern is the
    contiguous block spanning both atoms; a block equal to the whole pattern
    passes when the pattern has at least 2 unspecified entries and
    is_open(bits) holds; and the caller accepts the catalysed pattern on the
    same is_open test.  Verdicts are conditional on the patterns it leaves.
    """

    def __init__(self, rows: int, cols: int, oracle: SubOracle, is_open: Callable[[int], bool]):
        super().__init__(rows, cols, oracle)
        self.is_open = is_open
        self._all_rows = (1 << rows) - 1
        self._all_cols = (1 << cols) - 1

    def entry_completable(self, bits: int, u: int) -> bool:
        atoms = self.geo.atoms(bits, u)
        pos = [a for a in atoms if a.positive]
        neg = [a for a in atoms if not a.positive]
        n = self.geo.rows * self.geo.cols
        for a in pos:
            for b in neg:
                rm, cm = _hull(a.rmask | b.rmask), _hull(a.cmask | b.cmask)
                if rm == self._all_rows and cm == self._all_cols:
                    if bin(bits).count("1") > n - 2 or not self.is_open(bits):
                        return False
                elif not self._cell_ok(bits, rm, cm):
                    return False
        return True
