"""Forward insertion closure of obstruction sets over raw bit grids.

Starting from seed obstructions (all symmetry images), patterns are grown one
line at a time:

  (a) a line may border the pattern whatever its entries;
  (b) an interior line may be inserted when it has at most 2 specified entries;
  (c) an interior line with exactly 3 specified entries may be inserted when the
      pattern restricted to the 3 crossing lines holding those entries, with the
      new line blank, is completable as judged by the 3-line oracle.  A blank
      line can always be deleted, so this is the old pattern's restriction.

Everything reached this way is non-completable.  Each shape keeps an int16
array over all raw bit grids holding the least key of a seed from which the
grid is reachable (0 means unreached).  A key packs the seed's variability and
its index, so the least key names a seed of least variability.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .pattern import Pattern, permute_array

INF = np.int16(32767)
KEY = 1000  # key = variability * KEY + seed index


def _popcount_small(w: int) -> int:
    return bin(w).count("1")


def insert_row(bits: np.ndarray, r: int, c: int, k: int, w: int) -> np.ndarray:
    """Insert row value w (c bits) before row k of r-by-c grids."""
    low = (r - k) * c
    top = bits >> np.int64(low)
    bottom = bits & np.int64((1 << low) - 1)
    return (top << np.int64(low + c)) | np.int64(w << low) | bottom


def insert_col(bits: np.ndarray, r: int, c: int, k: int, w: int) -> np.ndarray:
    """Insert column value w (r bits, top row most significant) before column k."""
    out = np.zeros_like(bits)
    right_w = c - k
    rmask = np.int64((1 << right_w) - 1)
    cmask = np.int64((1 << c) - 1)
    for i in range(r):
        row = (bits >> np.int64((r - 1 - i) * c)) & cmask
        left = row >> np.int64(right_w)
        right = row & rmask
        bit = (w >> (r - 1 - i)) & 1
        newrow = (left << np.int64(right_w + 1)) | np.int64(bit << right_w) | right
        out |= newrow << np.int64((r - 1 - i) * (c + 1))
    return out


def restrict_cols(bits: np.ndarray, r: int, c: int, cols: list[int]) -> np.ndarray:
    """Raw bits of the r-by-len(cols) subgrid."""
    out = np.zeros_like(bits)
    n = len(cols)
    for i in range(r):
        for jj, j in enumerate(cols):
            b = (bits >> np.int64((r - 1 - i) * c + (c - 1 - j))) & 1
            out |= b << np.int64((r - 1 - i) * n + (n - 1 - jj))
    return out


def restrict_rows(bits: np.ndarray, r: int, c: int, rows: list[int]) -> np.ndarray:
    out = np.zeros_like(bits)
    n = len(rows)
    cmask = np.int64((1 << c) - 1)
    for ii, i in enumerate(rows):
        row = (bits >> np.int64((r - 1 - i) * c)) & cmask
        out |= row << np.int64((n - 1 - ii) * c)
    return out


def _bit_positions(w: int, width: int) -> list[int]:
    """Indices (0 = first line) of set bits of a width-bit line value."""
    return [j for j in range(width) if (w >> (width - 1 - j)) & 1]


class ClosureTable:
    """Per-shape arrays of least seed key for reachable raw grids."""

    def __init__(self, shapes: Iterable[tuple[int, int]], seeds: Iterable[tuple[Pattern, int]] = (),
                 three_line_oracle=None):
        self.shapes = sorted(set(shapes), key=lambda s: (s[0] + s[1], s[0]))
        self.reached: dict[tuple[int, int], np.ndarray] = {}
        self.seeded: dict[tuple[int, int], np.ndarray] = {}
        self._oracle = three_line_oracle
        self._combined: dict[tuple[int, int], np.ndarray] = {}
        self.seeds = list(seeds)
        if len(self.seeds) >= KEY:
            raise ValueError("too many seeds")
        for shape in self.shapes:
            r, c = shape
            seed = np.zeros(1 << (r * c), dtype=np.int16)
            for i, (p, var) in enumerate(self.seeds):
                key = var * KEY + i
                for q in p.images():
                    if q.shape == shape:
                        cur = seed[q.bits]
                        seed[q.bits] = key if cur == 0 else min(cur, key)
            self.seeded[shape] = seed
            self.reached[shape] = self._grow(r, c)

    # -- lookups ----------------------------------------------------------
    def key(self, p: Pattern) -> int:
        """Least seed key over seeds p is or contains (0 when none)."""
        a = self.reached.get(p.shape)
        if a is None:
            raise KeyError(f"shape {p.shape} outside the closure bound")
        return int(self.combined(p.shape)[p.bits])

    def variability(self, p: Pattern) -> int:
        """Least variability among seeds p contains (0 when none)."""
        return self.key(p) // KEY

    def seed_of(self, key: int) -> tuple[Pattern, int]:
        return self.seeds[key % KEY]

    def contains(self, p: Pattern) -> bool:
        return self.key(p) > 0

    def contains_smaller(self, p: Pattern) -> int:
        """Variability reached by insertion from strictly smaller seeds (0 when none)."""
        return int(self.reached[p.shape][p.bits]) // KEY

    def combined(self, shape) -> np.ndarray:
        """Per-grid least key over reached and seeded grids."""
        hit = self._combined.get(shape)
        if hit is None:
            a, s = self.reached[shape], self.seeded[shape]
            hit = np.where((a > 0) & (s > 0), np.minimum(a, s), np.maximum(a, s)).astype(np.int16)
            self._combined[shape] = hit
        return hit

    def has_shape(self, shape) -> bool:
        return shape in self.reached

    # -- construction -----------------------------------------------------
    def _three_line_completable(self, bits: np.ndarray, r: int, c: int) -> np.ndarray:
        """Completability of r-by-c grids where min(r, c) == 3."""
        if self._oracle is not None:
            return self._oracle(bits, r, c)
        shape = (r, c)
        if shape not in self.reached:
            raise KeyError(f"closure lacks shape {shape} needed by the 3-line rule")
        return self.combined(shape)[bits] == 0

    def _grow(self, r: int, c: int) -> np.ndarray:
        target = np.full(1 << (r * c), INF, dtype=np.int16)
        # row insertion from (r-1, c)
        src_shape = (r - 1, c)
        if src_shape in self.reached:
            self._insert_from(target, src_shape, rows=True)
        src_shape = (r, c - 1)
        if src_shape in self.reached:
            self._insert_from(target, src_shape, rows=False)
        target[target == INF] = 0
        return target

    def _insert_from(self, target: np.ndarray, src_shape, rows: bool):
        r0, c0 = src_shape
        src = self.combined(src_shape)
        idx = np.nonzero(src)[0].astype(np.int64)
        if idx.size == 0:
            return
        vals = src[idx]
        nlines = r0 if rows else c0  # lines of the kind being inserted
        width = c0 if rows else r0   # entries per inserted line
        for k in range(nlines + 1):
            border = k == 0 or k == nlines
            for w in range(1 << width):
                pc = _popcount_small(w)
                if not border and pc > 3:
                    continue
                keep = None
                if not border and pc == 3:
                    lines = _bit_positions(w, width)
                    # the new line is blank in the restriction, so it drops out
                    if rows:
                        sub = restrict_cols(idx, r0, c0, lines)
                        keep = self._three_line_completable(sub, r0, 3)
                    else:
                        sub = restrict_rows(idx, r0, c0, lines)
                        keep = self._three_line_completable(sub, 3, c0)
                    if not keep.any():
                        continue
                s_idx = idx if keep is None else idx[keep]
                s_val = vals if keep is None else vals[keep]
                new = insert_row(s_idx, r0, c0, k, w) if rows else insert_col(s_idx, r0, c0, k, w)
                np.minimum.at(target, new, s_val)


def transpose_array(arr: np.ndarray, r: int, c: int) -> np.ndarray:
    """Re-index a per-grid array of r-by-c shape onto c-by-r grids."""
    idx = np.arange(arr.size, dtype=np.int64)
    _, _, t = permute_array(idx, r, c, "transpose")
    out = np.empty_like(arr)
    out[t] = arr
    return out
