"""Patterns of specified/unspecified entries and their symmetry classes.

A pattern is stored as an integer bit grid, row-major with the first entry in
the most significant position, bit set for a specified entry.  With that
layout the integer order agrees with the reversed text order ('*' < '?'), so
the lexicographically least rendering of a class is its largest integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

SPECIFIED = "*"
UNSPECIFIED = "?"
ROW_SEP = "/"

OPS = ("identity", "transpose", "anti-transpose", "rotate")

DEFAULT_BIT_BUDGET = 30


class PatternError(ValueError):
    pass


class ResourceLimit(RuntimeError):
    pass


def _pos(rows: int, cols: int, r: int, c: int) -> int:
    return rows * cols - 1 - (r * cols + c)


@dataclass(frozen=True, order=True)
class Pattern:
    rows: int
    cols: int
    bits: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise PatternError(f"bad shape {self.rows}x{self.cols}")
        if self.bits < 0 or self.bits >> (self.rows * self.cols):
            raise PatternError("bit grid does not fit the shape")

    # -- construction -----------------------------------------------------
    @classmethod
    def parse(cls, text: str) -> "Pattern":
        lines = [ln.strip() for ln in text.strip().split(ROW_SEP)]
        if not lines or not lines[0]:
            raise PatternError(f"empty pattern {text!r}")
        cols = len(lines[0])
        bits = 0
        for ln in lines:
            if len(ln) != cols:
                raise PatternError(f"ragged pattern {text!r}")
            for ch in ln:
                if ch not in (SPECIFIED, UNSPECIFIED):
                    raise PatternError(f"bad character {ch!r} in {text!r}")
                bits = (bits << 1) | (ch == SPECIFIED)
        return cls(len(lines), cols, bits)

    @classmethod
    def from_grid(cls, grid) -> "Pattern":
        """Build from nested rows of truthy (specified) / falsy flags."""
        grid = [list(r) for r in grid]
        rows, cols = len(grid), len(grid[0])
        bits = 0
        for row in grid:
            if len(row) != cols:
                raise PatternError("ragged grid")
            for v in row:
                bits = (bits << 1) | bool(v)
        return cls(rows, cols, bits)

    @classmethod
    def full(cls, rows: int, cols: int) -> "Pattern":
        return cls(rows, cols, (1 << (rows * cols)) - 1)

    @classmethod
    def with_unspecified(cls, rows: int, cols: int, cells) -> "Pattern":
        p = cls.full(rows, cols)
        for r, c in cells:
            p = p.unspecify(r, c)
        return p

    # -- access -----------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_specified(self, r: int, c: int) -> bool:
        return bool(self.bits >> _pos(self.rows, self.cols, r, c) & 1)

    def grid(self) -> list[list[bool]]:
        return [[self.is_specified(r, c) for c in range(self.cols)] for r in range(self.rows)]

    def unspecified(self) -> list[tuple[int, int]]:
        return [(r, c) for r in range(self.rows) for c in range(self.cols)
                if not self.is_specified(r, c)]

    @property
    def n_unspecified(self) -> int:
        return self.rows * self.cols - bin(self.bits).count("1")

    def specify(self, r: int, c: int) -> "Pattern":
        return Pattern(self.rows, self.cols, self.bits | 1 << _pos(self.rows, self.cols, r, c))

    def unspecify(self, r: int, c: int) -> "Pattern":
        return Pattern(self.rows, self.cols, self.bits & ~(1 << _pos(self.rows, self.cols, r, c)))

    def row_counts(self) -> list[int]:
        return [sum(self.is_specified(r, c) for c in range(self.cols)) for r in range(self.rows)]

    def col_counts(self) -> list[int]:
        return [sum(self.is_specified(r, c) for r in range(self.rows)) for c in range(self.cols)]

    def submatrix(self, rows, cols) -> "Pattern":
        return Pattern.from_grid([[self.is_specified(r, c) for c in cols] for r in rows])

    def delete_row(self, r: int) -> "Pattern":
        keep = [i for i in range(self.rows) if i != r]
        return self.submatrix(keep, range(self.cols))

    def delete_col(self, c: int) -> "Pattern":
        keep = [j for j in range(self.cols) if j != c]
        return self.submatrix(range(self.rows), keep)

    def insert_row(self, at: int, flags) -> "Pattern":
        g = self.grid()
        g.insert(at, [bool(f) for f in flags])
        return Pattern.from_grid(g)

    def insert_col(self, at: int, flags) -> "Pattern":
        g = self.grid()
        for row, f in zip(g, flags):
            row.insert(at, bool(f))
        return Pattern.from_grid(g)

    # -- symmetry ---------------------------------------------------------
    def transpose(self) -> "Pattern":
        return Pattern.from_grid([[self.is_specified(r, c) for r in range(self.rows)]
                                  for c in range(self.cols)])

    def anti_transpose(self) -> "Pattern":
        # entry (r, c) moves to (cols-1-c, rows-1-r)
        return Pattern.from_grid([[self.is_specified(self.rows - 1 - j, self.cols - 1 - i)
                                   for j in range(self.rows)] for i in range(self.cols)])

    def rotate(self) -> "Pattern":
        return Pattern(self.rows, self.cols, _reverse_bits(self.bits, self.rows * self.cols))

    def image(self, op: str) -> "Pattern":
        if op == "identity":
            return self
        if op == "transpose":
            return self.transpose()
        if op == "anti-transpose":
            return self.anti_transpose()
        if op == "rotate":
            return self.rotate()
        raise PatternError(f"unknown symmetry {op!r}")

    def images(self) -> list["Pattern"]:
        return [self.image(op) for op in OPS]

    def canonical(self) -> "Pattern":
        return canonical_form(self)

    def is_reduced(self) -> bool:
        return is_reduced(self)

    # -- text -------------------------------------------------------------
    def render(self) -> str:
        return ROW_SEP.join(
            "".join(SPECIFIED if self.is_specified(r, c) else UNSPECIFIED for c in range(self.cols))
            for r in range(self.rows))

    def pretty(self) -> str:
        return "\n".join(" ".join(ln) for ln in self.render().split(ROW_SEP))

    def __str__(self) -> str:
        return self.render()


def _reverse_bits(x: int, width: int) -> int:
    return int(format(x, f"0{width}b")[::-1], 2) if width else 0


def canonical_form(p: Pattern) -> Pattern:
    """Least rendering among the symmetry images, shape normalised to rows <= cols."""
    best = None
    for q in p.images():
        if q.rows > q.cols:
            q = q.transpose()
        if best is None or q.bits > best.bits:
            best = q
    return best


def is_reduced(p: Pattern) -> bool:
    return min(p.row_counts()) >= 2 and min(p.col_counts()) >= 2


# ---------------------------------------------------------------------------
# vectorised symmetry tables, used for whole-shape enumeration


@lru_cache(maxsize=None)
def _perm(rows: int, cols: int, op: str) -> tuple[int, int, tuple[int, ...]]:
    """Return (out_rows, out_cols, src) with src[k] = source bit for output bit k."""
    if op == "identity":
        orows, ocols = rows, cols
        f = lambda i, j: (i, j)  # noqa: E731
    elif op == "transpose":
        orows, ocols = cols, rows
        f = lambda i, j: (j, i)  # noqa: E731
    elif op == "anti-transpose":
        orows, ocols = cols, rows
        f = lambda i, j: (rows - 1 - j, cols - 1 - i)  # noqa: E731
    else:
        orows, ocols = rows, cols
        f = lambda i, j: (rows - 1 - i, cols - 1 - j)  # noqa: E731
    src = [0] * (rows * cols)
    for i in range(orows):
        for j in range(ocols):
            r, c = f(i, j)
            src[_pos(orows, ocols, i, j)] = _pos(rows, cols, r, c)
    return orows, ocols, tuple(src)


def permute_array(bits: np.ndarray, rows: int, cols: int, op: str) -> tuple[int, int, np.ndarray]:
    orows, ocols, src = _perm(rows, cols, op)
    out = np.zeros_like(bits)
    for k, s in enumerate(src):
        out |= ((bits >> np.int64(s)) & 1) << np.int64(k)
    return orows, ocols, out


def canonical_array(bits: np.ndarray, rows: int, cols: int) -> tuple[int, int, np.ndarray]:
    """Canonical bit grids for an array of same-shape patterns."""
    shape_rows, shape_cols = min(rows, cols), max(rows, cols)
    best = None
    for op in OPS:
        orows, ocols, img = permute_array(bits, rows, cols, op)
        if orows > ocols:
            orows, ocols, img = permute_array(img, orows, ocols, "transpose")
        best = img if best is None else np.maximum(best, img)
    return shape_rows, shape_cols, best


def canonical_bits_of_shape(m: int, n: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> np.ndarray:
    """Sorted array of canonical bit grids for all m-by-n patterns (shape normalised)."""
    if m < 1 or n < 1:
        raise PatternError("shape must be positive")
    if m * n > bit_budget:
        raise ResourceLimit(f"{m}x{n} needs {m * n} bits, budget is {bit_budget}")
    if m * n > 24:
        chunks = []
        step = 1 << 22
        for start in range(0, 1 << (m * n), step):
            allp = np.arange(start, start + step, dtype=np.int64)
            _, _, canon = canonical_array(allp, m, n)
            chunks.append(allp[canon == allp])
        return np.concatenate(chunks)
    allp = np.arange(1 << (m * n), dtype=np.int64)
    if m > n:
        _, _, allp = permute_array(allp, m, n, "transpose")
        allp.sort()
        m, n = n, m
    _, _, canon = canonical_array(allp, m, n)
    return allp[canon == allp]


def enumerate_up_to_symmetry(m: int, n: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> Iterator[Pattern]:
    rows, cols = min(m, n), max(m, n)
    for b in canonical_bits_of_shape(m, n, bit_budget):
        yield Pattern(rows, cols, int(b))


def count_up_to_symmetry(m: int, n: int, bit_budget: int = DEFAULT_BIT_BUDGET) -> int:
    return len(canonical_bits_of_shape(m, n, bit_budget))


def orbit_count_formula(m: int, n: int) -> int:
    """Closed form for the number of classes of m-by-n patterns, m != n."""
    if m == n:
        raise PatternError("closed form only covers rectangular shapes")
    k = m * n
    if k % 2:
        return 2 ** (k - 1) + 2 ** ((k - 1) // 2)
    return 2 ** (k - 1) + 2 ** (k // 2 - 1)
