"""Three-valued completability classification.

Patterns are classified by a fixed sequence of steps: trivial, reduction
(deleting lines with at most one specified entry), base theorems, obstruction
containment through the insertion closure, 1-variable catalysis and the
completion catalog.  Whatever is left is Unknown.

Shapes with at least 3 rows and columns are swept once as a whole: every
canonical pattern of the shape gets its verdict, in order of decreasing
number of specified entries, so catalysis can consult the verdicts of the
patterns it specifies into.  Sweeps of smaller shapes are computed first and
serve as the subpattern oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .atoms import Status
from .catalog import catalog_patterns
from .catalysis import CatalysisEngine, TableOracle
from .closure import KEY, ClosureTable, transpose_array
from .obstructions import build_closure, db_seeds, load_three_row
from .pattern import OPS, Pattern, PatternError, canonical_array
from .threerow import strip_thin_lines

# shape bounds with rows <= cols: rows -> largest column count
BOUNDS = {3: 7, 4: 5}

FOUR_ROW_SHAPES = ((3, 3), (3, 4), (4, 3), (3, 5), (5, 3), (4, 4), (4, 5), (5, 4))


class OutOfBounds(PatternError):
    """Pattern shape outside what the classifier precomputes."""


class Method(str, Enum):
    TRIVIAL = "trivial"
    THEOREM = "theorem_base"
    REDUCTION = "reduction"
    CATALYSIS = "one_var_catalysis"
    CONTAINS = "contains_obstruction"
    DB = "db_obstruction"
    CATALOG = "catalog_completion"
    UNRESOLVED = "unresolved"

    def __str__(self) -> str:
        return self.value


_STATUS = (Status.UNKNOWN, Status.COMPLETABLE, Status.NONCOMPLETABLE)
_METHODS = tuple(Method)
UNKNOWN, COMPLETABLE, NONCOMPLETABLE = 0, 1, 2


@dataclass(frozen=True)
class ClassificationRecord:
    pattern: Pattern
    status: Status
    method: Method
    variability: int | None
    provenance: tuple[str, ...] = ()

    def line(self) -> str:
        var = "-" if self.variability is None else str(self.variability)
        prov = "; ".join(self.provenance) if self.provenance else "-"
        return f"{self.status} {self.method} {var} {prov}"

    def dump(self) -> str:
        var = "-" if self.variability is None else str(self.variability)
        prov = "; ".join(self.provenance) if self.provenance else "-"
        return "\t".join((self.pattern.render(), str(self.status), str(self.method), var, prov))


# ---------------------------------------------------------------------------
# base theorems


def single_entry_completable(m: int, n: int, i: int, j: int) -> bool:
    """One unspecified entry at (i, j), 1-based, in an m-by-n pattern.

    The condition is closed under the four symmetries: anti-transposition
    maps i + j to m + n + 2 - (i + j).
    """
    if not (1 <= i <= m and 1 <= j <= n):
        raise PatternError(f"position {(i, j)} outside {m}x{n}")
    return min(m, n) <= 3 or i + j <= 4 or i + j >= m + n - 2


def doubly_constrained(p: Pattern) -> bool:
    """All unspecified entries in one line holding at most 2 specified entries."""
    un = p.unspecified()
    if not un:
        return False
    rows = {r for r, _ in un}
    cols = {c for _, c in un}
    if len(rows) == 1 and p.row_counts()[next(iter(rows))] <= 2:
        return True
    return len(cols) == 1 and p.col_counts()[next(iter(cols))] <= 2


def base_theorem(p: Pattern) -> str | None:
    """Name of a base theorem proving p completable, if any."""
    if min(p.shape) == 1:
        return "1-by-n: set unspecified entries to 1"
    if min(p.shape) == 2:
        return "2-by-n patterns are completable"
    if doubly_constrained(p):
        return "doubly constrained line insertion"
    if p.n_unspecified == 1:
        (r, c), = p.unspecified()
        if single_entry_completable(p.rows, p.cols, r + 1, c + 1):
            return f"single entry at {(r + 1, c + 1)}"
    return None


def _popcount(a: np.ndarray) -> np.ndarray:
    out = np.zeros(a.shape, dtype=np.int64)
    x = a.copy()
    while x.any():
        out += x & 1
        x >>= 1
    return out


# ---------------------------------------------------------------------------
# per-shape sweep


@dataclass
class ShapeTable:
    """Verdicts for every canonical pattern of one shape (rows <= cols).

    Arrays are indexed by raw bit grid; only canonical grids carry entries,
    look other grids up through canon.  aux holds the closure key for
    non-completable verdicts, the catalysed bit for catalysis, the entry id
    for catalog verdicts.  catalyst is the catalysed bit for every pattern
    that admits 1-variable catalysis into a Completable pattern (-1 if none),
    whichever step decided it.
    """
    rows: int
    cols: int
    canon: np.ndarray
    canonical: np.ndarray
    status: np.ndarray
    method: np.ndarray
    variability: np.ndarray
    aux: np.ndarray
    catalyst: np.ndarray
    closure_key: np.ndarray
    seeded: np.ndarray

    def index(self, bits: int) -> int:
        return int(self.canon[bits])

    def completable_array(self) -> np.ndarray:
        """Boolean completability over all raw grids of the shape."""
        return self.status[self.canon] == COMPLETABLE


class Classifier:
    """Classification with lazily swept per-shape tables.

    with_db False withholds the 4x4 obstruction database, leaving only the
    3-row obstructions as closure seeds.
    """

    def __init__(self, with_db: bool = True, use_catalog: bool = True):
        self.with_db = with_db
        three = load_three_row()
        self.seeds = tuple(db_seeds(three, None if with_db else []))
        self.use_catalog = use_catalog
        self._catalog = catalog_patterns() if use_catalog else {}
        self._tables: dict[tuple[int, int], ShapeTable] = {}
        self._oracle_tables: dict[tuple[int, int], np.ndarray] = {}

    # -- closure ---------------------------------------------------------
    def closure(self, shape: tuple[int, int]) -> ClosureTable:
        r, c = min(shape), max(shape)
        if r == 3 and c > 5:
            shapes = tuple(s for k in range(3, BOUNDS[3] + 1) for s in ((3, k), (k, 3)))
        else:
            shapes = FOUR_ROW_SHAPES
        return build_closure(self.seeds, shapes)

    # -- bounds ------------------------------------------------------------
    @staticmethod
    def in_bounds(shape: tuple[int, int]) -> bool:
        r, c = min(shape), max(shape)
        return r <= 2 or c <= BOUNDS.get(r, 0)

    # -- tables ------------------------------------------------------------
    def table(self, shape: tuple[int, int]) -> ShapeTable:
        r, c = min(shape), max(shape)
        if r < 3 or not self.in_bounds((r, c)):
            raise OutOfBounds(f"no table for shape {r}x{c}")
        t = self._tables.get((r, c))
        if t is None:
            t = self._sweep(r, c)
            self._tables[(r, c)] = t
        return t

    def _oracle_array(self, h: int, w: int) -> np.ndarray:
        arr = self._oracle_tables.get((h, w))
        if arr is None:
            if h <= w:
                arr = self.table((h, w)).completable_array()
            else:
                arr = transpose_array(self._oracle_array(w, h), w, h)
            self._oracle_tables[(h, w)] = arr
        return arr

    def subpattern_oracle(self, R: int, C: int) -> TableOracle:
        """Completability of proper subpatterns of R-by-C grids (smaller shapes swept first)."""
        subs = {}
        for h in range(3, R + 1):
            for w in range(3, C + 1):
                for s in ((h, w), (w, h)):
                    if s != (R, C) and s[0] <= R and s[1] <= C:
                        subs[s] = self._oracle_array(*s)
        return TableOracle(subs)

    def _sweep(self, R: int, C: int) -> ShapeTable:
        n = R * C
        full = (1 << n) - 1
        engine = CatalysisEngine(R, C, self.subpattern_oracle(R, C))
        ct = self.closure((R, C))
        key = ct.combined((R, C))
        seeded = ct.seeded[(R, C)]

        idx = np.arange(1 << n, dtype=np.int64)
        _, _, canon = canonical_array(idx, R, C)
        cb = idx[canon == idx]
        order = cb[np.argsort(-_popcount(cb), kind="stable")]

        size = 1 << n
        status = np.zeros(size, dtype=np.int8)
        method = np.full(size, _METHODS.index(Method.UNRESOLVED), dtype=np.int8)
        var = np.full(size, -1, dtype=np.int8)
        aux = np.full(size, -1, dtype=np.int32)
        catalyst = np.full(size, -1, dtype=np.int8)
        catalog = self._catalog if (R, C) == (4, 4) else {}
        M = {m: i for i, m in enumerate(_METHODS)}

        def accept(q: int) -> bool:
            return status[canon[q]] == COMPLETABLE

        for b in order.tolist():
            if b == full:
                status[b], method[b], var[b] = COMPLETABLE, M[Method.TRIVIAL], 0
                continue
            k = int(key[b])
            if k == 0:
                u = engine.catalyst(b, accept)
                if u is not None:
                    catalyst[b] = u
            p = Pattern(R, C, b)
            red = self._reduction(p)
            if red is not None:
                status[b], method[b], var[b] = red[0], M[Method.REDUCTION], red[1]
                continue
            if base_theorem(p) is not None:
                status[b], method[b] = COMPLETABLE, M[Method.THEOREM]
                var[b] = 1 if p.n_unspecified == 1 else -1
                continue
            if k:
                status[b], var[b], aux[b] = NONCOMPLETABLE, k // KEY, k
                method[b] = M[Method.DB] if seeded[b] else M[Method.CONTAINS]
                continue
            if catalyst[b] >= 0:
                status[b], method[b], var[b], aux[b] = COMPLETABLE, M[Method.CATALYSIS], 1, catalyst[b]
                continue
            hit = catalog.get(b)
            if hit is not None:
                status[b], method[b], var[b], aux[b] = COMPLETABLE, M[Method.CATALOG], hit[1], hit[0]
        return ShapeTable(R, C, canon, cb, status, method, var, aux, catalyst, key, seeded)

    def _reduction(self, p: Pattern) -> tuple[int, int] | None:
        """(status code, variability) through the stripped pattern, None if p is reduced."""
        if p.is_reduced():
            return None
        q = strip_thin_lines(p)
        if q is None or min(q.shape) <= 2 or q.n_unspecified == 0:
            return COMPLETABLE, -1
        t = self.table(q.shape)
        b = q.bits if q.rows <= q.cols else q.transpose().bits
        i = t.index(b)
        return int(t.status[i]), int(t.variability[i])

    # -- single patterns ---------------------------------------------------
    def classify(self, p: Pattern) -> ClassificationRecord:
        if p.n_unspecified == 0:
            return ClassificationRecord(p, Status.COMPLETABLE, Method.TRIVIAL, 0)
        if not p.is_reduced():
            q = strip_thin_lines(p)
            if q is None or min(q.shape) <= 2 or q.n_unspecified == 0:
                what = "nothing" if q is None else q.render()
                return ClassificationRecord(p, Status.COMPLETABLE, Method.REDUCTION, None,
                                            (f"reduces to {what}",))
            sub = self.classify(q)
            return ClassificationRecord(p, sub.status, Method.REDUCTION, sub.variability,
                                        (f"reduces to {q.render()}", f"{sub.method}") + sub.provenance)
        thm = base_theorem(p)
        if thm is not None:
            return ClassificationRecord(p, Status.COMPLETABLE, Method.THEOREM,
                                        1 if p.n_unspecified == 1 else None, (thm,))
        if not self.in_bounds(p.shape):
            raise OutOfBounds(f"shape {p.rows}x{p.cols} beyond the classifier bounds")
        flip = p.rows > p.cols
        q = p.transpose() if flip else p
        t = self.table(q.shape)
        i = t.index(q.bits)
        st = _STATUS[int(t.status[i])]
        m = _METHODS[int(t.method[i])]
        v = int(t.variability[i])
        v = None if v < 0 else v
        a = int(t.aux[i])
        prov: tuple[str, ...] = ()
        if m in (Method.CONTAINS, Method.DB):
            seed, sv = self.closure(q.shape).seed_of(a)
            label = "is obstruction" if m == Method.DB else "contains obstruction"
            prov = (f"{label} {seed.render()} (variability {sv})",)
        elif m == Method.CATALYSIS:
            cell = self._cell_in(p, q, i, a)
            prov = (f"entry {cell} completable, then {self.classify(p.specify(*cell)).method}",)
        elif m == Method.CATALOG:
            prov = (f"catalog entry {a}",)
        elif m == Method.UNRESOLVED:
            prov = ("no step applies",)
        return ClassificationRecord(p, st, m, v, prov)

    def _cell_in(self, p: Pattern, q: Pattern, canon_bits: int, u: int) -> tuple[int, int]:
        """Cell of p that maps to bit u of its canonical representative."""
        target = divmod(q.rows * q.cols - 1 - u, q.cols)

        def image(x: Pattern, op: str) -> Pattern:
            y = x.image(op)
            return y.transpose() if y.shape != q.shape else y

        op = next(o for o in OPS if image(q, o).bits == canon_bits)
        for r, c in q.unspecified():
            marker = Pattern.full(q.rows, q.cols).unspecify(r, c)
            if image(marker, op).unspecified() == [target]:
                return (c, r) if p.rows > p.cols else (r, c)
        raise AssertionError("catalysed cell not found")

    def status(self, p: Pattern) -> Status:
        return self.classify(p).status


_default: dict[bool, Classifier] = {}


def default_classifier(with_db: bool = True) -> Classifier:
    c = _default.get(with_db)
    if c is None:
        c = _default[with_db] = Classifier(with_db=with_db)
    return c


def classify(p: Pattern) -> ClassificationRecord:
    return default_classifier().classify(p)
