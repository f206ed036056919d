"""Independent 3-row decision procedure working on column strings.

After lines with at most one specified entry are deleted, every column of a
3-row pattern is either fully specified ("0") or has a single unspecified entry
in row k ("1", "2", "3" for top, middle, bottom).  Rotation by 180 degrees
reverses the string and swaps 1 and 3.

The procedure rewrites the string with completability-preserving reductions,
then decides by containment: a string contains t when t is left after deleting
columns that are always good (any column with one unspecified entry, or a
fully specified column at the current border).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .atoms import Status
from .pattern import Pattern

OBSTRUCTIONS = ("210", "213", "230", "231", "2112", "3100", "3200", "0130",
                "31021", "31031", "32021", "31130", "311331")
OBSTRUCTION_VARIABILITY = dict(zip(OBSTRUCTIONS, (1, 1, 1, 1, 2, 1, 1, 1, 2, 2, 2, 2, 3)))

CATALYSTS = ("120", "320", "1200", "1300", "0310", "1223", "3221", "1221221", "13313310",
             "133133113113", "12021", "12023", "13021", "12031013", "12031023", "13031013",
             "1331331013", "1331331023")

_SWAP = str.maketrans("13", "31")


def rotate(s: str) -> str:
    return s[::-1].translate(_SWAP)


def images(s: str) -> set[str]:
    return {s, rotate(s)}


def pattern_to_string(p: Pattern) -> str:
    """Column string of a 3-row pattern whose columns all have >= 2 specified entries."""
    if p.rows != 3:
        raise ValueError("3-row pattern required")
    out = []
    for c in range(p.cols):
        miss = [r for r in range(3) if not p.is_specified(r, c)]
        if len(miss) > 1:
            raise ValueError(f"column {c} has fewer than 2 specified entries")
        out.append("0" if not miss else str(miss[0] + 1))
    return "".join(out)


def string_to_pattern(s: str) -> Pattern:
    grid = [[ch == "0" or int(ch) != r + 1 for ch in s] for r in range(3)]
    return Pattern.from_grid(grid)


def contains(s: str, t: str) -> bool:
    """t is left from s by deleting b columns anywhere and 0 columns at the ends."""
    n, m = len(s), len(t)
    if m > n:
        return False
    for start in range(n):
        if s[start] != t[0]:
            continue
        # greedy match: interior zeros of s must all be matched
        j, i = 1, start + 1
        ok = True
        while j < m and i < n:
            if s[i] == t[j]:
                i += 1
                j += 1
            elif s[i] == "0":
                ok = False
                break
            else:
                i += 1
        if ok and j == m:
            return True
    return False


def _contains_any(s: str, pool) -> str | None:
    for t in pool:
        for img in images(t):
            if contains(s, img):
                return t
    return None


def _reduce_once(s: str) -> str | None:
    n = len(s)
    for i in range(n - 2):  # bbb -> bb
        if s[i] != "0" and s[i] == s[i + 1] == s[i + 2]:
            return s[:i] + s[i + 1:]
    for i in range(n - 2):  # 0bb -> 0b, bb0 -> b0
        a, b, c = s[i:i + 3]
        if a == "0" and b != "0" and b == c:
            return s[:i + 1] + s[i + 2:]
        if c == "0" and a != "0" and a == b:
            return s[:i] + s[i + 1:]
    for i in range(n - 2):  # 0b0 -> 00
        if s[i] == "0" and s[i + 1] != "0" and s[i + 2] == "0":
            return s[:i + 1] + s[i + 2:]
    if n >= 2:
        if s[0] != "0" and s[1] == "0":  # leading b0 -> 0
            return s[1:]
        if s[-1] != "0" and s[-2] == "0":  # trailing 0b -> 0
            return s[:-1]
        if s[0] != "0" and s[0] == s[1]:  # leading bb -> b
            return s[1:]
        if s[-1] != "0" and s[-1] == s[-2]:
            return s[:-1]
    return None


def reduce_string(s: str) -> str:
    while True:
        t = _reduce_once(s)
        if t is None:
            return s
        s = t


@dataclass(frozen=True)
class StringVerdict:
    status: Status
    reason: str


@lru_cache(maxsize=None)
def decide_string(s: str) -> StringVerdict:
    if len(s) <= 2:
        return StringVerdict(Status.COMPLETABLE, "at most 2 columns")
    if set(s) == {"0"}:
        return StringVerdict(Status.COMPLETABLE, "fully specified")
    r = reduce_string(s)
    if r != s:
        v = decide_string(r)
        return StringVerdict(v.status, f"{s} -> {r}; {v.reason}")
    hit = _contains_any(s, OBSTRUCTIONS)
    if hit is not None:
        return StringVerdict(Status.NONCOMPLETABLE, f"contains obstruction {hit}")
    for cat in CATALYSTS:
        for img in images(cat):
            if contains(img, s):
                return StringVerdict(Status.COMPLETABLE, f"reduct of catalyst {cat}")
    # split at an interior 00
    for i in range(1, len(s) - 2):
        if s[i] == "0" and s[i + 1] == "0":
            left, right = s[:i + 2], s[i:]
            a, b = decide_string(left), decide_string(right)
            if Status.NONCOMPLETABLE in (a.status, b.status):
                bad = left if a.status == Status.NONCOMPLETABLE else right
                return StringVerdict(Status.NONCOMPLETABLE, f"split at 00, {bad} not completable")
            if a.status == b.status == Status.COMPLETABLE:
                return StringVerdict(Status.COMPLETABLE, f"split at 00 into {left}, {right}")
    # one-directional split at a 0 whose left part has no 0 (and the rotated form)
    for t, label in ((s, ""), (rotate(s), " (rotated)")):
        i = t.find("0")
        if 0 < i < len(t) - 1:
            left, right = t[:i] + "00", t[i:]
            if (decide_string(left).status == Status.COMPLETABLE
                    and decide_string(right).status == Status.COMPLETABLE):
                return StringVerdict(Status.COMPLETABLE, f"split{label} at first 0 into {left}, {right}")
    return StringVerdict(Status.UNKNOWN, f"no rule applies to {s}")


def strip_thin_lines(p: Pattern) -> Pattern | None:
    """Delete lines with at most one specified entry until none remain (None if empty)."""
    g = p.grid()
    while g and g[0]:
        rows = [row for row in g if sum(row) >= 2]
        if not rows:
            return None
        keep = [j for j in range(len(rows[0])) if sum(row[j] for row in rows) >= 2]
        if not keep:
            return None
        if len(rows) == len(g) and len(keep) == len(g[0]):
            return Pattern.from_grid(g)
        g = [[row[j] for j in keep] for row in rows]
    return None


def classify_3byn_by_reductions(p: Pattern) -> StringVerdict:
    if p.rows != 3:
        raise ValueError("3-row pattern required")
    q = strip_thin_lines(p)
    if q is None or q.rows < 3 or q.cols < 3:
        return StringVerdict(Status.COMPLETABLE, "reduces to at most 2 lines")
    s = pattern_to_string(q)
    v = decide_string(s)
    return StringVerdict(v.status, f"string {s}: {v.reason}")
