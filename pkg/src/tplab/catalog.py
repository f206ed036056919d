"""Hand-verified completions of the 4x4 patterns automation cannot settle.

Each catalog entry gives general partial TP data for a pattern (entries are
expressions in positive parameters a, b, c, ...), the cells completed by
catalysis (x, y, z) and closed-form values for them depending on a small
eps > 0.  Verification is by exact sampling: instantiate, substitute eps =
1/2^k for k = 1..64 until the partial matrix is partial TP, then check that the
residual pattern is completable.
"""

from __future__ import annotations

import ast
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Callable, Mapping

from .atoms import Status
from .matrix import PartialMatrix, is_partial_tp, specified_minors
from .pattern import Pattern

CATALOG_FILE = "catalog_4x4.json"
COMPLETION_VARS = ("x", "y", "z")
MAX_EPS_EXPONENT = 64


class CatalogError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact expression evaluation over Fractions


@lru_cache(maxsize=None)
def _parse(expr: str) -> ast.Expression:
    return ast.parse(expr.strip(), mode="eval")


def _ev(node, env):
    if isinstance(node, ast.Expression):
        return _ev(node.body, env)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool):
            return node.value
        if isinstance(node.value, (int, float)):
            return Fraction(str(node.value))
        raise CatalogError(f"bad constant {node.value!r}")
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise CatalogError(f"unbound name {node.id}")
        return env[node.id]
    if isinstance(node, ast.UnaryOp):
        v = _ev(node.operand, env)
        if isinstance(node.op, ast.USub):
            return -v
        if isinstance(node.op, ast.UAdd):
            return v
    if isinstance(node, ast.BinOp):
        a, b = _ev(node.left, env), _ev(node.right, env)
        op = node.op
        if isinstance(op, ast.Add):
            return a + b
        if isinstance(op, ast.Sub):
            return a - b
        if isinstance(op, ast.Mult):
            return a * b
        if isinstance(op, ast.Div):
            return a / b
        if isinstance(op, ast.Pow) and b.denominator == 1:
            return a ** int(b)
    if isinstance(node, ast.Compare) and len(node.ops) == 1:
        a, b = _ev(node.left, env), _ev(node.comparators[0], env)
        op = node.ops[0]
        table = {ast.Lt: a < b, ast.LtE: a <= b, ast.Gt: a > b, ast.GtE: a >= b, ast.Eq: a == b}
        for k, v in table.items():
            if isinstance(op, k):
                return v
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        name = node.func.id
        if name in ("Max", "Min"):
            vals = [_ev(a, env) for a in node.args]
            return max(vals) if name == "Max" else min(vals)
        if name == "Piecewise":
            for arm in node.args:
                if not isinstance(arm, ast.Tuple) or len(arm.elts) != 2:
                    raise CatalogError("Piecewise arms must be (value, condition)")
                if _ev(arm.elts[1], env):
                    return _ev(arm.elts[0], env)
            raise CatalogError("no Piecewise arm applies")
    raise CatalogError(f"unsupported expression {ast.dump(node)}")


def evaluate(expr: str, env: Mapping[str, Fraction]):
    return _ev(_parse(expr), env)


# ---------------------------------------------------------------------------
# entries


@dataclass(frozen=True)
class CatalogEntry:
    id: int
    variability: int
    params: tuple[str, ...]
    data: tuple[tuple[str, ...], ...]
    completion: Mapping[str, str]
    branches: Mapping[str, str] = field(default_factory=dict)
    erratum: Mapping[str, str] = field(default_factory=dict)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.data), len(self.data[0])

    def completion_cells(self) -> dict[str, tuple[int, int]]:
        return {e: (r, c) for r, row in enumerate(self.data) for c, e in enumerate(row)
                if e in COMPLETION_VARS}

    @property
    def pattern(self) -> Pattern:
        return Pattern.from_grid([[e != "?" and e not in COMPLETION_VARS for e in row]
                                  for row in self.data])

    def residual_pattern(self) -> Pattern:
        """Pattern left after the completion cells are specified."""
        return Pattern.from_grid([[e != "?" for e in row] for row in self.data])

    def branch(self, params: Mapping[str, Fraction]) -> dict[str, bool]:
        env = {k: Fraction(v) for k, v in params.items()}
        return {k: bool(evaluate(cond, env)) for k, cond in self.branches.items()}


def load_catalog(path: Path | None = None) -> list[CatalogEntry]:
    from .obstructions import db_dir
    path = path or db_dir() / CATALOG_FILE
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    return [CatalogEntry(int(e["id"]), int(e["variability"]), tuple(e["params"]),
                         tuple(tuple(r) for r in e["data"]), dict(e["completion"]),
                         dict(e.get("branches", {})), dict(e.get("erratum", {})))
            for e in raw["entries"]]


def _check_params(entry: CatalogEntry, params: Mapping[str, Fraction]) -> dict[str, Fraction]:
    missing = set(entry.params) - set(params)
    if missing:
        raise CatalogError(f"entry {entry.id} needs parameters {sorted(missing)}")
    env = {k: Fraction(params[k]) for k in entry.params}
    bad = [k for k, v in env.items() if v <= 0]
    if bad:
        raise CatalogError(f"parameters must be positive: {bad}")
    return env


def instantiate(entry: CatalogEntry, params: Mapping[str, Fraction]) -> PartialMatrix:
    """General data at the given parameters; completion cells become named variables."""
    env = _check_params(entry, params)
    values, names = {}, {}
    for r, row in enumerate(entry.data):
        for c, e in enumerate(row):
            if e == "?":
                continue
            if e in COMPLETION_VARS:
                names[(r, c)] = e
            else:
                values[(r, c)] = Fraction(evaluate(e, env))
    rows, cols = entry.shape
    return PartialMatrix(rows, cols, values, names)


def completion_values(entry: CatalogEntry, params: Mapping[str, Fraction],
                      eps: Fraction, erratum: bool = False) -> dict[str, Fraction]:
    env = _check_params(entry, params)
    env["eps"] = Fraction(eps)
    formulas = entry.erratum if erratum and entry.erratum else entry.completion
    return {k: Fraction(evaluate(v, env)) for k, v in formulas.items()}


@dataclass
class CompletionResult:
    entry: int
    eps: Fraction | None
    values: dict[str, Fraction]
    data_partial_tp: bool
    tp: bool
    residual_completable: bool | None

    @property
    def ok(self) -> bool:
        return self.data_partial_tp and self.tp and self.residual_completable is not False


def complete_and_verify(entry: CatalogEntry, params: Mapping[str, Fraction], eps_search: bool = True,
                        classify: Callable[[Pattern], Status] | None = None,
                        erratum: bool = False) -> CompletionResult:
    """Search eps = 1/2^k until the completed matrix is partial TP.

    With eps_search False only eps = 1/2 is tried.  erratum selects the
    replacement formulas when the entry has them.  The residual pattern (only
    '?' cells left) is checked with classify when it still has unspecified
    entries; without a classifier that check is reported as None.
    """
    data = instantiate(entry, params)
    data_ok = is_partial_tp(data)
    residual = entry.residual_pattern()
    if residual.n_unspecified == 0:
        res_ok: bool | None = True
    elif classify is None:
        res_ok = None
    else:
        res_ok = classify(residual) == Status.COMPLETABLE
    last: dict[str, Fraction] = {}
    for k in range(1, (MAX_EPS_EXPONENT if eps_search else 1) + 1):
        eps = Fraction(1, 2 ** k)
        vals = completion_values(entry, params, eps, erratum)
        last = vals
        if any(v <= 0 for v in vals.values()):
            continue
        done = data.with_values(vals)
        if is_partial_tp(done):
            return CompletionResult(entry.id, eps, vals, data_ok, True, res_ok)
    return CompletionResult(entry.id, None, last, data_ok, False, res_ok)


def failing_minors(m: PartialMatrix) -> list[tuple]:
    return [(R, C, d) for R, C, d in specified_minors(m) if d <= 0]


def random_params(entry: CatalogEntry, rng: random.Random, high: int = 10,
                  max_den: int = 16) -> dict[str, Fraction]:
    """Positive rationals in (0, high] with denominators up to max_den."""
    out = {}
    for name in entry.params:
        den = rng.randint(1, max_den)
        out[name] = Fraction(rng.randint(1, high * den), den)
    return out


def extract_entry2_params(m: PartialMatrix) -> dict[str, Fraction]:
    """Recover (a, b, c, d, e) from data on entry 2's pattern.

    Rows and columns are rescaled so entries (1,1), (1,2), (1,4), (2,2),
    (2,3), (3,1), (4,1) become 1 (1-based), after which the parameters are
    read off the remaining entries.
    """
    v = {k: Fraction(x) for k, x in m.values.items()}
    c0, c1, c3 = 1 / v[(0, 0)], 1 / v[(0, 1)], 1 / v[(0, 3)]
    r1 = 1 / (c1 * v[(1, 1)])
    c2 = 1 / (r1 * v[(1, 2)])
    r2 = 1 / (c0 * v[(2, 0)])
    r3 = 1 / (c0 * v[(3, 0)])
    a = r1 * c3 * v[(1, 3)] - 1
    b = r2 * c1 * v[(2, 1)] - 1
    c = r2 * c2 * v[(2, 2)] - 1 - b
    d = r3 * c2 * v[(3, 2)] - 1 - b - c
    e = r3 * c3 * v[(3, 3)] - (1 + a) * (1 + b + c + d)
    return {"a": a, "b": b, "c": c, "d": d, "e": e}


def catalog_patterns(entries=None) -> dict[int, tuple[int, int]]:
    """Canonical bits -> (entry id, variability) for the catalog patterns."""
    entries = load_catalog() if entries is None else entries
    return {e.pattern.canonical().bits: (e.id, e.variability) for e in entries}
