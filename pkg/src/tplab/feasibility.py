"""Exact feasibility of small polynomial inequality systems.

Strict systems (every constraint p > 0) are decided by Fourier-Motzkin
elimination with polynomial bound coefficients: the sign of each coefficient
of the eliminated variable is case split, and lower/upper bound pairs are
crossed.  Because a strict system has an open solution set, branches where a
coefficient vanishes can be skipped.  A single remaining variable of any degree
is handled by exact root isolation.  Non-strict systems (p >= 0) try a few
candidate points and otherwise only run elimination when every constraint is
linear with constant coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

import sympy

from .poly import Poly, parse_poly


class Verdict(str, Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    UNKNOWN = "Unknown"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Constraint:
    """poly > 0 when strict, poly >= 0 otherwise."""
    poly: Poly
    strict: bool = True

    def holds(self, values) -> bool:
        v = self.poly.evaluate(values)
        return v > 0 if self.strict else v >= 0

    def __str__(self) -> str:
        return f"{self.poly} {'>' if self.strict else '>='} 0"


@dataclass
class InequalitySystem:
    constraints: list[Constraint]
    vars: list[str] = field(default_factory=list)

    def __post_init__(self):
        seen = set(self.vars)
        for c in self.constraints:
            for v in sorted(c.poly.variables()):
                if v not in seen:
                    self.vars.append(v)
                    seen.add(v)

    @classmethod
    def parse(cls, lines: Sequence[str] | str, strict: bool | None = None) -> "InequalitySystem":
        if isinstance(lines, str):
            lines = [ln for ln in re.split(r"[\n;]", lines) if ln.strip()]
        out = [parse_constraint(ln, strict) for ln in lines]
        return cls(out)

    def is_strict(self) -> bool:
        return all(c.strict for c in self.constraints)

    def relaxed(self) -> "InequalitySystem":
        """Same polynomials with weak relations."""
        return InequalitySystem([Constraint(c.poly, False) for c in self.constraints], list(self.vars))

    def subsystem(self, keep: Sequence[int]) -> "InequalitySystem":
        return InequalitySystem([self.constraints[i] for i in keep], list(self.vars))

    def satisfied_by(self, values) -> bool:
        return all(c.holds(values) for c in self.constraints)

    def render(self) -> str:
        return "\n".join(str(c) for c in self.constraints)


_REL = re.compile(r"(<=|>=|<|>)")


def parse_constraint(text: str, strict: bool | None = None) -> Constraint:
    """Parse 'lhs REL rhs' into a normalised constraint."""
    parts = _REL.split(text.strip())
    if len(parts) != 3:
        raise ValueError(f"expected exactly one relation in {text!r}")
    lhs, rel, rhs = parse_poly(parts[0]), parts[1], parse_poly(parts[2])
    p = lhs - rhs if rel in (">", ">=") else rhs - lhs
    is_strict = rel in ("<", ">") if strict is None else strict
    return Constraint(p, is_strict)


@dataclass
class FeasibilityResult:
    status: Verdict
    witness: dict[str, Fraction] | None = None
    certificate: list[str] | None = None
    reason: str = ""

    def __bool__(self):
        return self.status == Verdict.FEASIBLE


class _Budget(Exception):
    pass


class _Nonlinear(Exception):
    pass


def _key(p: Poly):
    return frozenset(p.primitive().terms.items())


class _Solver:
    def __init__(self, budget: int, strict: bool):
        self.budget = budget
        self.leaves = 0
        self.strict = strict
        self.trace: list[str] = []

    def solve(self, cons: list[Poly], depth: int = 0):
        """Return a witness dict or None.  cons are polys required > 0 (or >= 0)."""
        live = []
        seen = set()
        for p in cons:
            if p.is_const():
                v = p.const_value()
                if v > 0 or (v == 0 and not self.strict):
                    continue
                self._leaf(f"{'  ' * depth}contradiction: {v} {'>' if self.strict else '>='} 0 fails")
                return None
            k = _key(p)
            if k in seen:
                continue
            seen.add(k)
            live.append(p.primitive())
        if not live:
            self._leaf(f"{'  ' * depth}consistent")
            return {}
        variables = set().union(*(p.variables() for p in live))
        if len(variables) == 1:
            return self._univariate(live, variables.pop(), depth)
        v = self._pick(live, variables)
        if v is None:
            raise _Nonlinear("no variable is linear in all of its constraints")
        return self._eliminate(live, v, depth)

    def _leaf(self, msg: str):
        self.leaves += 1
        self.trace.append(msg)
        if self.leaves > self.budget:
            raise _Budget()

    def _pick(self, live, variables):
        best, score = None, None
        for v in sorted(variables):
            degs = [p.degree_in(v) for p in live]
            if max(degs) > 1:
                continue
            nonconst = sum(1 for p in live if p.degree_in(v) == 1
                           and not p.coeffs_in(v)[1].is_const())
            s = (nonconst, -sum(degs), v)
            if score is None or s < score:
                best, score = v, s
        return best

    def _eliminate(self, live, v, depth):
        lin = [p for p in live if p.degree_in(v) == 1]
        rest = [p for p in live if p.degree_in(v) == 0]
        known = {_key(p) for p in live}
        pairs = []
        for p in lin:
            cs = p.coeffs_in(v)
            pairs.append((cs[1], cs.get(0, Poly())))
        # sign patterns of the coefficients
        options = []
        for a, _ in pairs:
            if a.is_const():
                options.append([(a.const_value() > 0, [])])
            elif _key(a) in known:
                options.append([(True, [])])
            elif _key(-a) in known:
                options.append([(False, [])])
            else:
                if not self.strict:
                    raise _Nonlinear("weak system with symbolic coefficient")
                options.append([(True, [a]), (False, [-a])])
        return self._branch(pairs, options, 0, [], [], rest, v, depth)

    def _branch(self, pairs, options, i, signs, extra, rest, v, depth):
        if i < len(pairs):
            for positive, cond in options[i]:
                w = self._branch(pairs, options, i + 1, signs + [positive], extra + cond, rest, v, depth)
                if w is not None:
                    return w
            return None
        lower = [(a, b) for (a, b), s in zip(pairs, signs) if s]
        upper = [(a, b) for (a, b), s in zip(pairs, signs) if not s]
        derived = [bj * ai - bi * aj for ai, bi in lower for aj, bj in upper]
        desc = ", ".join(("+" if s else "-") for s in signs)
        self.trace.append(f"{'  ' * depth}eliminate {v} with coefficient signs [{desc}]")
        w = self.solve(rest + extra + derived, depth + 1)
        if w is None:
            return None
        # variables absent from the reduced system are unconstrained
        w = dict(w)
        for a, b in lower + upper:
            for name in (a.variables() | b.variables()) - set(w):
                w[name] = Fraction(0)
        lo = [-b.evaluate(w) / a.evaluate(w) for a, b in lower]
        hi = [-b.evaluate(w) / a.evaluate(w) for a, b in upper]
        w = dict(w)
        w[v] = _pick_between(max(lo) if lo else None, min(hi) if hi else None, self.strict)
        return w

    def _univariate(self, live, v, depth):
        x = sympy.Symbol(v)
        polys = [_to_sympy(p, {v: x}) for p in live]
        prod = sympy.Integer(1)
        for p in polys:
            prod *= p
        bounds = _separated_roots(sympy.Poly(sympy.expand(prod), x))
        points = []
        if not bounds:
            points = [Fraction(0)]
        else:
            points.append(bounds[0][0] - 1)
            for (a0, b0), (a1, b1) in zip(bounds, bounds[1:]):
                points.append((b0 + a1) / 2)
            points.append(bounds[-1][1] + 1)
            if not self.strict:
                points.extend(a for a, b in bounds if a == b)
                points.extend(_rational_roots(prod, x))
        for pt in points:
            if all((p.evaluate({v: pt}) > 0) if self.strict else (p.evaluate({v: pt}) >= 0) for p in live):
                self._leaf(f"{'  ' * depth}{v} = {pt} satisfies the univariate system")
                return {v: pt}
        if not self.strict and _has_irrational_root(prod, x):
            raise _Nonlinear("weak univariate system may need an irrational point")
        self._leaf(f"{'  ' * depth}univariate system in {v} has no solution between its roots")
        return None


def _rational_roots(expr, x) -> list[Fraction]:
    out = []
    for f, _ in sympy.factor_list(expr, x)[1]:
        fp = sympy.Poly(f, x)
        if fp.degree() == 1:
            a, b = fp.all_coeffs()
            r = -sympy.Rational(b) / sympy.Rational(a)
            out.append(Fraction(int(r.p), int(r.q)))
    return out


def _has_irrational_root(expr, x) -> bool:
    return any(sympy.Poly(f, x).degree() > 1 and sympy.Poly(f, x).count_roots() > 0
               for f, _ in sympy.factor_list(expr, x)[1])


def _separated_roots(sp) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals of the real roots, refined until strictly ordered."""
    if sp.degree() <= 0:
        return []
    sq = sp.sqf_part()
    eps = Fraction(1, 4)
    while True:
        ivs = sq.intervals(eps=sympy.Rational(eps.numerator, eps.denominator))
        bounds = sorted((Fraction(str(a)), Fraction(str(b))) for (a, b), _ in ivs)
        if all(b0 < a1 for (_, b0), (a1, _) in zip(bounds, bounds[1:])):
            return bounds
        eps /= 16


def _pick_between(lo, hi, strict):
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def _to_sympy(p: Poly, syms):
    out = sympy.Integer(0)
    for m, c in p.terms.items():
        t = sympy.Rational(c.numerator, c.denominator)
        for v, e in m:
            t *= syms[v] ** e
        out += t
    return out


def default_budget(nvars: int) -> int:
    return max(4 ** nvars, 4) * 16


def decide(system: InequalitySystem, budget: int | None = None) -> FeasibilityResult:
    """Decide the system exactly, or report Unknown."""
    if len(system.vars) > 4:
        return FeasibilityResult(Verdict.UNKNOWN, reason="more than 4 variables")
    if any(c.strict != system.constraints[0].strict for c in system.constraints):
        return FeasibilityResult(Verdict.UNKNOWN, reason="mixed strict and weak relations")
    strict = system.is_strict()
    if not strict:
        # weak systems: cheap candidate points first
        for cand in _weak_candidates(system.vars):
            if system.satisfied_by(cand):
                return FeasibilityResult(Verdict.FEASIBLE, dict(cand), ["candidate point"])
    budget = default_budget(len(system.vars)) if budget is None else budget
    solver = _Solver(budget, strict)
    try:
        w = solver.solve([c.poly for c in system.constraints])
    except _Budget:
        return FeasibilityResult(Verdict.UNKNOWN, reason="case-split budget exceeded")
    except _Nonlinear as e:
        return FeasibilityResult(Verdict.UNKNOWN, reason=str(e))
    if w is None:
        return FeasibilityResult(Verdict.INFEASIBLE, certificate=solver.trace)
    w = {v: w.get(v, Fraction(0)) for v in system.vars}
    if not system.satisfied_by(w):  # defensive: never report an unchecked witness
        return FeasibilityResult(Verdict.UNKNOWN, reason="witness failed verification")
    return FeasibilityResult(Verdict.FEASIBLE, w, solver.trace)


def _weak_candidates(names):
    yield {v: Fraction(0) for v in names}
    yield {v: Fraction(1) for v in names}


def is_minimal_inhibiting(system: InequalitySystem, budget: int | None = None,
                         background: Sequence[Constraint] = ()) -> Verdict | bool:
    """True iff the system is infeasible and each one-constraint-dropped subsystem is feasible.

    background constraints are always present and never dropped.  Returns
    Verdict.UNKNOWN when any sub-decision is undecided.
    """
    bg = list(background)
    whole = decide(InequalitySystem(list(system.constraints) + bg, list(system.vars)), budget)
    if whole.status == Verdict.UNKNOWN:
        return Verdict.UNKNOWN
    if whole.status == Verdict.FEASIBLE:
        return False
    n = len(system.constraints)
    for i in range(n):
        sub = [system.constraints[j] for j in range(n) if j != i] + bg
        r = decide(InequalitySystem(sub, list(system.vars)), budget)
        if r.status == Verdict.UNKNOWN:
            return Verdict.UNKNOWN
        if r.status == Verdict.INFEASIBLE:
            return False
    return True


def positivity(names: Sequence[str], strict: bool = True) -> list[Constraint]:
    """Entry positivity (the 1x1 atoms) for each variable."""
    return [Constraint(Poly.var(v), strict) for v in names]
