"""Sparse polynomials with exact rational coefficients.

A monomial is a sorted tuple of (variable, exponent) pairs; the empty tuple is
the constant monomial.  Determinants of partial matrices are multilinear, but
elimination products can raise degrees, so general exponents are allowed.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping

Monomial = tuple  # tuple[tuple[str, int], ...]


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = Fraction(c)

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): Fraction(1)})

    @classmethod
    def coerce(cls, x) -> "Poly":
        if isinstance(x, Poly):
            return x
        return cls.const(x)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other) -> "Poly":
        other = Poly.coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-Poly.coerce(other))

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        other = Poly.coerce(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "Poly":
        c = Fraction(c)
        return Poly({m: v / c for m, v in self.terms.items()})

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            try:
                other = Poly.coerce(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return all(m == () for m in self.terms)

    def const_value(self) -> Fraction:
        if not self.is_const():
            raise ValueError(f"{self} is not constant")
        return self.terms.get((), Fraction(0))

    def variables(self) -> set[str]:
        return {v for m in self.terms for v, _ in m}

    def degree_in(self, v: str) -> int:
        return max((dict(m).get(v, 0) for m in self.terms), default=0)

    def is_multilinear(self) -> bool:
        return all(e <= 1 for m in self.terms for _, e in m)

    def coeffs_in(self, v: str) -> dict[int, "Poly"]:
        """Split as sum of coeff_k * v**k."""
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            d = dict(m)
            k = d.pop(v, 0)
            out.setdefault(k, {})[tuple(sorted(d.items()))] = c
        return {k: Poly(t) for k, t in out.items()}

    def subs(self, values: Mapping[str, object]) -> "Poly":
        out = Poly()
        for m, c in self.terms.items():
            term = Poly.const(c)
            rest = []
            for v, e in m:
                if v in values:
                    term = term * (Poly.coerce(values[v]) ** e)
                else:
                    rest.append((v, e))
            out = out + term * Poly({tuple(rest): 1})
        return out

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        return self.subs(values).const_value()

    def primitive(self) -> "Poly":
        """Scale by a positive rational so coefficients are coprime integers."""
        if not self.terms:
            return self
        den = lcm(*(c.denominator for c in self.terms.values()))
        nums = [int(c * den) for c in self.terms.values()]
        g = 0
        for n in nums:
            g = gcd(g, n)
        return self * Fraction(den, g)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (-sum(e for _, e in m), m)):
            c = self.terms[m]
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                s = str(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", s))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, s in parts[1:]:
            out += f" {sign} {s}"
        return out


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at {pos}")
        out.append(m.group(m.lastindex))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def expr(self) -> Poly:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        out = self.term() * sign
        while self.peek() in ("+", "-"):
            op = self.take()
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self) -> Poly:
        out = self.power()
        while True:
            t = self.peek()
            if t == "*":
                self.take()
                out = out * self.power()
            elif t == "/":
                self.take()
                d = self.power()
                if not d.is_const() or d.const_value() == 0:
                    raise ValueError("division only by nonzero constants")
                out = out / d.const_value()
            elif t is not None and (t == "(" or t[0].isalpha() or t[0] == "_"):
                out = out * self.power()  # implicit product like 5xy is not allowed; "2(x)" is
            else:
                return out

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() in ("^", "**"):
            self.take()
            e = self.atom()
            base = base ** int(e.const_value())
        return base

    def atom(self) -> Poly:
        t = self.take()
        if t is None:
            raise ValueError("unexpected end of expression")
        if t == "(":
            out = self.expr()
            if self.take() != ")":
                raise ValueError("unbalanced parentheses")
            return out
        if t == "-":
            return -self.atom()
        if t[0].isdigit() or t[0] == ".":
            return Poly.const(Fraction(t))
        if t[0].isalpha() or t[0] == "_":
            return Poly.var(t)
        raise ValueError(f"unexpected token {t!r}")


def parse_poly(text: str) -> Poly:
    p = _Parser(_tokenize(text))
    out = p.expr()
    if p.peek() is not None:
        raise ValueError(f"trailing input in {text!r}")
    return out
