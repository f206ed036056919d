"""Shared generators for exact random test data."""

import random
from fractions import Fraction

from tplab.matrix import PartialMatrix


def _mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def random_tp(n: int, rng: random.Random) -> list[list[Fraction]]:
    """Square TP matrix from a full product of positive elementary bidiagonal factors."""
    def rnd():
        return Fraction(rng.randint(1, 9), rng.randint(1, 4))

    m = [[Fraction(int(i == j)) * rnd() for j in range(n)] for i in range(n)]
    for lower in (True, False):
        for k in range(n - 1):
            for i in range(n - 1, k, -1):
                e = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
                if lower:
                    e[i][i - 1] = rnd()
                else:
                    e[i - 1][i] = rnd()
                m = _mul(m, e) if lower else _mul(e, m)
    return m


def partial_from(full, pattern) -> PartialMatrix:
    values = {(r, c): full[r][c] for r in range(pattern.rows) for c in range(pattern.cols)
              if pattern.is_specified(r, c)}
    return PartialMatrix(pattern.rows, pattern.cols, values)


def random_pattern(rows: int, cols: int, rng: random.Random, p_missing: float = 0.3):
    from tplab.pattern import Pattern
    return Pattern.from_grid([[rng.random() >= p_missing for _ in range(cols)] for _ in range(rows)])
