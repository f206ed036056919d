from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from tplab.matrix import (MatrixError, PartialMatrix, bareiss_det, fekete_is_tp, is_partial_tp, is_tn, is_tp,
                          minor, specified_minors)
from tplab.poly import Poly

fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def square(n):
    return st.lists(st.lists(fractions, min_size=n, max_size=n), min_size=n, max_size=n)


@given(st.integers(1, 5).flatmap(square))
def test_bareiss_matches_sympy(m):
    want = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in m]).det()
    assert bareiss_det(m) == Fraction(int(want.p), int(want.q))


@settings(max_examples=150)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(
    st.fractions(min_value=Fraction(1, 8), max_value=8, max_denominator=8), min_size=n, max_size=n),
    min_size=n, max_size=n)))
def test_fekete_agrees_with_all_minors(m):
    assert fekete_is_tp(m) == is_tp(m)


def test_parse_and_render():
    m = PartialMatrix.parse("1,1,1,$x;1,2,4,12;1,4,11,51;1,5,15,77")
    assert m.vars == {(0, 3): "x"}
    assert m.values[(3, 3)] == 77
    assert PartialMatrix.parse(m.render()) == m
    assert PartialMatrix.parse("1/2,?;3,4").values[(0, 0)] == Fraction(1, 2)


@pytest.mark.parametrize("text", ["1,2;3", "1,a;2,3", "1,1/0;1,1"])
def test_parse_errors(text):
    with pytest.raises(MatrixError):
        PartialMatrix.parse(text)


def test_symbolic_minor():
    m = PartialMatrix.parse("$x,1;1,0")
    assert minor(m, (0, 1), (0, 1)) == Poly.const(-1)
    m = PartialMatrix.parse("1,$u;2,3")
    assert minor(m, (0, 1), (0, 1)) == Poly.const(3) - Poly.var("u") * 2


def test_partial_tp_and_tn():
    assert is_partial_tp(PartialMatrix.parse("1,1,?;1,2,1;?,1,1"))
    assert not is_partial_tp(PartialMatrix.parse("1,1;1,1"))
    assert is_tn([[1, 1], [1, 1]])
    # contiguous minors nonnegative, yet the (cols 1, 3) minor is -1: no Fekete test for TN
    g = [[1, 0, 2], [1, 0, 1]]
    contiguous = [bareiss_det([[g[r][c] for c in C] for r in R])
                  for R, C in [((0,), (j,)) for j in range(3)] + [((1,), (j,)) for j in range(3)]
                  + [((0, 1), (0, 1)), ((0, 1), (1, 2))]]
    assert min(contiguous) >= 0
    assert not is_tn(g)


def test_specified_minors_skip_unspecified():
    m = PartialMatrix.parse("1,?;1,1")
    assert [(R, C) for R, C, _ in specified_minors(m)] == [((0,), (0,)), ((1,), (0,)), ((1,), (1,))]
