from itertools import product

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tplab.pattern import (Pattern, PatternError, canonical_array, canonical_bits_of_shape,
                           count_up_to_symmetry, enumerate_up_to_symmetry, orbit_count_formula)


def patterns(max_rows=4, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.integers(0, (1 << (r * c)) - 1).map(lambda b: Pattern(r, c, b))))


def _grid_images(g):
    """Independent symmetry images on nested lists."""
    t = [list(x) for x in zip(*g)]
    rot = [row[::-1] for row in g[::-1]]
    anti = [row[::-1] for row in t[::-1]]
    return [g, t, rot, anti]


def _orbit_oracle(m, n):
    seen, orbits = set(), 0
    for cells in product((False, True), repeat=m * n):
        g = [list(cells[r * n:(r + 1) * n]) for r in range(m)]
        key = tuple(map(tuple, g))
        if key in seen:
            continue
        orbits += 1
        for h in _grid_images(g):
            seen.add(tuple(map(tuple, h)))
    return orbits


def test_parse_render_example():
    p = Pattern.parse("*?*?/**?*/?**?")
    assert p.shape == (3, 4)
    assert p.unspecified() == [(0, 1), (0, 3), (1, 2), (2, 0), (2, 3)]
    assert p.render() == "*?*?/**?*/?**?"


def test_bit_layout():
    # cell (r, c) is bit rows*cols-1-(r*cols+c); 1 means specified
    p = Pattern.parse("?*/**")
    assert p.bits == 0b0111


@pytest.mark.parametrize("text", ["", "*?/*", "*x*", "**//**"])
def test_parse_errors(text):
    with pytest.raises(PatternError):
        Pattern.parse(text)


@given(patterns())
def test_render_roundtrip(p):
    assert Pattern.parse(p.render()) == p


@given(patterns())
def test_images_match_oracle(p):
    got = {q.render() for q in p.images()}
    want = {Pattern.from_grid(h).render() for h in _grid_images(p.grid())}
    assert got == want


@given(patterns())
def test_canonical_is_orbit_invariant(p):
    c = p.canonical()
    assert c.rows <= c.cols
    assert all(q.canonical() == c for q in p.images())


@pytest.mark.parametrize("m,n", [(1, 1), (2, 2), (2, 3), (3, 3), (3, 4), (2, 5)])
def test_orbit_counts_match_oracle(m, n):
    assert count_up_to_symmetry(m, n) == _orbit_oracle(m, n)


@pytest.mark.parametrize("m,n", [(2, 3), (3, 4), (3, 5), (4, 5), (2, 7)])
def test_rectangular_formula(m, n):
    assert orbit_count_formula(m, n) == count_up_to_symmetry(m, n)


def test_enumeration_is_canonical():
    pats = list(enumerate_up_to_symmetry(3, 3))
    assert all(p.canonical() == p for p in pats)
    assert len({p.bits for p in pats}) == len(pats)


def test_canonical_array_agrees_with_scalar():
    idx = np.arange(1 << 12, dtype=np.int64)
    _, _, canon = canonical_array(idx, 3, 4)
    for b in range(0, 1 << 12, 37):
        assert Pattern(3, 4, int(canon[b])) == Pattern(3, 4, b).canonical()
    assert canonical_bits_of_shape(3, 4).size == count_up_to_symmetry(3, 4)


@given(patterns())
def test_reduced_definition(p):
    want = all(c >= 2 for c in p.row_counts()) and all(c >= 2 for c in p.col_counts())
    assert p.is_reduced() == want
