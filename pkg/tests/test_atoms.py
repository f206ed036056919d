import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from helpers import partial_from, random_pattern, random_tp
from tplab.atoms import (catalysis_cells, derived_submatrices, enumerate_u_atoms, one_var_atoms,
                         one_var_catalysis, subset_completable)
from tplab.feasibility import Verdict
from tplab.matrix import PartialMatrix, is_partial_tp, is_tp, minor, square_index_sets
from tplab.pattern import Pattern

INHIBITOR_TABLE_PATTERN = Pattern.parse("***?/****/****/?*?*").unspecify(1, 1)


def _atoms_oracle(p: Pattern, u: set) -> set:
    """Squares confined to U that equal their own column- and row-derived submatrices."""
    def bad(r, c):
        return not p.is_specified(r, c) and (r, c) not in u

    out = set()
    for k in range(1, min(p.shape) + 1):
        for R in combinations(range(p.rows), k):
            for C in combinations(range(p.cols), k):
                cells = [(r, c) for r in R for c in C]
                if any(bad(*x) for x in cells) or not any(x in u for x in cells):
                    continue
                col_span = [c for c in range(C[0], C[-1] + 1) if all(not bad(r, c) for r in R)]
                row_span = [r for r in range(R[0], R[-1] + 1) if all(not bad(r, c) for c in C)]
                if col_span == list(C) and row_span == list(R):
                    out.add((R, C))
    return out


def test_derived_submatrices_small():
    p = Pattern.parse("*?*/?**/***")
    u = {(0, 1)}
    col_d, row_d = derived_submatrices(p, u, (0, 2), (0, 1))
    assert col_d == ((0, 2), (0, 1))
    assert row_d == ((0, 2), (0, 1))  # row 2 is excluded by its unspecified (2,1) entry
    assert derived_submatrices(p, u, (0, 1), (1, 2)) == (((0, 1), (1, 2)), ((0, 1), (1, 2)))
    assert set(enumerate_u_atoms(p, u)) == {((0,), (1,)), ((0, 1), (1, 2)), ((0, 2), (0, 1))}


def test_fully_specified_derived_are_maximal():
    p = Pattern.parse("***/*?*/***")
    assert derived_submatrices(p, {(1, 1)}, (0, 2), (0, 2)) == (((0, 2), (0, 1, 2)), ((0, 1, 2), (0, 2)))


def test_one_variable_inhibitor_table():
    atoms = one_var_atoms(INHIBITOR_TABLE_PATTERN, (1, 1))
    assert sum(a.positive for a in atoms) == 4
    assert sum(not a.positive for a in atoms) == 2
    assert len(catalysis_cells(INHIBITOR_TABLE_PATTERN, (1, 1))) == 8


def test_two_by_two_corner():
    p = Pattern.parse("?*/**")
    assert set(enumerate_u_atoms(p, {(0, 0)})) == {((0,), (0,)), ((0, 1), (0, 1))}


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 4), st.integers(2, 5), st.integers(0, 2 ** 20 - 1), st.data())
def test_atoms_match_oracle(r, c, bits, data):
    p = Pattern(r, c, bits & ((1 << (r * c)) - 1))
    miss = p.unspecified()
    if not miss:
        return
    u = set(data.draw(st.lists(st.sampled_from(miss), min_size=1, max_size=3, unique=True)))
    got = enumerate_u_atoms(p, u)
    assert set(got) == _atoms_oracle(p, u)
    for R, C in got:
        assert derived_submatrices(p, u, R, C) == ((R, C), (R, C))


def test_subset_completable_examples():
    m = PartialMatrix.parse("1,1,1;1,?,?;1,2,?")
    res = subset_completable(m, {(1, 1)})
    assert res.status == Verdict.FEASIBLE
    done = m.copy()
    done.values[(1, 1)] = res.witness["u2_2"]
    assert is_partial_tp(done)
    assert subset_completable(PartialMatrix.parse("1,?,1;?,1,1;1,1,?"), {(0, 1)}).status == Verdict.INFEASIBLE


def test_subset_completable_rejects_bad_data():
    with pytest.raises(ValueError):
        subset_completable(PartialMatrix.parse("1,1;1,?"), {(0, 0)})
    with pytest.raises(ValueError):
        subset_completable(PartialMatrix.parse("1,2;2,1;?,1"), {(2, 0)})


def _all_confined_positive(m: PartialMatrix, u: set, w: dict, names: dict) -> bool:
    full = PartialMatrix(m.rows, m.cols, dict(m.values), {c: names[c] for c in u})
    for R, C in square_index_sets(m.rows, m.cols):
        cells = [(r, c) for r in R for c in C]
        if all(x in m.values or x in u for x in cells) and any(x in u for x in cells):
            if minor(full, R, C).evaluate(w) <= 0:
                return False
    return True


def test_superfluous_submatrices_are_implied():
    """A witness for the atom system makes every square confined to U positive."""
    rng = random.Random(11)
    done = 0
    while done < 200:
        full = random_tp(4, rng)
        p = random_pattern(4, 4, rng, 0.25)
        miss = p.unspecified()
        if not miss:
            continue
        cell = rng.choice(miss)
        m = partial_from(full, p)
        res = subset_completable(m, {cell})
        assert res.status == Verdict.FEASIBLE  # the TP entry itself is a solution
        name = f"u{cell[0] + 1}_{cell[1] + 1}"
        assert _all_confined_positive(m, {cell}, res.witness, {cell: name})
        done += 1


def test_monotone_in_u():
    rng = random.Random(5)
    checked = 0
    while checked < 40:
        full = random_tp(4, rng)
        p = random_pattern(4, 4, rng, 0.35)
        miss = p.unspecified()
        if len(miss) < 2:
            continue
        m = partial_from(full, p)
        # perturb one entry to get data that is partial TP but not from the same TP matrix
        key = rng.choice(sorted(m.values))
        m.values[key] = m.values[key] * Fraction(rng.randint(1, 6), 3)
        if not is_partial_tp(m):
            continue
        a, b = rng.sample(miss, 2)
        small, big = subset_completable(m, {a}), subset_completable(m, {a, b})
        if big.status == Verdict.FEASIBLE:
            names = {c: f"u{c[0] + 1}_{c[1] + 1}" for c in (a, b)}
            assert small.status != Verdict.INFEASIBLE
            assert _all_confined_positive(m, {a}, big.witness, names)
        checked += 1


def test_one_var_catalysis_examples(clf):
    assert (1, 1) in one_var_catalysis(INHIBITOR_TABLE_PATTERN, clf.status)
    assert (1, 1) in one_var_catalysis(Pattern.parse("***/*??/**?"), clf.status)
    assert (0, 1) not in one_var_catalysis(Pattern.parse("*?*/?**/**?"), clf.status)


def test_one_var_catalysis_positions_complete_sampled_data(clf):
    rng = random.Random(2)
    checked = 0
    while checked < 60:
        p = random_pattern(3, 4, rng, 0.3)
        cells = one_var_catalysis(p, clf.status)
        if not cells:
            continue
        m = partial_from(random_tp(4, rng)[:3], p)
        key = rng.choice(sorted(m.values))
        m.values[key] = m.values[key] * Fraction(rng.randint(2, 5), 4)
        if not is_partial_tp(m):
            continue
        for cell in cells:
            res = subset_completable(m, {cell})
            assert res.status == Verdict.FEASIBLE
            done = PartialMatrix(m.rows, m.cols, dict(m.values))
            done.values[cell] = res.witness[f"u{cell[0] + 1}_{cell[1] + 1}"]
            assert is_partial_tp(done)
        checked += 1


def test_random_tp_generator_is_tp():
    rng = random.Random(0)
    for n in (2, 3, 4, 5):
        assert is_tp(random_tp(n, rng))
