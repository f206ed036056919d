import random

import pytest
from hypothesis import given, settings, strategies as st

from tplab.atoms import Status, one_var_catalysis
from tplab.classify import Method, default_classifier, OutOfBounds, base_theorem, single_entry_completable
from tplab.obstructions import load_appendix_b
from tplab.pattern import Pattern
from tplab.threerow import (classify_3byn_by_reductions, decide_string, pattern_to_string, reduce_string,
                            rotate, string_to_pattern, strip_thin_lines)


def test_trivial(clf):
    r = clf.classify(Pattern.parse("*"))
    assert r.line() == "Completable trivial 0 -"


def test_two_entry_corner_pattern(clf):
    p = Pattern.parse("***/*??/**?")
    assert clf.status(p) == Status.COMPLETABLE
    # the (2,2) entry is completable by 1-variable catalysis as well
    assert (1, 1) in one_var_catalysis(p, clf.status)


def test_three_by_three_obstruction(clf):
    r = clf.classify(Pattern.parse("*?*/?**/**?"))
    assert r.status == Status.NONCOMPLETABLE and r.method == Method.DB and r.variability == 1


def test_three_by_four_noncompletable(clf):
    assert clf.status(Pattern.parse("*?*?/**?*/?**?")) == Status.NONCOMPLETABLE


def test_special_catalog_pattern(clf):
    r = clf.classify(Pattern.parse("****/**?*/****/?***"))
    assert r.status == Status.COMPLETABLE and r.method == Method.CATALOG
    assert r.provenance == ("catalog entry 1",)


def test_remaining_4x5_pattern_is_unknown(clf):
    reduced_open = [p for p in load_appendix_b() if p.is_reduced() and base_theorem(p) is None]
    assert len(reduced_open) == 257
    assert clf.classify(reduced_open[0]).status == Status.UNKNOWN


def test_remaining_4x5_non_reduced_are_completable(clf):
    non_reduced = [p for p in load_appendix_b() if not p.is_reduced()]
    assert len(non_reduced) == 29
    assert all(clf.status(p) == Status.COMPLETABLE for p in non_reduced)


def test_out_of_bounds(clf):
    with pytest.raises(OutOfBounds):
        clf.classify(Pattern.parse("*?***/**?**/*****/*****/***?*"))


@pytest.mark.parametrize("m,n,i,j,want", [
    (3, 5, 2, 2, True), (4, 4, 1, 1, True), (4, 4, 4, 4, True), (4, 4, 2, 2, True),
    (4, 4, 1, 4, False), (4, 5, 2, 3, False), (5, 5, 3, 3, False), (4, 5, 1, 2, True),
])
def test_single_entry_theorem(m, n, i, j, want):
    assert single_entry_completable(m, n, i, j) == want


def test_symmetry_invariance_4x4(clf):
    for b in range(1 << 16):
        p = Pattern(4, 4, b)
        assert clf.status(p) == clf.status(p.canonical())


def test_catalysed_patterns_have_a_certifying_entry(clf):
    rng = random.Random(4)
    t = clf.table((4, 4))
    cat = [int(b) for b in t.canonical if t.method[b] == list(Method).index(Method.CATALYSIS)]
    for b in rng.sample(cat, 300):
        p = Pattern(4, 4, b)
        cells = one_var_catalysis(p, clf.status)
        assert any(clf.status(p.specify(r, c)) == Status.COMPLETABLE for r, c in cells)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, (1 << 16) - 1))
def test_thin_lines_do_not_change_status(bits):
    p = Pattern(4, 4, bits)
    q = strip_thin_lines(p)
    if q is None or min(q.shape) < 3 or q.n_unspecified == 0:
        return
    clf = default_classifier()
    assert clf.status(p) == clf.status(q)


# ---------------------------------------------------------------------------
# three-row string procedure


@pytest.mark.parametrize("s", ["12021", "12023", "13021", "133133113113", "1221221", "000", "120"])
def test_completable_strings(s):
    assert decide_string(s).status == Status.COMPLETABLE


@pytest.mark.parametrize("s", ["210", "213", "2112", "31021", "311331"])
def test_obstruction_strings(s):
    assert decide_string(s).status == Status.NONCOMPLETABLE
    assert decide_string(rotate(s)).status == Status.NONCOMPLETABLE


def test_first_listed_obstruction():
    p = Pattern.parse("*?*/?**/***")
    v = classify_3byn_by_reductions(p)
    assert v.status == Status.NONCOMPLETABLE


def test_string_roundtrip():
    for s in ["0123", "31021", "2"]:
        assert pattern_to_string(string_to_pattern(s)) == s
    assert rotate("1203") == "1023"  # 180 degree turn swaps top and bottom


def test_reductions():
    assert reduce_string("1112") == "12"
    assert reduce_string("0220") == "00"


@pytest.mark.parametrize("n", [3, 4, 5])
def test_three_row_agreement_small(clf, n):
    for b in range(1 << (3 * n)):
        p = Pattern(3, n, b)
        a, r = clf.status(p), classify_3byn_by_reductions(p).status
        assert a == r and a != Status.UNKNOWN, p.render()
