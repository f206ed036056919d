import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tplab.atoms import Status
from tplab.catalog import (CatalogError, catalog_patterns, complete_and_verify, completion_values,
                           extract_entry2_params, instantiate, load_catalog, random_params)
from tplab.matrix import PartialMatrix, is_partial_tp

CATALOG = {e.id: e for e in load_catalog()}
ONES = {k: Fraction(1) for k in "abcdefg"}
PUBLISHED_OK = [1, 3, 5, 6, 8]
WITH_ERRATUM = [2, 4, 7]


def test_catalog_shape():
    assert sorted(CATALOG) == list(range(1, 9))
    assert [CATALOG[i].variability for i in range(1, 9)] == [2, 2, 2, 2, 3, 3, 3, 3]
    assert len(catalog_patterns()) == 8
    assert set(WITH_ERRATUM) == {i for i, e in CATALOG.items() if e.erratum}


def test_instantiate_examples():
    m = instantiate(CATALOG[2], ONES)
    assert m.values[(2, 2)] == 3 and m.values[(3, 3)] == 9
    assert m.vars == {(0, 2): "x", (3, 1): "y"}
    assert instantiate(CATALOG[1], ONES).values[(0, 3)] == Fraction(1, 2)


def test_parameters_must_be_positive():
    with pytest.raises(CatalogError):
        instantiate(CATALOG[3], {"a": 1, "b": 0, "c": 1})
    with pytest.raises(CatalogError):
        instantiate(CATALOG[3], {"a": 1})


@pytest.mark.parametrize("eid", sorted(CATALOG))
def test_general_data_is_partial_tp(eid):
    rng = random.Random(eid)
    for _ in range(30):
        assert is_partial_tp(instantiate(CATALOG[eid], random_params(CATALOG[eid], rng)))


def _sampled(eid, erratum, n=40, seed=0):
    rng = random.Random(100 + seed + eid)
    return [complete_and_verify(CATALOG[eid], random_params(CATALOG[eid], rng), erratum=erratum).ok
            for _ in range(n)]


@pytest.mark.parametrize("eid", PUBLISHED_OK)
def test_published_formulas_complete(eid):
    assert all(_sampled(eid, erratum=False))


@pytest.mark.parametrize("eid", WITH_ERRATUM)
def test_erratum_formulas_complete(eid):
    assert all(_sampled(eid, erratum=True))


@pytest.mark.parametrize("eid", WITH_ERRATUM)
def test_published_formulas_fail_where_erratum_applies(eid):
    assert not any(_sampled(eid, erratum=False, n=10))


def test_entry1_both_branches():
    e = CATALOG[1]
    high = dict(ONES, d=Fraction(2), f=Fraction(2))  # d*f = 4 >= a*(1+a) = 2
    low = dict(ONES, d=Fraction(1, 4), f=Fraction(1, 4))
    assert e.branch(high) == {"y": True} and e.branch(low) == {"y": False}
    assert completion_values(e, high, Fraction(1, 8))["y"] == Fraction(1, 8)
    y_low = completion_values(e, low, Fraction(1, 8))["y"]
    assert 0 < y_low < 1
    for params in (high, low):
        assert complete_and_verify(e, params).ok


def test_entry7_erratum_branches():
    e = CATALOG[7]
    below = {"a": Fraction(1), "b": Fraction(2), "c": Fraction(1)}
    above = {"a": Fraction(3), "b": Fraction(1), "c": Fraction(1)}
    assert completion_values(e, below, Fraction(1, 4), erratum=True)["z"] == 2
    assert completion_values(e, above, Fraction(1, 4), erratum=True)["z"] == Fraction(5, 2)
    assert complete_and_verify(e, below, erratum=True).ok and complete_and_verify(e, above, erratum=True).ok


def test_residual_patterns_are_completable(clf):
    for e in CATALOG.values():
        res = complete_and_verify(e, ONES, classify=clf.status, erratum=True)
        assert res.residual_completable is not False
        assert clf.status(e.pattern) == Status.COMPLETABLE


pos = st.fractions(min_value=Fraction(1, 20), max_value=20, max_denominator=20)


@settings(max_examples=100, deadline=None)
@given(st.lists(pos, min_size=5, max_size=5), st.lists(pos, min_size=4, max_size=4),
       st.lists(pos, min_size=4, max_size=4))
def test_entry2_parameters_recovered_after_scaling(params, rs, cs):
    want = dict(zip("abcde", params))
    m = instantiate(CATALOG[2], want)
    scaled = PartialMatrix(4, 4, {(r, c): v * rs[r] * cs[c] for (r, c), v in m.values.items()}, dict(m.vars))
    assert extract_entry2_params(scaled) == want
