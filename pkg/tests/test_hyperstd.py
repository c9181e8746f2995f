from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fanocert.hyperstd import (
    Deficit,
    HyperElem,
    PreconditionError,
    adjunct,
    complement_coeff_check,
    elements_upto_n,
    enumerate_deficits,
    membership,
    membership_bruteforce,
    min_nonzero,
    sum_in_phi,
)


@st.composite
def elems(draw, p=None):
    p = p or draw(st.integers(1, 8))
    n = draw(st.integers(1, 60))
    k = draw(st.integers(0, p))
    return HyperElem(p, n, k)


def test_membership_examples():
    assert membership(1, Fraction(41, 42)) == HyperElem(1, 42, 1)
    assert membership(2, 0) == HyperElem(2, 1, 2)
    assert membership(2, Fraction(1, 4)) is None
    assert membership(3, Fraction(5, 4)) is None
    assert membership(3, -1) is None


@given(st.integers(1, 9), st.fractions(min_value=-1, max_value=2, max_denominator=200))
def test_membership_matches_bruteforce(p, x):
    assert membership(p, x) == membership_bruteforce(p, x)


@given(elems())
def test_round_trip_and_canonical(e):
    w = membership(e.p, e.value)
    assert w is not None and w.value == e.value
    assert w.n <= e.n
    assert w.canonical() == w


def test_sum_examples():
    half = HyperElem(1, 2, 1)
    assert sum_in_phi(1, [half, half]) == HyperElem(1, 1, 0)
    third = membership(3, Fraction(1, 3))
    assert sum_in_phi(3, [third, third]) == HyperElem(3, 1, 1)
    with pytest.raises(PreconditionError):
        sum_in_phi(1, [half, membership(1, Fraction(2, 3))])


def test_adjunct_examples():
    assert adjunct(1, HyperElem(1, 2, 1), 3) == HyperElem(1, 6, 1)
    for n in (1, 2, 7):
        assert adjunct(4, HyperElem(4, 1, 0), n).value == 1
    e = adjunct(2, membership(2, Fraction(1, 2)), 2)
    assert e.value == Fraction(3, 4) and e.pair == (2, 1)


@settings(max_examples=500)
@given(st.integers(1, 6), st.data())
def test_closure(p, data):
    gs = data.draw(st.lists(elems(p), min_size=1, max_size=4))
    total = sum(g.value for g in gs)
    if total <= 1:
        assert membership(p, sum_in_phi(p, gs).value) is not None
    n = data.draw(st.integers(1, 30))
    a = adjunct(p, gs[0], n)
    assert a.value == (n - 1 + gs[0].value) / n
    assert membership(p, a.value) is not None


def test_min_nonzero_by_enumeration():
    for p in range(1, 11):
        vals = [v for v in elements_upto_n(p, 3 * p + 3) if v > 0]
        assert min(vals) == min_nonzero(p)


def test_enumerate_deficits():
    got = [d.value for d in enumerate_deficits(2, 1, 3)]
    assert got == [Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(1, 6)]
    got = [d.value for d in enumerate_deficits(1, Fraction(1, 2), 4)]
    assert got == [Fraction(1, 3), Fraction(1, 4)]
    assert enumerate_deficits(3, Fraction(1, 10**6), 20) == []
    ds = enumerate_deficits(5, 1, 10)
    assert all(isinstance(d, Deficit) and 0 < d.value < 1 for d in ds)
    assert all(d.element().value == 1 - d.value for d in ds)


def test_complement_coeff_check():
    assert complement_coeff_check(2, Fraction(1, 3), Fraction(1, 2))
    assert not complement_coeff_check(2, Fraction(1, 3), Fraction(1, 3))
    assert complement_coeff_check(1, 1, 1)
