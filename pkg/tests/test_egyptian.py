import math
from fractions import Fraction
from itertools import combinations_with_replacement

import pytest

from fanocert.egyptian import (
    BudgetExceeded,
    curtiss_min_gap,
    max_unit_sum_under,
    sylvester,
    sylvester_product_identity,
    sylvester_value,
    unit_fraction_gap,
)


def test_sylvester_values():
    assert [sylvester_value(n) for n in range(1, 6)] == [2, 3, 7, 43, 1807]
    assert sylvester_value(6) == 3263443 == 1807**2 - 1807 + 1
    assert 2 * 3 * 7 * 43 + 1 == 1807
    for n in range(2, 21):
        s = sylvester_value(n - 1)
        assert sylvester_value(n) == s * s - s + 1
        assert sylvester_product_identity(n)


def test_sylvester_bound():
    for n in range(1, 21):
        e = sylvester(n)
        assert e.bound_holds() is True
        assert e.value <= 2 ** (2**n) if n <= 12 else True
    far = sylvester(40)
    assert far.value is None and far.bound.level >= 1


def test_curtiss():
    golden = {1: (Fraction(1, 2), (2,)), 2: (Fraction(1, 6), (2, 3)),
              3: (Fraction(1, 42), (2, 3, 7)), 4: (Fraction(1, 1806), (2, 3, 7, 43))}
    for n, (gap, w) in golden.items():
        r = curtiss_min_gap(n)
        assert (r.gap, r.witness) == (gap, w)
        assert r.gap == Fraction(1, sylvester_value(n + 1) - 1)
    with pytest.raises(BudgetExceeded):
        curtiss_min_gap(6)


def test_max_unit_sum_under_examples():
    r = max_unit_sum_under(1, 3)
    assert (r.best, r.witness) == (Fraction(41, 42), (2, 3, 7))
    r = max_unit_sum_under(Fraction(1, 2), 2)
    assert (r.best, r.witness) == (Fraction(10, 21), (3, 7))
    r = max_unit_sum_under(2, 5)
    assert (r.best, r.witness) == (Fraction(83, 42), (2, 2, 2, 3, 7))


def test_max_under_equals_curtiss():
    for k in range(1, 5):
        assert max_unit_sum_under(1, k).best == 1 - curtiss_min_gap(k).gap


def _brute(r, k, max_m):
    best = None
    for ms in combinations_with_replacement(range(2, max_m + 1), k):
        s = sum(Fraction(1, m) for m in ms)
        if s < r and (best is None or s > best):
            best = s
    return best


@pytest.mark.parametrize("r,k,max_m", [(Fraction(3, 4), 2, 40), (Fraction(5, 7), 3, 30), (Fraction(3, 2), 3, 20)])
def test_max_under_vs_bruteforce(r, k, max_m):
    res = max_unit_sum_under(r, k)
    brute = _brute(r, k, max_m)
    assert res.best >= brute
    if max(res.witness) <= max_m:
        assert res.best == brute


def test_unit_fraction_gap():
    assert unit_fraction_gap(0)[0] == Fraction(1, 2)
    for q in range(1, 4):
        gap, w = unit_fraction_gap(q)
        assert gap == Fraction(1, sylvester_value(q + 2) - 1)
        assert math.prod(w) == sylvester_value(q + 2) - 1
