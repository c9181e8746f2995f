import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chains import run_chain
from fanocert.exactnum import (
    CapExceeded,
    CompareOutcome,
    DomainError,
    Magnitude,
    exp2_bounds,
    factorial,
    factorial_mag,
    knuth_tower,
    log2_bounds,
    mag_add_one,
    mag_compare,
    mag_from_rational,
    mag_log10_bounds,
    mag_mul,
    mag_pow,
    parse_rational,
    precision,
    round_dir,
    DOWN,
    UP,
)

E = 128 * 42**5

pos_rationals = st.fractions(min_value=Fraction(1, 10**6), max_value=10**9).filter(lambda x: x > 0)


# ---- primitives


@given(pos_rationals)
def test_log2_bounds_enclose(x):
    lo, hi = log2_bounds(x)
    assert lo <= hi
    assert Fraction(2) ** math.floor(lo) <= x or lo < 0
    # 2**lo <= x <= 2**hi checked through exp2 enclosures
    assert exp2_bounds(lo)[0] <= x <= exp2_bounds(hi)[1]


@given(st.fractions(min_value=-40, max_value=40))
def test_exp2_bounds_enclose(r):
    lo, hi = exp2_bounds(r)
    assert lo <= hi
    # compare via integer powers: lo**den <= 2**num <= hi**den
    if r.denominator <= 16 and abs(r.numerator) <= 200:
        v = Fraction(2) ** r.numerator
        assert lo ** r.denominator <= v <= hi ** r.denominator


def test_log2_exact_on_powers_of_two():
    assert log2_bounds(8) == (3, 3)
    assert log2_bounds(Fraction(1, 1024)) == (-10, -10)
    lo, hi = log2_bounds(3)
    assert lo < hi and hi - lo <= Fraction(1, 2**90)


@given(st.fractions(min_value=-(10**30), max_value=10**30), st.integers(16, 200))
def test_round_dir_directed(q, bits):
    assert round_dir(q, DOWN, bits) <= q <= round_dir(q, UP, bits)


def test_parse_rational_rejects_decimals():
    assert parse_rational("41/42") == Fraction(41, 42)
    with pytest.raises(DomainError):
        parse_rational("0.5")


# ---- constructor examples


def test_from_rational_examples():
    assert mag_from_rational(8).at_level(1) == Magnitude(False, 1, 3, 3)
    half = mag_from_rational(Fraction(1, 2))
    assert (half.reciprocal, half.level, half.lo, half.hi) == (True, 0, 2, 2)
    with precision(20):
        m = mag_from_rational(42).at_level(1)
    assert Fraction(539, 100) <= m.lo <= m.hi <= Fraction(540, 100)
    with pytest.raises(DomainError):
        mag_from_rational(0)


def test_pow_examples():
    m = mag_pow(2, 2**20)
    assert m.at_level(2) == Magnitude(False, 2, 20, 20)
    big = mag_pow(84, E)
    lo84, hi84 = log2_bounds(84, bits=64)
    assert big.level == 1 and E * lo84 <= big.lo <= big.hi <= E * hi84
    tower = mag_pow(2, knuth_tower(2, 2, 48))
    assert tower.at_level(3) == Magnitude(False, 3, 48, 48)


def test_mul_examples():
    assert mag_mul(2, 2) == mag_from_rational(4)
    x = mag_pow(84, E)
    assert mag_mul(x, 1) == x
    n = mag_mul(mag_mul(192, factorial(42)), x)
    lo, hi = mag_log10_bounds(n)
    assert Fraction(321, 100) * 10**10 < lo <= hi < Fraction(322, 100) * 10**10


def test_compare_examples():
    assert mag_compare(mag_pow(2, 2**20), mag_pow(10, 300000)) is CompareOutcome.GT
    assert mag_compare(knuth_tower(2, 3, 2), knuth_tower(2, 3, 2)) is CompareOutcome.EQ
    small = mag_mul(6, factorial_mag(7920))
    large = mag_mul(mag_mul(96, factorial(42)), mag_pow(84, E))
    assert mag_compare(small, large) is CompareOutcome.LT


def test_add_one_examples():
    assert mag_add_one(7) == mag_from_rational(8)
    huge = mag_pow(84, E)
    a = mag_add_one(huge)
    assert mag_compare(a, mag_mul(2, huge)) is CompareOutcome.LT
    with precision(128):
        i1 = mag_mul(42, mag_pow(84, E + 168))
        b = mag_add_one(i1)
    assert b.level == 1 and b.hi - b.lo < Fraction(1, 2**64)


def test_factorial():
    assert factorial(0) == 1
    f42 = factorial(42)
    assert len(str(f42)) == 52
    # independent pairwise-product evaluation order
    xs = list(range(1, 43))
    while len(xs) > 1:
        xs = [xs[i] * xs[i + 1] if i + 1 < len(xs) else xs[i] for i in range(0, len(xs), 2)]
    assert xs[0] == f42
    f7920 = factorial(7920)
    assert 10**26999 <= f7920 < 10**28000
    lo, hi = mag_log10_bounds(factorial_mag(7920).at_level(1))
    assert 27000 < lo <= hi < 28000
    with pytest.raises(CapExceeded):
        factorial(10**5 + 1)


def test_factorial_mag_beyond_cap_encloses_log():
    m = factorial_mag(300, cap=100)
    assert m.level == 1
    assert m.contains(math.factorial(300)) is True


def test_knuth_tower_examples():
    assert knuth_tower(2, 1, 3) == mag_from_rational(8)
    assert knuth_tower(2, 3, 1) == mag_from_rational(16)
    t = knuth_tower(2, 4, 5419)
    assert (t.level, t.lo, t.hi) == (4, 5419, 5419)
    assert knuth_tower(3, 2, 2) == mag_from_rational(3**9)


# ---- properties


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32))
def test_chain_soundness(seed):
    m, x, _ = run_chain(random.Random(seed))
    assert m.contains(x) is True


def _sample_mag(rng):
    return run_chain(rng, steps=rng.randint(0, 4))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_compare_order_laws(seed):
    rng = random.Random(seed)
    (a, _, _), (b, _, _), (c, _, _) = _sample_mag(rng), _sample_mag(rng), _sample_mag(rng)
    ab, ba = mag_compare(a, b), mag_compare(b, a)
    if ab is CompareOutcome.LT:
        assert ba is CompareOutcome.GT
    if ab is CompareOutcome.LT and mag_compare(b, c) is CompareOutcome.LT:
        assert mag_compare(a, c) is CompareOutcome.LT


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_compare_agrees_with_exact(seed):
    rng = random.Random(seed)
    (a, xa, _), (b, xb, _) = _sample_mag(rng), _sample_mag(rng)
    out = mag_compare(a, b)
    if out is CompareOutcome.LT:
        assert xa < xb
    elif out is CompareOutcome.GT:
        assert xa > xb


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32))
def test_normalization_idempotent(seed):
    m, _, _ = run_chain(random.Random(seed))
    raw = Magnitude(m.reciprocal, m.level, m.lo, m.hi)
    assert raw.normalized().normalized() == raw.normalized()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_precision_monotone(seed):
    rng = random.Random(seed)
    (a, _, _), (b, _, _) = _sample_mag(rng), _sample_mag(rng)
    with precision(32):
        low = mag_compare(a, b)
    with precision(256):
        high = mag_compare(a, b)
    if low is not CompareOutcome.INCONCLUSIVE:
        assert high is low


def test_invariants_rejected():
    with pytest.raises(DomainError):
        Magnitude(False, 0, 2, 1)
    with pytest.raises(DomainError):
        Magnitude(False, 0, 0, 1)
    with pytest.raises(DomainError):
        Magnitude(True, 0, Fraction(1, 2), 1)
