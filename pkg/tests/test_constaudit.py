import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fanocert import constaudit as ca
from fanocert.exactnum import DomainError, mag_loglog10_bounds


def test_parser():
    assert ca.parse_expr("42!") == ca.Fact(42)
    assert ca.parse_expr("2 * 84^(2*3+1)") == ca.Prod((ca.Int(2), ca.Pow(ca.Int(84), 7)))
    assert ca.evaluate_exact(ca.parse_expr("1/(3*4)")) == Fraction(1, 12)
    assert ca.parse_expr("{6, 1,3}") == ca.IntSet((1, 3, 6))
    assert ca.evaluate_exact(ca.parse_expr("2^(3^2)")) == 512
    for bad in ("2 +", "(2", "84^x", "2.5", "(2*3)!"):
        with pytest.raises(DomainError):
            ca.parse_expr(bad)


def test_manifest_complete():
    want = {"threefold-N-bound", "N21-bound", "surface-cartier-bound", "I0", "I1", "V0",
            "surface-vol-floor", "threefold-vol-floor", "I(2,1)", "lcm-q-Ng-bound",
            "lcm-q-2Ng-bound", "nonplt-index-bound", "nonexc-surface-N-set"}
    assert set(ca.REGISTRY) == want
    for cid in want:
        v = ca.eval_constant(cid)
        assert v.members is not None or v.magnitude is not None
    with pytest.raises(DomainError):
        ca.get("missing")
    with pytest.raises(DomainError):
        ca.parse_manifest("a | b | 1\na | c | 2")


def test_legendre():
    assert ca.legendre(10) == {2: 8, 3: 4, 5: 2, 7: 1}
    for n in (1, 7, 42, 100):
        assert ca.value_from_normal_form(ca.legendre(n)) == math.factorial(n)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(sorted(k for k in ca.REGISTRY if k != "nonexc-surface-N-set")),
       st.integers(2, 11))
def test_normal_form_matches_exact_on_surrogates(cid, modulus):
    small = ca.shrink_exponents(ca.get(cid).expr, modulus)
    if any(isinstance(f, ca.Fact) and f.n > 100 for f in _leaves(small)):
        return
    assert ca.value_from_normal_form(ca.normal_form(small)) == ca.evaluate_exact(small)
    assert ca.to_magnitude(small).contains(ca.evaluate_exact(small)) is True


def _leaves(e):
    if isinstance(e, ca.Prod):
        for f in e.factors:
            yield from _leaves(f)
    elif isinstance(e, (ca.Pow,)):
        yield from _leaves(e.base)
    elif isinstance(e, ca.Recip):
        yield from _leaves(e.inner)
    else:
        yield e


def test_identities_and_negative_controls():
    assert ca.verify_identity_I0().verdict == ca.VERIFIED
    assert ca.verify_volume_decomposition().verdict == ca.VERIFIED
    assert ca.verify_identity_I0(perturb=1).verdict == ca.FALSIFIED
    assert ca.verify_volume_decomposition(perturb=-1).verdict == ca.FALSIFIED
    assert ca.coefficient_identity()
    bad = ca.identity_check("x", ca.parse_expr("2*3"), ca.parse_expr("5"))
    assert bad.verdict == ca.FALSIFIED


def test_orderings():
    res = ca.verify_orderings()
    assert all(r.verdict == ca.VERIFIED for r in res), [r for r in res if r.verdict != ca.VERIFIED]
    assert max(ca.lcm_table().values()) == 6 * math.factorial(42)
    rev = ca.compare_exprs("reversed", ca.get("N21-bound").expr, ca.get("nonplt-index-bound").expr)
    assert rev.verdict == ca.FALSIFIED


def test_v0_window():
    r = ca.verify_V0_approximation()
    assert r.verdict == ca.VERIFIED
    lo, hi = ca.loglog10_window("V0")
    assert hi - lo < Fraction(1, 100)
    assert ca.verify_V0_approximation(lo=Fraction(1142, 100), hi=Fraction(1150, 100)).verdict == ca.FALSIFIED


def test_surface_index_bound():
    e = ca.surface_index_bound(Fraction(1, 42))
    assert e == ca.Pow(ca.Int(84), 16728477696) and 128 * 42**5 == 16728477696
    assert ca.surface_index_bound(Fraction(1, 2)) == ca.Pow(ca.Int(4), 4096)
    for bad in (1, 0, Fraction(-1, 3)):
        with pytest.raises(DomainError):
            ca.surface_index_bound(bad)


def test_threefold_chain_and_full_audit():
    assert all(r.verdict == ca.VERIFIED for r in ca.verify_threefold_delta_chain())
    assert all(r.verdict == ca.VERIFIED for r in ca.audit_all_constants())
    lo, hi = mag_loglog10_bounds(ca.to_magnitude(ca.get("threefold-N-bound").expr))
    assert 10 < lo <= hi < 11
