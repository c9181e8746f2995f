"""Certified bounds for the alpha/beta/l/upsilon pipeline.

Definitions used here:

* ``M(e)     = floor(2/e) ** floor(128/e**5) * (floor(2/e) + 2)`` for ``e`` in (0, 2]
* ``alpha(p, e) = eps2(p, M(e))``
* ``beta(p)  = alpha(p, alpha(p, alpha(p, alpha(p, 2))))``
* ``l(p)     = ceil(p / beta(p))``
* ``ups(p)   = 1 / (l (2l) ** (128 l**5 + 4 l))``

``alpha`` is nondecreasing in ``e`` and ``M`` is nonincreasing, so a lower
bound on ``e`` yields a lower bound on ``alpha(p, e)`` through the Sylvester
estimate ``eps2(p, q) > 1/S_{(pq+1)p+2} >= 1/2**(2**((pq+1)p+2))`` (``p >= 2``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import (
    CompareOutcome,
    DomainError,
    Magnitude,
    knuth_tower,
    mag_add,
    mag_compare,
    mag_from_rational,
    mag_mul,
    mag_pow,
    precision,
)
from .egyptian import sylvester_value
from .gapsearch import PROVEN, epsilon2_from, min_sum_exceeding

EXACT_POWER_BITS = 1 << 20
ALPHA_EXACT_BUDGET = 3
SYLVESTER_EXACT_CAP = 20


class Direction(enum.Enum):
    EXACT = "exact"
    LOWER = "lower_bound"
    UPPER = "upper_bound"


class DirectionError(TypeError):
    """A bound was fed into a step that needs the opposite direction."""


Value = Fraction | int | Magnitude


@dataclass(frozen=True)
class TraceStep:
    op: str
    args: tuple
    note: str


@dataclass
class BoundReport:
    quantity: str
    p: int
    direction: Direction
    value: Value
    trace: list[TraceStep] = field(default_factory=list)
    checks: dict[str, str] = field(default_factory=dict)

    def as_magnitude(self) -> Magnitude:
        return as_mag(self.value)


def as_mag(v: Value) -> Magnitude:
    return v if isinstance(v, Magnitude) else mag_from_rational(v)


def _require(rep: BoundReport, *allowed: Direction):
    if rep.direction not in allowed:
        names = ", ".join(d.value for d in allowed)
        raise DirectionError(
            f"{rep.quantity} is a {rep.direction.value}; this step needs one of {names}"
        )


def compare_certified(a_fn, b_fn, start: int = 96, max_bits: int = 768) -> CompareOutcome:
    """Compare lazily built magnitudes, doubling precision while undecided."""
    bits = start
    while True:
        with precision(bits):
            out = mag_compare(a_fn(), b_fn())
        if out is not CompareOutcome.INCONCLUSIVE or bits >= max_bits:
            return out
        bits *= 2


# ---------------------------------------------------------------------------
# M(e)


def _m_parts(eps: Fraction) -> tuple[int, int]:
    eps = Fraction(eps)
    if not 0 < eps <= 2:
        raise DomainError("M(e) is defined for e in (0, 2]")
    return math.floor(2 / eps), math.floor(128 / eps**5)


def m_of_epsilon(eps: Fraction | int | str) -> int | Magnitude:
    """``M(e)`` exactly when it fits the power budget, else as an enclosure."""
    base, expo = _m_parts(Fraction(eps))
    if base.bit_length() * expo <= EXACT_POWER_BITS:
        return base**expo * (base + 2)
    return mag_mul(mag_pow(base, expo), base + 2)


def m_upper(eps_lower: Value) -> int | Magnitude:
    """Upper bound on ``M(e)`` valid for every ``e >= eps_lower``.

    A rational input uses the exact floors.  A magnitude input ``L`` uses
    ``X = 1/L`` and ``M(e) <= (2X) ** (128 X**5) * (2X + 2)``.
    """
    if not isinstance(eps_lower, Magnitude):
        return m_of_epsilon(eps_lower)
    x = eps_lower.reciprocal_of()
    two_x = mag_mul(2, x)
    expo = mag_mul(128, mag_pow(x, 5))
    return mag_mul(mag_pow(two_x, expo), mag_add(two_x, 2))


def tower2_over(m: Value, k: int) -> Magnitude:
    """``(2^)^k m`` for ``m >= 1``: the body is reused ``k`` levels higher."""
    m = as_mag(m)
    if m.reciprocal:
        raise DomainError("tower base must be >= 1")
    return Magnitude(False, m.level + k, m.lo, m.hi).normalized()


def sylvester_index(p: int, q: int) -> int:
    return (p * q + 1) * p + 2


def eps2_floor(p: int, q: Value) -> Value:
    """Lower bound ``1/S_{(pq+1)p+2}`` on ``eps2(p, q)``, or ``1/2**(2**index)``."""
    if p < 2:
        raise DomainError("the Sylvester estimate needs p >= 2")
    if isinstance(q, int) or (isinstance(q, Fraction) and q.denominator == 1):
        idx = sylvester_index(p, int(q))
        if idx <= SYLVESTER_EXACT_CAP:
            return Fraction(1, sylvester_value(idx))
        return tower2_over(idx, 2).reciprocal_of()
    idx = mag_add(mag_mul(p, mag_add(mag_mul(p, q), 1)), 2)
    return tower2_over(idx, 2).reciprocal_of()


# ---------------------------------------------------------------------------
# alpha


def alpha_exact_first(p: int, budget: int = ALPHA_EXACT_BUDGET) -> BoundReport:
    """``alpha(p, 2) = eps2(p, 3)``; exact from the gap search within budget."""
    m2 = m_of_epsilon(2)
    assert m2 == 3
    if p <= budget:
        cert = min_sum_exceeding(p, 3)
        if cert.status == PROVEN:
            val = epsilon2_from(cert.value, 3)
            step = TraceStep("alpha_exact_first", (p,), "eps2(p, M(2)) with M(2)=3 from exact gap search")
            return BoundReport("alpha", p, Direction.EXACT, val, [step])
    if p < 2:
        raise DomainError("no certified fallback for p = 1 outside the search budget")
    val = eps2_floor(p, 3)
    step = TraceStep("alpha_exact_first", (p,), "Sylvester floor 1/S_{(3p+1)p+2} (search budget exceeded)")
    return BoundReport("alpha", p, Direction.LOWER, val, [step])


def alpha_lower(p: int, eps_lower: Value) -> Value:
    """Lower bound on ``alpha(p, e)`` for every ``e >= eps_lower``."""
    if p < 2:
        raise DomainError("alpha_lower needs p >= 2; use alpha_exact_first for p = 1")
    if not isinstance(eps_lower, Magnitude):
        e = Fraction(eps_lower)
        if not 0 < e <= 2:
            raise DomainError("eps_lower must lie in (0, 2]")
    return eps2_floor(p, m_upper(eps_lower))


def alpha_step(p: int, prev: BoundReport) -> BoundReport:
    _require(prev, Direction.EXACT, Direction.LOWER)
    val = alpha_lower(p, prev.value)
    trace = prev.trace + [
        TraceStep("alpha_lower", (p,), "alpha(p, e) >= 1/2^(2^((p M + 1) p + 2)) at M >= M(e)")
    ]
    return BoundReport("alpha", p, Direction.LOWER, val, trace)


# ---------------------------------------------------------------------------
# beta, l, upsilon


def _verdict(out: CompareOutcome, want: CompareOutcome | tuple) -> str:
    wants = want if isinstance(want, tuple) else (want,)
    if out in wants:
        return "verified"
    if out is CompareOutcome.INCONCLUSIVE:
        return "inconclusive"
    return "falsified"


def beta_target_a(p: int) -> Magnitude:
    return knuth_tower(2, 14, 12 * p * p).reciprocal_of()


def beta_target_b(p: int) -> Magnitude:
    return knuth_tower(2, 17, p).reciprocal_of()


def beta_lower(p: int, budget: int = ALPHA_EXACT_BUDGET) -> BoundReport:
    """Lower bound on ``beta(p)`` from one exact/floor step and three estimate steps."""
    if p < 2:
        raise DomainError("beta_lower needs p >= 2")
    rep = alpha_exact_first(p, budget)
    for _ in range(3):
        rep = alpha_step(p, rep)
    rep.quantity = "beta"
    v = rep.as_magnitude()
    rep.checks["gt_tower14_12p2"] = _verdict(
        compare_certified(lambda: v, lambda: beta_target_a(p)), CompareOutcome.GT
    )
    rep.checks["gt_tower17_p"] = _verdict(
        compare_certified(lambda: v, lambda: beta_target_b(p)), CompareOutcome.GT
    )
    cap = min(Fraction(1, 6), Fraction(1, p * (p + 1)))
    rep.checks["le_glct_formula"] = _verdict(
        compare_certified(lambda: v, lambda: mag_from_rational(cap)),
        (CompareOutcome.LT, CompareOutcome.EQ),
    )
    return rep


def l_from_beta(p: int, beta: BoundReport) -> BoundReport:
    """Upper bound on ``l(p) = ceil(p/beta)`` from a lower bound on ``beta``."""
    _require(beta, Direction.EXACT, Direction.LOWER)
    if isinstance(beta.value, Magnitude):
        val = mag_add(mag_mul(p, beta.value.reciprocal_of()), 1)
        direction = Direction.UPPER
    else:
        val = math.ceil(Fraction(p) / Fraction(beta.value))
        direction = Direction.EXACT if beta.direction is Direction.EXACT else Direction.UPPER
    trace = beta.trace + [TraceStep("l_from_beta", (p,), "l <= p/beta + 1")]
    return BoundReport("l", p, direction, val, trace)


def l_upper(p: int, budget: int = ALPHA_EXACT_BUDGET) -> BoundReport:
    rep = l_from_beta(p, beta_lower(p, budget))
    v = rep.as_magnitude()
    rep.checks = {
        "lt_tower17_p": _verdict(
            compare_certified(lambda: v, lambda: knuth_tower(2, 17, p)), CompareOutcome.LT
        )
    }
    return rep


def upsilon_from_l(p: int, l: BoundReport) -> BoundReport:
    """Lower bound on ``1/(l (2l) ** (128 l**5 + 4 l))`` from an upper bound on ``l``."""
    _require(l, Direction.EXACT, Direction.UPPER)
    L = l.as_magnitude()
    expo = mag_add(mag_mul(128, mag_pow(L, 5)), mag_mul(4, L))
    den = mag_mul(L, mag_pow(mag_mul(2, L), expo))
    direction = Direction.EXACT if l.direction is Direction.EXACT and den.is_exact else Direction.LOWER
    trace = l.trace + [TraceStep("upsilon_from_l", (p,), "upsilon is decreasing in l")]
    return BoundReport("upsilon", p, direction, den.reciprocal_of(), trace)


def upsilon_lower(p: int, budget: int = ALPHA_EXACT_BUDGET) -> BoundReport:
    rep = upsilon_from_l(p, l_upper(p, budget))
    v = rep.as_magnitude()
    rep.checks = {
        "gt_tower19_p": _verdict(
            compare_certified(lambda: v, lambda: knuth_tower(2, 19, p).reciprocal_of()),
            CompareOutcome.GT,
        )
    }
    return rep


def beta_suite(p: int, budget: int = ALPHA_EXACT_BUDGET) -> dict[str, str]:
    """All certified comparisons of the pipeline for one ``p``."""
    beta = beta_lower(p, budget)
    l = l_from_beta(p, beta)
    ups = upsilon_from_l(p, l)
    lv, uv = l.as_magnitude(), ups.as_magnitude()
    out = dict(beta.checks)
    out["l_lt_tower17_p"] = _verdict(
        compare_certified(lambda: lv, lambda: knuth_tower(2, 17, p)), CompareOutcome.LT
    )
    out["upsilon_gt_tower19_p"] = _verdict(
        compare_certified(lambda: uv, lambda: knuth_tower(2, 19, p).reciprocal_of()),
        CompareOutcome.GT,
    )
    return out


# ---------------------------------------------------------------------------
# replay


def replay(trace: list[TraceStep], budget: int = ALPHA_EXACT_BUDGET) -> BoundReport:
    """Recompute a report from its trace alone."""
    rep = None
    for step in trace:
        (p,) = step.args
        if step.op == "alpha_exact_first":
            rep = alpha_exact_first(p, budget)
        elif step.op == "alpha_lower":
            rep = alpha_step(p, rep)
        elif step.op == "l_from_beta":
            rep.quantity = "beta"
            rep = l_from_beta(p, rep)
        elif step.op == "upsilon_from_l":
            rep = upsilon_from_l(p, rep)
        else:
            raise ValueError(f"unknown trace op {step.op!r}")
    return rep


# ---------------------------------------------------------------------------
# instance checks of the alpha estimate at huge q


def huge_q_alpha_audit(p: int, q_values) -> list[dict]:
    """Per-``q`` checks of ``M(1/q) < q**(q**6)`` and ``alpha(p, 1/q) > 1/((2^)^4 q)``.

    Each ``q`` must be certified ``>= 2**(2**(12 p**2))``; otherwise it is skipped.
    """
    if p < 2:
        raise DomainError("needs p >= 2")
    hyp = knuth_tower(2, 2, 12 * p * p)
    out = []
    for q in q_values:
        q = as_mag(q)
        h = mag_compare(q, hyp)
        if h not in (CompareOutcome.GT, CompareOutcome.EQ):
            out.append({"status": "skipped", "m_check": None, "alpha_check": None})
            continue
        eps = q.reciprocal_of()
        m_bar = m_upper(eps)
        qq = mag_pow(q, mag_pow(q, 6))
        m_ok = compare_certified(lambda: m_bar, lambda: qq) is CompareOutcome.LT
        a = as_mag(alpha_lower(p, eps))
        target = tower2_over(q, 4).reciprocal_of()
        a_ok = compare_certified(lambda: a, lambda: target) is CompareOutcome.GT
        out.append({"status": "checked", "m_check": m_ok, "alpha_check": a_ok})
    return out
