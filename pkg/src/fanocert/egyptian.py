"""Sylvester numbers and optimal unit-fraction under-approximation.

This module is deliberately self-contained (it does not import the gap search)
so that it can serve as an independent oracle for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import DomainError, Magnitude, knuth_tower, mag_compare, mag_from_rational

SYLVESTER_EXACT_CAP = 20
CURTISS_BUDGET = 5


class BudgetExceeded(RuntimeError):
    """Requested search lies outside the configured budget."""


@dataclass(frozen=True)
class SylvesterEntry:
    index: int
    value: int | None
    bound: Magnitude  # encloses 2**(2**index), an upper bound on the value

    def bound_holds(self) -> bool | None:
        if self.value is None:
            return None
        out = mag_compare(mag_from_rational(self.value), self.bound)
        if out.name in ("LT", "EQ"):
            return True
        if out.name == "GT":
            return False
        return None


_SYL: list[int] = [2]


def sylvester_value(n: int, cap: int = SYLVESTER_EXACT_CAP) -> int:
    if n < 1:
        raise DomainError("Sylvester index starts at 1")
    if n > cap:
        raise BudgetExceeded(f"exact Sylvester numbers capped at n <= {cap}")
    while len(_SYL) < n:
        s = _SYL[-1]
        _SYL.append(s * s - s + 1)
    return _SYL[n - 1]


def sylvester(n: int, cap: int = SYLVESTER_EXACT_CAP) -> SylvesterEntry:
    """Exact ``S_n`` (when ``n <= cap``) together with the bound ``2**(2**n)``."""
    if n < 1:
        raise DomainError("Sylvester index starts at 1")
    value = sylvester_value(n, cap) if n <= cap else None
    return SylvesterEntry(n, value, knuth_tower(2, 2, n))


def sylvester_product_identity(n: int) -> bool:
    """``S_n == prod_{i<n} S_i + 1``."""
    return sylvester_value(n) == math.prod(sylvester_value(i) for i in range(1, n)) + 1


@dataclass(frozen=True)
class UnitSumResult:
    best: Fraction
    witness: tuple[int, ...]  # denominators, nondecreasing


def _greedy(h: Fraction, s: int, m_min: int) -> list[int]:
    out = []
    for _ in range(s):
        m = max(m_min, h.denominator // h.numerator + 1)
        out.append(m)
        h -= Fraction(1, m)
        m_min = m
    return out


def max_unit_sum_under(r: Fraction | int, k: int, max_den_hint: int | None = None) -> UnitSumResult:
    """Largest ``sum 1/m_i < r`` over exactly ``k`` denominators ``m_i >= 2``.

    Depth-first branch and bound over nondecreasing denominators.  With
    headroom ``h``, ``s`` slots left and incumbent gap ``g``, the next term
    ``1/m`` must satisfy ``1/m < h`` and ``s/m >= h - g``, a finite range.
    Ties are broken towards the lexicographically smallest denominator list.
    """
    r = Fraction(r)
    if r <= 0 or k < 1:
        raise DomainError("need r > 0 and k >= 1")
    best_w: list[int] = _greedy(r, k, 2)
    best_g = r - sum(Fraction(1, m) for m in best_w)

    def consider(w, g):
        nonlocal best_w, best_g
        if g < best_g or (g == best_g and w < best_w):
            best_w, best_g = list(w), g

    path: list[int] = []

    def dfs(h: Fraction, s: int, m_min: int):
        # greedy completion keeps the incumbent strictly below h
        tail = _greedy(h, s, m_min)
        consider(path + tail, h - sum(Fraction(1, m) for m in tail))
        lo = max(m_min, h.denominator // h.numerator + 1)
        slack = h - best_g
        hi = math.floor(s / slack)
        if max_den_hint is not None:
            hi = min(hi, max_den_hint)
        for m in range(lo, hi + 1):
            nh = h - Fraction(1, m)
            if s == 1:
                path.append(m)
                consider(path, nh)
                path.pop()
                continue
            # remaining s-1 terms are each at most 1/m
            if nh - Fraction(s - 1, m) > best_g:
                continue
            path.append(m)
            dfs(nh, s - 1, m)
            path.pop()

    dfs(r, k, 2)
    return UnitSumResult(r - best_g, tuple(best_w))


@dataclass(frozen=True)
class CurtissResult:
    gap: Fraction
    witness: tuple[int, ...]


def curtiss_min_gap(n: int, budget: int = CURTISS_BUDGET) -> CurtissResult:
    """Least ``1 - sum_{i<=n} 1/m_i`` in (0, 1), found by exhaustive search."""
    if n < 1:
        raise DomainError("n must be positive")
    if n > budget:
        raise BudgetExceeded(f"Curtiss search budget is n <= {budget}")
    res = max_unit_sum_under(1, n)
    return CurtissResult(1 - res.best, res.witness)


def unit_fraction_gap(q: int) -> tuple[Fraction, tuple[int, ...]]:
    """Least ``sum (1 - 1/m_i) + ones - q > 0`` with all ``m_i >= 2``.

    For ``p`` in {1, 2} every nonzero hyperstandard deficit is a unit fraction,
    so this is the smallest gap above ``q``.  Writing the sum as
    ``q + r - sum 1/m_i`` with ``q + r`` terms, the answer is the minimum over
    ``r`` of ``r - max_unit_sum_under(r, q + r)``; ``r <= q + 1`` suffices since
    ``q + r`` halves already exceed ``r - 1`` only in that range.
    """
    if q < 0:
        raise DomainError("q must be non-negative")
    if q == 0:
        return Fraction(1, 2), (2,)
    best = None
    for r in range(1, q + 2):
        res = max_unit_sum_under(r, q + r)
        gap = r - res.best
        if best is None or gap < best[0]:
            best = (gap, res.witness)
    return best
