"""The hyperstandard sets Phi_p = {1 - k/(p n) : n >= 1, 0 <= k <= p} within [0, 1]."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import DomainError


class PreconditionError(ValueError):
    """A closure map was applied outside its hypothesis."""


@dataclass(frozen=True, order=True)
class HyperElem:
    """The element ``1 - k/(p n)`` of Phi_p, stored with minimal ``n``."""

    p: int
    n: int
    k: int

    def __post_init__(self):
        if self.p < 1 or self.n < 1 or not 0 <= self.k <= self.p:
            raise DomainError(f"invalid Phi_p witness p={self.p} n={self.n} k={self.k}")

    @property
    def value(self) -> Fraction:
        return 1 - Fraction(self.k, self.p * self.n)

    @property
    def deficit(self) -> Fraction:
        return Fraction(self.k, self.p * self.n)

    def canonical(self) -> "HyperElem":
        e = membership(self.p, self.value)
        assert e is not None
        return e

    @property
    def pair(self) -> tuple[int, int]:
        return (self.n, self.k)


@dataclass(frozen=True, order=True)
class Deficit:
    """A deficit ``j/(p n)`` in (0, 1); it equals ``1 - value`` of a nonzero element."""

    p: int
    j: int
    n: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.j, self.p * self.n)

    def element(self) -> HyperElem:
        return from_deficit(self.p, self.value)


def from_deficit(p: int, d: Fraction) -> HyperElem | None:
    """Canonical element whose deficit is ``d``; ``None`` if not in Phi_p."""
    d = Fraction(d)
    if d < 0 or d > 1:
        return None
    if d == 0:
        return HyperElem(p, 1, 0)
    b = d.denominator
    n = b // math.gcd(b, p)
    k = d * p * n
    assert k.denominator == 1
    if k > p:
        return None
    return HyperElem(p, n, int(k))


def membership(p: int, x: Fraction | int) -> HyperElem | None:
    """Canonical witness of ``x`` in Phi_p, or ``None``.

    With ``1 - x = a/b`` reduced, ``p n (1 - x)`` is integral exactly when
    ``b / gcd(b, p)`` divides ``n``, so the smallest admissible ``n`` decides.
    """
    if p < 1:
        raise DomainError("p must be positive")
    return from_deficit(p, 1 - Fraction(x))


def membership_bruteforce(p: int, x: Fraction | int) -> HyperElem | None:
    """Reference decision by scanning every ``n`` up to the denominator of ``1 - x``."""
    x = Fraction(x)
    if not 0 <= x <= 1:
        return None
    d = 1 - x
    for n in range(1, d.denominator + 1):
        k = p * n * d
        if k.denominator == 1 and k <= p:
            return HyperElem(p, n, int(k))
    return None


def sum_in_phi(p: int, elems) -> HyperElem:
    """Witness that a sum of Phi_p elements lying in [0, 1] is again in Phi_p."""
    total = sum((Fraction(e.value) for e in elems), Fraction(0))
    for e in elems:
        if e.p != p:
            raise PreconditionError("all summands must lie in the same Phi_p")
    if not 0 <= total <= 1:
        raise PreconditionError(
            f"closure under sums needs the total in [0, 1]; got {total}"
        )
    w = membership(p, total)
    if w is None:
        raise AssertionError(f"sum {total} escaped Phi_{p}")
    return w


def adjunct(p: int, g: HyperElem, n: int) -> HyperElem:
    """Witness for ``(n - 1 + g)/n``; from ``g = 1 - k/(p l)`` it is ``(n l, k)``."""
    if n < 1:
        raise DomainError("n must be positive")
    raw = HyperElem(p, n * g.n, g.k)
    assert raw.value == (n - 1 + g.value) / n
    return raw.canonical()


def min_nonzero(p: int) -> Fraction:
    """Least positive element: ``1/p`` for ``p >= 2`` and ``1/2`` for ``p = 1``."""
    return Fraction(1, p) if p >= 2 else Fraction(1, 2)


def max_deficit(p: int) -> Fraction:
    return 1 - min_nonzero(p)


def enumerate_deficits(p: int, upper: Fraction | int, max_n: int) -> list[Deficit]:
    """Distinct deficits ``j/(p n) < upper`` with ``n <= max_n``, strictly decreasing."""
    upper = Fraction(upper)
    seen: dict[Fraction, Deficit] = {}
    for n in range(1, max_n + 1):
        for j in range(1, p + 1):
            v = Fraction(j, p * n)
            if v >= 1 or v >= upper:
                continue
            e = from_deficit(p, v)
            if v not in seen:
                seen[v] = Deficit(p, e.k, e.n)
    return [seen[v] for v in sorted(seen, reverse=True)]


def elements_upto_n(p: int, max_n: int) -> list[Fraction]:
    """All values of Phi_p reachable with ``n <= max_n``, ascending."""
    vals = {1 - Fraction(k, p * n) for n in range(1, max_n + 1) for k in range(p + 1)}
    return sorted(v for v in vals if v >= 0)


def complement_coeff_check(N: int, b: Fraction | int, b_plus: Fraction | int) -> bool:
    """Coefficient rule ``N b+ >= floor((N+1) frac(b)) + N floor(b)``."""
    b, b_plus = Fraction(b), Fraction(b_plus)
    if N < 1 or b < 0 or b_plus < 0:
        raise DomainError("need N >= 1 and non-negative coefficients")
    fl = math.floor(b)
    return N * b_plus >= math.floor((N + 1) * (b - fl)) + N * fl
