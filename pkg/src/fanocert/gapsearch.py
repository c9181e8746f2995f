"""Exact minimal gaps above integers for sums of hyperstandard elements.

``epsilon1(p, q)`` is the least ``g > 0`` such that ``q + g`` is a finite sum
of elements of Phi_p.  The search works with deficits: a sum of ``q + r``
elements, ``m`` of them different from 1, equals ``q + r - D`` where ``D`` is
the total deficit.  So the gap is ``r - D`` and we minimise it over ``r >= 1``
and multisets of at most ``q + r`` deficits with ``D < r``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import DomainError, Magnitude, knuth_tower, mag_div
from .hyperstd import HyperElem, from_deficit, max_deficit, membership, min_nonzero

SYLVESTER_EXACT_CAP = 20


@dataclass(frozen=True)
class SearchCaps:
    depth: int = 64
    den: int = 1 << 32

    @classmethod
    def parse(cls, text: str) -> "SearchCaps":
        """Parse ``"depth=D,den=N"`` (either key optional)."""
        kw = {}
        for part in filter(None, (s.strip() for s in text.split(","))):
            key, _, val = part.partition("=")
            if key not in ("depth", "den") or not val:
                raise DomainError(f"bad caps entry {part!r}")
            kw[key] = int(val)
        return cls(**kw)


PROVEN = "proven"
WITHIN_CAPS = "proven_within_caps"


@dataclass(frozen=True)
class GapCertificate:
    p: int
    q: int
    value: Fraction
    witness: tuple[HyperElem, ...]
    status: str
    caps: SearchCaps
    sylvester_floor: Fraction | Magnitude
    floor_tight: bool

    @property
    def pairs(self) -> list[list[int]]:
        return [[e.n, e.k] for e in self.witness]

    def check(self) -> bool:
        total = sum((e.value for e in self.witness), Fraction(0))
        return (
            self.value > 0
            and total == self.q + self.value
            and all(e.value > 0 and e.p == self.p for e in self.witness)
        )


def _syl(n: int) -> int:
    s = 2
    for _ in range(n - 1):
        s = s * s - s + 1
    return s


def sylvester_floor(p: int, q: int) -> tuple[Fraction | Magnitude, bool]:
    """Lower bound ``1/(S_{(pq+1)p+1} - 1)`` on the gap; the flag says it is exact.

    Past the exact Sylvester cap the weaker ``1/2**(2**n)`` is returned as a
    reciprocal magnitude.
    """
    idx = (p * q + 1) * p + 1
    if idx <= SYLVESTER_EXACT_CAP:
        return Fraction(1, _syl(idx) - 1), True
    return knuth_tower(2, 2, idx).reciprocal_of(), False


def _key(w):
    return tuple(sorted(w))


class _Search:
    """Depth-first branch and bound with non-strict pruning so ties are all seen."""

    def __init__(self, p: int, q: int, caps: SearchCaps, g: Fraction, key):
        self.p, self.q, self.caps = p, q, caps
        self.best_g, self.best_key = g, key
        self.capped = False
        self.dmax = max_deficit(p)
        self.nmax = caps.den // p
        self.nodes = 0

    def consider(self, g: Fraction, pairs: list, r: int):
        ones = self.q + r - len(pairs)
        key = _key(pairs + [(1, 0)] * ones)
        if g < self.best_g or (g == self.best_g and key < self.best_key):
            self.best_g, self.best_key = g, key

    def candidates(self, rho: Fraction, dprev: Fraction, s: int) -> list[Fraction]:
        """Deficits ``d`` with ``(rho - g)/s <= d < rho`` and ``d <= dprev``, descending."""
        p = self.p
        low = (rho - self.best_g) / s
        out = set()
        for j in range(1, p + 1):
            # j/(p n) < rho, j/(p n) <= dprev, j/(p n) >= low, j/(p n) < 1
            n_lo = math.floor(Fraction(j, p) / rho) + 1
            n_lo = max(n_lo, math.ceil(Fraction(j, p) / dprev), 1)
            if j == p:
                n_lo = max(n_lo, 2)
            n_hi = math.floor(Fraction(j, p) / low) if low > 0 else None
            if n_hi is None or n_hi > self.nmax:
                self.capped = True
                n_hi = self.nmax
            for n in range(n_lo, n_hi + 1):
                out.add(Fraction(j, p * n))
        return sorted(out, reverse=True)

    def greedy(self, rho: Fraction, dprev: Fraction, s: int, pairs: list, r: int):
        pairs = list(pairs)
        p = self.p
        for _ in range(s):
            best = None
            for j in range(1, p + 1):
                n = max(math.floor(Fraction(j, p) / rho) + 1, math.ceil(Fraction(j, p) / dprev))
                if j == p:
                    n = max(n, 2)
                if n > self.nmax:
                    continue
                d = Fraction(j, p * n)
                if best is None or d > best:
                    best = d
            if best is None:
                break
            rho -= best
            dprev = best
            pairs.append(from_deficit(p, best).pair)
        self.consider(rho, pairs, r)

    def dfs(self, r: int, rho: Fraction, dprev: Fraction, s: int, pairs: list):
        self.nodes += 1
        self.consider(rho, pairs, r)
        if s == 0:
            return
        # every further deficit is at most dprev
        if rho - s * dprev > self.best_g:
            return
        if len(pairs) >= self.caps.depth:
            self.capped = True
            return
        self.greedy(rho, dprev, s, pairs, r)
        for d in self.candidates(rho, dprev, s):
            if rho - d - (s - 1) * d > self.best_g:
                break  # smaller d only raises this bound
            pairs.append(from_deficit(self.p, d).pair)
            self.dfs(r, rho - d, d, s - 1, pairs)
            pairs.pop()

    def r_values(self):
        r = 1
        while r - (self.q + r) * self.dmax <= self.best_g:
            yield r
            r += 1


def _task(args):
    p, q, caps, g, key, r, d = args
    s = _Search(p, q, caps, g, key)
    s.dfs(r, r - d, d, q + r - 1, [from_deficit(p, d).pair])
    return s.best_g, s.best_key, s.capped, s.nodes


def _initial(p: int, q: int, caps: SearchCaps) -> _Search:
    seed = _Search(p, q, caps, Fraction(10**9), ())
    seed.greedy(Fraction(1), seed.dmax, q + 1, [], 1)
    return seed


def min_sum_exceeding(p: int, q: int, caps: SearchCaps | None = None, workers: int = 1) -> GapCertificate:
    """Certified ``epsilon1(p, q)`` with the tie-broken optimal witness.

    For ``q = 0`` the result is the least nonzero element of Phi_p.
    ``workers > 1`` splits the first branching level across processes; the
    result is identical to the sequential run.
    """
    if p < 1 or q < 0:
        raise DomainError("need p >= 1 and q >= 0")
    caps = caps or SearchCaps()
    srch = _initial(p, q, caps)
    if workers <= 1:
        for r in srch.r_values():
            srch.dfs(r, Fraction(r), srch.dmax, q + r, [])
        capped = srch.capped
    else:
        tasks = []
        for r in srch.r_values():
            srch.consider(Fraction(r), [], r)
            for d in srch.candidates(Fraction(r), srch.dmax, q + r):
                tasks.append((p, q, caps, srch.best_g, srch.best_key, r, d))
        capped = srch.capped
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for g, key, c, _ in ex.map(_task, tasks):
                capped |= c
                if g < srch.best_g or (g == srch.best_g and key < srch.best_key):
                    srch.best_g, srch.best_key = g, key
    value = srch.best_g
    witness = tuple(HyperElem(p, n, k) for n, k in srch.best_key)
    floor, exact = sylvester_floor(p, q)
    tight = exact and value == floor
    status = PROVEN if (tight or not capped) else WITHIN_CAPS
    cert = GapCertificate(p, q, value, witness, status, caps, floor, tight)
    assert cert.check()
    return cert


def epsilon1(p: int, q: int, caps: SearchCaps | None = None) -> Fraction:
    return min_sum_exceeding(p, q, caps).value


@dataclass(frozen=True)
class Epsilon2:
    value: Fraction | None
    lower: Fraction | Magnitude
    upper: Fraction
    status: str


def epsilon2_from(eps1: Fraction, q: int) -> Fraction:
    return eps1 / (q + eps1)


def epsilon2(p: int, q: int, caps: SearchCaps | None = None) -> Epsilon2:
    """``eps1/(q + eps1)``; exact when the gap search closed, else an enclosure."""
    cert = min_sum_exceeding(p, q, caps)
    up = epsilon2_from(cert.value, q)
    if cert.status == PROVEN:
        return Epsilon2(up, up, up, PROVEN)
    fl = cert.sylvester_floor
    if isinstance(fl, Fraction):
        lo = epsilon2_from(fl, q)
    else:
        # eps1 < 1, so eps2 > eps1/(q + 1)
        lo = mag_div(fl, q + 1)
    return Epsilon2(None, lo, up, cert.status)


# ---------------------------------------------------------------------------
# dimension one


@dataclass(frozen=True)
class Dim1GapReport:
    kind: str
    p: int
    gap: Fraction
    gammas: tuple[Fraction, ...]
    t: Fraction
    mult: int

    def identity_holds(self) -> bool:
        if self.kind == "lct":
            return sum(self.gammas) + self.t * self.mult == 1
        if self.kind == "glct":
            return sum(self.gammas) + self.t * self.mult == 2
        return sum(self.gammas) == 2 and all(0 < g < 1 for g in self.gammas)


def lct_gap_dim1(p: int) -> Dim1GapReport:
    """``1 - sup{(1 - g)/m < 1 : g in Phi_p, m >= 1}`` with its witness.

    For ``m = 1`` the supremum is the largest deficit ``1 - min_nonzero(p)``;
    for ``m >= 2`` it is at most ``1/m <= 1/2``, attained by ``g = 0, m = 2``.
    The gap is the distance ``1 - t`` where ``t = (1 - g)/m``.
    """
    if p < 1:
        raise DomainError("p must be positive")
    cands = [(max_deficit(p), min_nonzero(p), 1), (Fraction(1, 2), Fraction(0), 2)]
    # prefer m = 1 on ties
    t, g, m = max(cands, key=lambda c: (c[0], -c[2]))
    return Dim1GapReport("lct", p, 1 - t, (g,), t, m)


def lct_gap_bruteforce(p: int, max_n: int = 12, max_m: int = 6) -> Fraction:
    """Reference value of the lct gap by scanning bounded ``(n, k, m)``."""
    best = Fraction(0)
    for n in range(1, max_n + 1):
        for k in range(p + 1):
            g = 1 - Fraction(k, p * n)
            if g < 0:
                continue
            for m in range(1, max_m + 1):
                t = (1 - g) / m
                if t < 1 and t > best:
                    best = t
    return 1 - best


def glct_max_dim1(p: int, caps: SearchCaps | None = None) -> Dim1GapReport:
    """Largest ``t < 1`` with ``2 = sum g_i + t s`` over Phi_p and ``s >= 1``.

    ``s = 1`` gives ``1 - epsilon1(p, 1)``.  For ``s = 2``, ``2 t`` is 2 minus a
    nonzero element, so the best is ``1 - min_nonzero/2``.  For ``s >= 3``,
    ``t <= 2/3``.
    """
    cert = min_sum_exceeding(p, 1, caps)
    branches = [
        (1 - cert.value, 1, tuple(sorted(e.value for e in cert.witness))),
        (1 - min_nonzero(p) / 2, 2, (min_nonzero(p),)),
        (Fraction(2, 3), 3, ()),
    ]
    t, s, gammas = max(branches, key=lambda b: (b[0], -b[1]))
    return Dim1GapReport("glct", p, 1 - t, gammas, t, s)


def mld_gap_dim1(p: int, caps: SearchCaps | None = None) -> Dim1GapReport:
    """Same gap as the glct one, with the three coefficients summing to 2."""
    g = glct_max_dim1(p, caps)
    if g.mult != 1:
        raise AssertionError("glct optimum expected from a single boundary component")
    coeffs = tuple(sorted(g.gammas + (g.t,)))
    return Dim1GapReport("mld", p, g.gap, coeffs, g.t, 1)


def glct_formula(p: int) -> Fraction:
    return min(Fraction(1, 6), Fraction(1, p * (p + 1)))


@dataclass(frozen=True)
class Eq2Result:
    sat: bool
    gammas: tuple[Fraction, ...] = ()
    bs: tuple[Fraction, ...] = ()

    def check(self, p: int, delta: Fraction) -> bool:
        if not self.sat:
            return True
        return (
            sum(self.gammas) + sum(self.bs) == 2
            and all(membership(p, g) is not None and g > 0 for g in self.gammas)
            and all(1 - delta < b < 1 for b in self.bs)
            and len(self.bs) >= 1
        )


def equation_two_solver(p: int, delta: Fraction, caps: SearchCaps | None = None) -> Eq2Result:
    """Decide ``2 = sum g_i + sum_{j<=m} b_j`` with ``g_i`` nonzero in Phi_p,
    ``b_j`` in ``(1 - delta, 1)`` and ``m >= 1``.

    Three ``b`` values of ``2/3`` solve it once ``delta > 1/3``.  Below that
    ``m`` is 1 or 2: ``m = 1`` needs ``epsilon1(p, 1) < delta`` and ``m = 2``
    needs a nonzero Phi_p-sum in ``(0, 2 delta)``, i.e. the least nonzero
    element below ``2 delta``.
    """
    delta = Fraction(delta)
    if not 0 < delta < 1:
        raise DomainError("delta must lie in (0, 1)")
    if delta > Fraction(1, 3):
        return Eq2Result(True, (), (Fraction(2, 3),) * 3)
    cert = min_sum_exceeding(p, 1, caps)
    if cert.value < delta:
        gs = tuple(sorted(e.value for e in cert.witness if e.value < 1))
        ones = tuple(e.value for e in cert.witness if e.value == 1)
        return Eq2Result(True, gs + ones, (2 - sum(gs) - sum(ones),))
    mn = min_nonzero(p)
    if mn < 2 * delta:
        b = (2 - mn) / 2
        return Eq2Result(True, (mn,), (b, b))
    return Eq2Result(False)


def curve_complement_index(p: int, b: Fraction | int) -> int:
    """Least ``I >= 1`` with ``p I b`` integral; asserts ``I <= p (p + 1)``."""
    b = Fraction(b)
    if membership(p, b) is None or not (b <= 1 - Fraction(1, p * (p + 1)) or b == 1):
        raise DomainError(
            f"b must lie in Phi_{p} intersected with [0, 1 - 1/(p(p+1))] or be 1; got {b}"
        )
    c = b.denominator
    idx = c // math.gcd(c, p)
    assert (p * idx * b).denominator == 1
    assert idx <= p * (p + 1)
    return idx


def cy_witness_check(target: Fraction | int, coeffs) -> bool:
    coeffs = [Fraction(c) for c in coeffs]
    return sum(coeffs, Fraction(0)) == Fraction(target) and all(0 < c <= 1 for c in coeffs)
