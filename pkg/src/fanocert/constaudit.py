"""Registry and audit of the explicit constants.

Constants are expression trees over integer literals, factorials, integer
powers with exact integer exponents, products and reciprocals.  Each tree has
a prime-exponent normal form (exact, so identities are decided by comparing
dictionaries) and a :class:`Magnitude` enclosure (for orderings between
numbers too large to write down).
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources

from .exactnum import (
    CompareOutcome,
    DomainError,
    Magnitude,
    factorial_mag,
    mag_add_one,
    mag_compare,
    mag_from_rational,
    mag_loglog10_bounds,
    mag_mul,
    mag_pow,
    precision,
)

E5 = 42**5


# ---------------------------------------------------------------------------
# expression trees


@dataclass(frozen=True)
class Int:
    n: int


@dataclass(frozen=True)
class Fact:
    n: int


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Prod:
    factors: tuple


@dataclass(frozen=True)
class Recip:
    inner: object


@dataclass(frozen=True)
class IntSet:
    members: tuple[int, ...]


ConstExpr = Int | Fact | Pow | Prod | Recip


def _factor_int(n: int) -> Counter:
    if n < 1:
        raise DomainError("only positive integers factor here")
    out: Counter = Counter()
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] += 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] += 1
    return out


def _primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return [i for i, v in enumerate(sieve) if v]


def legendre(n: int) -> Counter:
    """Prime exponents of ``n!``."""
    out: Counter = Counter()
    for p in _primes_upto(n):
        e, pk = 0, p
        while pk <= n:
            e += n // pk
            pk *= p
        out[p] = e
    return out


def normal_form(e) -> dict[int, int]:
    """Prime-exponent map of an expression (negative exponents for reciprocals)."""
    if isinstance(e, Int):
        return dict(_factor_int(e.n))
    if isinstance(e, Fact):
        return dict(legendre(e.n))
    if isinstance(e, Pow):
        return {p: k * e.exp for p, k in normal_form(e.base).items()}
    if isinstance(e, Prod):
        acc: Counter = Counter()
        for f in e.factors:
            for p, k in normal_form(f).items():
                acc[p] += k
        return {p: k for p, k in acc.items() if k}
    if isinstance(e, Recip):
        return {p: -k for p, k in normal_form(e.inner).items()}
    raise DomainError(f"no normal form for {e!r}")


def to_magnitude(e) -> Magnitude:
    if isinstance(e, Int):
        return mag_from_rational(e.n)
    if isinstance(e, Fact):
        return factorial_mag(e.n)
    if isinstance(e, Pow):
        if e.exp == 0:
            return mag_from_rational(1)
        m = mag_pow(to_magnitude(e.base), abs(e.exp))
        return m if e.exp > 0 else m.reciprocal_of()
    if isinstance(e, Prod):
        m = mag_from_rational(1)
        for f in e.factors:
            m = mag_mul(m, to_magnitude(f))
        return m
    if isinstance(e, Recip):
        return to_magnitude(e.inner).reciprocal_of()
    raise DomainError(f"no magnitude for {e!r}")


def evaluate_exact(e, max_bits: int = 1 << 22) -> Fraction:
    """Exact value, refusing results past ``max_bits``."""
    if isinstance(e, Int):
        return Fraction(e.n)
    if isinstance(e, Fact):
        return Fraction(math.factorial(e.n))
    if isinstance(e, Pow):
        b = evaluate_exact(e.base, max_bits)
        size = max(b.numerator.bit_length(), b.denominator.bit_length())
        if size * abs(e.exp) > max_bits:
            raise DomainError("exact value too large")
        return b**e.exp
    if isinstance(e, Prod):
        return math.prod((evaluate_exact(f, max_bits) for f in e.factors), start=Fraction(1))
    if isinstance(e, Recip):
        return 1 / evaluate_exact(e.inner, max_bits)
    raise DomainError(f"cannot evaluate {e!r}")


def value_from_normal_form(nf: dict[int, int]) -> Fraction:
    v = Fraction(1)
    for p, k in nf.items():
        v *= Fraction(p) ** k
    return v


def shrink_exponents(e, modulus: int = 7):
    """Same tree with every power exponent reduced mod ``modulus`` (surrogate for testing)."""
    if isinstance(e, Pow):
        return Pow(shrink_exponents(e.base, modulus), e.exp % modulus)
    if isinstance(e, Prod):
        return Prod(tuple(shrink_exponents(f, modulus) for f in e.factors))
    if isinstance(e, Recip):
        return Recip(shrink_exponents(e.inner, modulus))
    return e


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(\d+|[()*/^!+\-{},])")


def _tokens(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DomainError(f"unexpected character at {pos} in {text!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        t = self.peek()
        if t is None or (want is not None and t != want):
            raise DomainError(f"expected {want or 'token'}, got {t!r}")
        self.i += 1
        return t

    def done(self):
        if self.peek() is not None:
            raise DomainError(f"trailing input at {self.peek()!r}")

    # constant expressions
    def expr(self):
        factors = [self.term()]
        while self.peek() in ("*", "/"):
            op = self.take()
            t = self.term()
            factors.append(Recip(t) if op == "/" else t)
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def term(self):
        base = self.atom()
        if self.peek() == "!":
            self.take()
            if not isinstance(base, Int):
                raise DomainError("factorial applies to integer literals only")
            base = Fact(base.n)
        if self.peek() == "^":
            self.take()
            base = Pow(base, self.int_atom())
        return base

    def atom(self):
        t = self.peek()
        if t == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if t is not None and t.isdigit():
            return Int(int(self.take()))
        raise DomainError(f"unexpected token {t!r}")

    # integer exponent arithmetic: + - * ^ and parentheses
    def int_atom(self) -> int:
        t = self.peek()
        if t == "(":
            self.take()
            v = self.int_sum()
            self.take(")")
            return v
        if t == "-":
            self.take()
            return -self.int_atom()
        if t is not None and t.isdigit():
            return int(self.take())
        raise DomainError(f"bad exponent token {t!r}")

    def int_sum(self) -> int:
        v = self.int_prod()
        while self.peek() in ("+", "-"):
            if self.take() == "+":
                v += self.int_prod()
            else:
                v -= self.int_prod()
        return v

    def int_prod(self) -> int:
        v = self.int_pow()
        while self.peek() == "*":
            self.take()
            v *= self.int_pow()
        return v

    def int_pow(self) -> int:
        v = self.int_atom()
        if self.peek() == "^":
            self.take()
            e = self.int_pow()
            if e < 0:
                raise DomainError("negative exponent inside an exponent")
            v = v**e
        return v


def parse_expr(text: str):
    text = text.strip()
    if text.startswith("{"):
        inner = text.strip("{} ")
        return IntSet(tuple(sorted(int(x) for x in inner.split(","))))
    p = _Parser(text)
    e = p.expr()
    p.done()
    return e


@dataclass(frozen=True)
class NamedConstant:
    id: str
    location: str
    source: str
    expr: object


def parse_manifest(text: str) -> dict[str, NamedConstant]:
    out: dict[str, NamedConstant] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = [s.strip() for s in line.split("|")]
        if len(parts) != 3:
            raise DomainError(f"manifest line {lineno}: expected 'id | location | expression'")
        cid, loc, src = parts
        if cid in out:
            raise DomainError(f"manifest line {lineno}: duplicate id {cid!r}")
        out[cid] = NamedConstant(cid, loc, src, parse_expr(src))
    return out


def load_registry() -> dict[str, NamedConstant]:
    text = resources.files("fanocert").joinpath("constants_manifest.txt").read_text()
    return parse_manifest(text)


REGISTRY = load_registry()


def get(cid: str) -> NamedConstant:
    try:
        return REGISTRY[cid]
    except KeyError:
        raise DomainError(f"unknown constant id {cid!r}") from None


@dataclass(frozen=True)
class ConstantValue:
    id: str
    normal_form: dict[int, int] | None
    magnitude: Magnitude | None
    members: tuple[int, ...] | None = None


def eval_constant(cid: str) -> ConstantValue:
    c = get(cid)
    if isinstance(c.expr, IntSet):
        return ConstantValue(cid, None, None, c.expr.members)
    return ConstantValue(cid, normal_form(c.expr), to_magnitude(c.expr))


# ---------------------------------------------------------------------------
# audits

VERIFIED = "verified"
FALSIFIED = "falsified"
INCONCLUSIVE = "inconclusive"
EXACT = "exact_normal_form"
MAGCMP = "magnitude_compare"


@dataclass(frozen=True)
class AuditResult:
    claim: str
    verdict: str
    method: str
    evidence: str


def identity_check(claim: str, lhs, rhs) -> AuditResult:
    a, b = normal_form(lhs), normal_form(rhs)
    ok = a == b
    ev = "prime maps agree" if ok else f"prime maps differ at {sorted(set(a.items()) ^ set(b.items()))[:4]}"
    return AuditResult(claim, VERIFIED if ok else FALSIFIED, EXACT, ev)


def _i1_expr(extra: int = 0):
    return Prod((Int(42), Pow(Int(84), 128 * E5 + 168 + extra)))


def verify_identity_I0(perturb: int = 0) -> AuditResult:
    """``2 * 84^(256 e + 338) == 8 * (42 * 84^(128 e + 168))^2`` with ``e = 42^5``."""
    lhs = Prod((Int(2), Pow(Int(84), 256 * E5 + 338 + perturb)))
    rhs = Prod((Int(8), Pow(_i1_expr(), 2)))
    return identity_check("I0 = 8 * I1^2", lhs, rhs)


def verify_volume_decomposition(perturb: int = 0) -> AuditResult:
    """``84^(384 e + 507) == I0 * I1``."""
    lhs = Pow(Int(84), 384 * E5 + 507 + perturb)
    rhs = Prod((get("I0").expr, get("I1").expr))
    return identity_check("84^(384e+507) = I0 * I1", lhs, rhs)


def coefficient_identity() -> bool:
    return 2 * 84**2 == 8 * 42**2 == 14112


def compare_exprs(claim: str, a, b, want=CompareOutcome.LT, max_bits: int = 512) -> AuditResult:
    """Certified ordering; exact when both sides evaluate cheaply."""
    try:
        va, vb = evaluate_exact(a, 1 << 18), evaluate_exact(b, 1 << 18)
        out = CompareOutcome.LT if va < vb else CompareOutcome.GT if va > vb else CompareOutcome.EQ
        method, ev = EXACT, "exact integer comparison"
    except DomainError:
        bits = 96
        while True:
            with precision(bits):
                out = mag_compare(to_magnitude(a), to_magnitude(b))
            if out is not CompareOutcome.INCONCLUSIVE or bits >= max_bits:
                break
            bits *= 2
        method, ev = MAGCMP, f"enclosure comparison at {bits} bits"
    if out is want:
        verdict = VERIFIED
    elif out is CompareOutcome.INCONCLUSIVE:
        verdict = INCONCLUSIVE
    else:
        verdict = FALSIFIED
    return AuditResult(claim, verdict, method, f"{ev}: {out.value}")


ORDERING_CHAIN = ["I(2,1)", "lcm-q-Ng-bound", "lcm-q-2Ng-bound", "nonplt-index-bound", "N21-bound", "threefold-N-bound"]


def lcm_table() -> dict[int, int]:
    """``lcm(q, max(6, q * (q(q+1))!))`` for ``q = 1..6``."""
    return {q: math.lcm(q, max(6, q * math.factorial(q * (q + 1)))) for q in range(1, 7)}


def verify_orderings() -> list[AuditResult]:
    out = []
    for a, b in zip(ORDERING_CHAIN, ORDERING_CHAIN[1:]):
        out.append(compare_exprs(f"{a} < {b}", get(a).expr, get(b).expr))
    table = lcm_table()
    top = max(table.values())
    six42 = 6 * math.factorial(42)
    ok = top == six42 and top < 36 * math.factorial(42)
    out.append(AuditResult(
        "max lcm(q, max(6, q (q(q+1))!)) = 6 * 42! < 36 * 42!",
        VERIFIED if ok else FALSIFIED, EXACT, f"max at q={max(table, key=table.get)}",
    ))
    doubled = max(math.lcm(q, 2 * max(6, q * math.factorial(q * (q + 1)))) for q in range(1, 7))
    ok2 = doubled < 72 * math.factorial(42)
    out.append(AuditResult(
        "max lcm(q, 2 max(6, q (q(q+1))!)) < 72 * 42!", VERIFIED if ok2 else FALSIFIED, EXACT,
        f"max = 12 * 42! is {doubled == 12 * math.factorial(42)}",
    ))
    members = eval_constant("nonexc-surface-N-set").members
    ok3 = max(members) < 66
    out.append(AuditResult("max {1,2,3,4,6} < 66", VERIFIED if ok3 else FALSIFIED, EXACT, str(members)))
    return out


def loglog10_window(cid: str) -> tuple[Fraction, Fraction]:
    return mag_loglog10_bounds(to_magnitude(get(cid).expr))


def verify_V0_approximation(cid: str = "V0", lo=Fraction(1140, 100), hi=Fraction(1142, 100)) -> AuditResult:
    """``log10 log10`` of the constant inside ``(lo, hi)`` with width below 0.01."""
    a, b = loglog10_window(cid)
    ok = lo < a and b < hi and b - a < Fraction(1, 100)
    ev = f"log10 log10 in [{float(a):.6f}, {float(b):.6f}]"
    return AuditResult(f"log10 log10 {cid} in ({float(lo)}, {float(hi)})", VERIFIED if ok else FALSIFIED, MAGCMP, ev)


def surface_index_bound(eps: Fraction | int | str):
    """``(2/e)^floor(128/e^5)`` as an expression; requires ``e > 0`` and ``e^2 < 1/3``."""
    eps = Fraction(eps)
    if eps <= 0 or 3 * eps.numerator**2 >= eps.denominator**2:
        raise DomainError("needs 0 < e and e^2 < 1/3")
    expo = math.floor(128 / eps**5)
    base = 2 / eps
    if base.denominator == 1:
        return Pow(Int(base.numerator), expo)
    return Prod((Pow(Int(base.numerator), expo), Recip(Pow(Int(base.denominator), expo))))


def verify_threefold_delta_chain() -> list[AuditResult]:
    """Consistency of the threefold gap formulas at ``a = I1 + 1``."""
    out = []
    I = to_magnitude(get("I1").expr)
    a = mag_add_one(I)
    # (i) a - I = 1 and a - 1 = I; checked exactly on exponent-reduced surrogates
    ok = True
    for m in (3, 5, 7):
        Is = evaluate_exact(shrink_exponents(get("I1").expr, m))
        aa = Is + 1
        ok &= (aa - Is) / (Is * (aa - 1)) == 1 / Is**2
    out.append(AuditResult("(a - I)/(I (a - 1)) = 1/I^2 at a = I + 1", VERIFIED if ok else FALSIFIED, EXACT,
                           "a - I = 1 and a - 1 = I"))

    def cmp(claim, x, y, want):
        o = mag_compare(x, y)
        v = VERIFIED if o is want else INCONCLUSIVE if o is CompareOutcome.INCONCLUSIVE else FALSIFIED
        return AuditResult(claim, v, MAGCMP, o.value)

    with precision(128):
        lhs = mag_mul(54, mag_mul(mag_pow(a, 3), I))
        rhs = mag_mul(64, mag_pow(I, 4))
        out.append(cmp("54 (I+1)^3 I < 64 I^4", lhs, rhs, CompareOutcome.LT))
        for label, M in (("2", mag_from_rational(2)), ("27 (I+1)^3", mag_mul(27, mag_pow(a, 3)))):
            out.append(cmp(f"2 I M > 42^2 at M = {label}", mag_mul(2, mag_mul(I, M)),
                           mag_from_rational(42**2), CompareOutcome.GT))

    def f(x, aa):
        return Fraction(aa - x, x * (aa - 1))

    pairs = [(2, 3, 10), (2, 5, 10), (Fraction(3, 2), 7, 100), (5, 9, 11)]
    ok = all(f(x1, aa) > f(x2, aa) for x1, x2, aa in pairs)
    out.append(AuditResult("(a - x)/(x (a - 1)) strictly decreasing in x", VERIFIED if ok else FALSIFIED, EXACT,
                           f"f(2) = {f(2, 10)} > f(3) = {f(3, 10)} at a = 10"))
    return out


def audit_all_constants() -> list[AuditResult]:
    out = [verify_identity_I0(), verify_volume_decomposition()]
    out += verify_orderings()
    out.append(verify_V0_approximation())
    out += verify_threefold_delta_chain()
    e = surface_index_bound(Fraction(1, 42))
    ok = e == Pow(Int(84), 128 * E5)
    out.append(AuditResult("(2/e)^floor(128/e^5) at e = 1/42 is 84^(128 * 42^5)",
                           VERIFIED if ok else FALSIFIED, EXACT, f"exponent {e.exp}"))
    return out
