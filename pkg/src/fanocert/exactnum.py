"""Exact rationals and certified log-tower magnitudes.

A :class:`Magnitude` encloses a positive real ``x`` by a level ``l`` and a
rational interval ``[lo, hi]`` such that ``log2`` applied ``l`` times to ``x``
(or to ``1/x`` when ``reciprocal`` is set) lies in ``[lo, hi]``.  Every
operation rounds outward, so results are always sound enclosures; they may be
wider than necessary but never wrong.

Internally the arithmetic works on *points* ``(level, body)`` denoting the
exact real ``E^level(body)`` where ``E(t) = 2**t``.  Each point operation takes
a rounding direction (``DOWN`` or ``UP``) and returns a point that bounds the
exact result from that side.  A magnitude is then just a pair of endpoints.
"""

from __future__ import annotations

import contextvars
import enum
import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

ExactRational = Fraction

DEFAULT_PRECISION = 96
FACTORIAL_CAP = 100_000
TWO64 = 1 << 64
# Bodies above this are re-expressed one level up; level >= 1 bodies below
# ``_DEMOTE`` are pushed one level down.
_PROMOTE = TWO64
_DEMOTE = 64

DOWN = -1
UP = 1

_precision = contextvars.ContextVar("fanocert_precision", default=DEFAULT_PRECISION)


class DomainError(ValueError):
    """Input outside the domain of an operation."""


class CapExceeded(ValueError):
    """An exact evaluation would exceed its configured size cap."""


class InconclusiveError(ArithmeticError):
    """A certified decision could not be reached at the available precision."""


class CompareOutcome(enum.Enum):
    LT = "LT"
    GT = "GT"
    EQ = "EQ"
    INCONCLUSIVE = "INCONCLUSIVE"


def get_precision() -> int:
    return _precision.get()


@contextmanager
def precision(bits: int):
    """Temporarily set the working precision (in bits) for this context."""
    if bits < 16:
        raise ValueError("precision must be at least 16 bits")
    token = _precision.set(bits)
    try:
        yield bits
    finally:
        _precision.reset(token)


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"a/b"`` or an integer literal; decimals are rejected."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    s = str(text).strip()
    if any(c in s for c in ".eE"):
        raise DomainError(f"decimal literals are not accepted: {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"not a rational literal: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------------------
# directed rational primitives


def round_dir(q: Fraction, d: int, bits: int | None = None) -> Fraction:
    """Round ``q`` to ``bits`` significant bits in direction ``d``.

    Rationals whose numerator and denominator both fit in ``bits`` are kept
    exactly.
    """
    bits = bits or get_precision()
    if q == 0:
        return Fraction(0)
    if q < 0:
        return -round_dir(-q, -d, bits)
    a, b = q.numerator, q.denominator
    if a.bit_length() <= bits and b.bit_length() <= bits:
        return q
    shift = bits - (a.bit_length() - b.bit_length())
    if shift >= 0:
        m, rem = divmod(a << shift, b)
    else:
        m, rem = divmod(a, b << -shift)
    if rem and d == UP:
        m += 1
    if shift >= 0:
        return Fraction(m, 1 << shift)
    return Fraction(m << -shift)


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def log2_bounds(x: Fraction | int, bits: int | None = None) -> tuple[Fraction, Fraction]:
    """Certified ``[lo, hi]`` containing ``log2(x)`` by binary digit extraction.

    The result is exact (``lo == hi``) iff ``x`` is a power of two.
    """
    x = Fraction(x)
    if x <= 0:
        raise DomainError("log2 of a non-positive number")
    a, b = x.numerator, x.denominator
    if _is_pow2(a) and _is_pow2(b):
        k = Fraction(a.bit_length() - b.bit_length())
        return k, k
    bits = bits or get_precision()
    k = a.bit_length() - b.bit_length()
    if (a << max(0, -k)) < (b << max(0, k)):
        k -= 1
    w = bits + 8
    s = w - k
    if s >= 0:
        ylo, rem = divmod(a << s, b)
    else:
        ylo, rem = divmod(a, b << -s)
    yhi = ylo + (1 if rem else 0)
    one = 1 << w
    two = one << 1

    y, acc = ylo, 0
    for _ in range(bits):
        y = (y * y) >> w
        acc <<= 1
        if y >= two:
            y >>= 1
            acc |= 1
    lo = k + Fraction(acc, 1 << bits)

    y, acc = yhi, 0
    for _ in range(bits):
        y = -((-y * y) >> w)
        acc <<= 1
        if y >= two:
            y = (y + 1) >> 1
            acc |= 1
    hi = k + Fraction(acc + 1, 1 << bits)
    return lo, hi


@lru_cache(maxsize=16)
def _root_table(w: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    # fixed-point enclosures of 2**(2**-i), scale 2**w, i = 1..w
    one = 1 << w
    lo, hi = [], []
    clo = chi = 2 * one
    for _ in range(w):
        clo = math.isqrt(clo * one)
        r = math.isqrt(chi * one)
        chi = r if r * r == chi * one else r + 1
        lo.append(clo)
        hi.append(chi)
    return tuple(lo), tuple(hi)


def exp2_bounds(r: Fraction | int, bits: int | None = None) -> tuple[Fraction, Fraction]:
    """Certified ``[lo, hi]`` containing ``2**r``; exact for integral ``r``."""
    r = Fraction(r)
    if r.denominator == 1:
        v = Fraction(2) ** int(r)
        return v, v
    bits = bits or get_precision()
    f = math.floor(r)
    frac = r - f
    w = bits + 24
    los, his = _root_table(w)
    one = 1 << w
    flo = (frac.numerator << w) // frac.denominator
    fhi = -((-frac.numerator << w) // frac.denominator)

    vlo = one
    for i in range(w):
        if flo >> (w - 1 - i) & 1:
            vlo = (vlo * los[i]) >> w
    if fhi >= one:
        vhi = 2 * one
    else:
        vhi = one
        for i in range(w):
            if fhi >> (w - 1 - i) & 1:
                vhi = -((-vhi * his[i]) >> w)
    scale = Fraction(2) ** f
    lo = round_dir(Fraction(vlo, one) * scale, DOWN, bits)
    hi = round_dir(Fraction(vhi, one) * scale, UP, bits)
    return lo, hi


def _log2_dir(x: Fraction, d: int) -> Fraction:
    lo, hi = log2_bounds(x)
    return lo if d == DOWN else hi


def _exp2_dir(x: Fraction, d: int) -> Fraction:
    lo, hi = exp2_bounds(x)
    return lo if d == DOWN else hi


# ---------------------------------------------------------------------------
# points: (level, body) denotes E^level(body); values are >= 0

_ZERO = (0, Fraction(0))
_ONE = (0, Fraction(1))


def _tiny() -> Fraction:
    return Fraction(1, 1 << (4 * get_precision()))


def _norm(pt, d):
    lvl, r = pt
    while lvl >= 1 and r < _DEMOTE:
        r = _exp2_dir(r, d)
        lvl -= 1
    while r > _PROMOTE:
        r = _log2_dir(r, d)
        lvl += 1
    return (lvl, r)


def _lg(pt, d):
    lvl, r = pt
    if lvl >= 1:
        return _norm((lvl - 1, r), d)
    if r < 1:
        raise DomainError("internal log2 of a value below 1")
    return (0, _log2_dir(r, d))


def _ex(pt, d):
    lvl, r = pt
    return _norm((lvl + 1, r), d)


def _cmp_iv(lo, hi, k, s):
    """Sign of ``x - E^k(s)`` for the real ``x`` enclosed by ``[lo, hi]``."""
    while k > 0:
        if hi < 1:
            return -1
        hi = _log2_dir(hi, UP)
        lo = _log2_dir(lo, DOWN) if lo is not None and lo > 0 else None
        k -= 1
    if hi < s:
        return -1
    if lo is not None and lo > s:
        return 1
    if lo == hi == s:
        return 0
    return None


_EXACT_LOWER_BITS = 1 << 16


def _lower_exact(pt, target):
    """Re-express ``pt`` at ``target`` level exactly, or ``None`` if too costly."""
    lvl, r = pt
    while lvl > target:
        if r.denominator != 1 or r > _EXACT_LOWER_BITS:
            return None
        r = Fraction(1 << int(r))
        lvl -= 1
    return (lvl, r)


def _cmp_once(p, q):
    (lp, rp), (lq, rq) = p, q
    if lp != lq:
        lo_pt, hi_pt, sign = (p, q, 1) if lp < lq else (q, p, -1)
        dropped = _lower_exact(hi_pt, lo_pt[0])
        if dropped is not None:
            a, b = lo_pt[1], dropped[1]
            return sign * ((a > b) - (a < b))
    if lp == lq:
        return (rp > rq) - (rp < rq)
    if lp < lq:
        return _cmp_iv(rp, rp, lq - lp, rq)
    c = _cmp_iv(rq, rq, lp - lq, rp)
    return None if c is None else -c


def _cmp(p, q):
    """Certified sign of ``p - q`` for exact points, or ``None``."""
    c = _cmp_once(p, q)
    bits = get_precision()
    for extra in (2, 4):
        if c is not None:
            break
        with precision(bits * extra):
            c = _cmp_once(p, q)
    return c


def _is_one(pt) -> bool:
    lvl, r = pt
    return (lvl == 0 and r == 1) or (lvl == 1 and r == 0)


def _is_zero(pt) -> bool:
    return pt[0] == 0 and pt[1] == 0


def _add(p, q, d):
    if p[0] == 0 and q[0] == 0:
        return _norm((0, round_dir(p[1] + q[1], d)), d)
    if _is_zero(p):
        return q
    if _is_zero(q):
        return p
    c = _cmp(p, q)
    if (c is not None and c < 0) or (c is None and q > p):
        p, q = q, p
    big, small = p, q
    if small[0] == 0 and small[1] < 1:
        if d == DOWN:
            return big
        small = _ONE

    if big[0] == 1 and small[0] <= 1:
        a = big[1]
        b_lo = small[1] if small[0] == 1 else _log2_dir(small[1], DOWN)
        b_hi = small[1] if small[0] == 1 else _log2_dir(small[1], UP)
        if d == DOWN:
            gap = a - b_lo
            if gap > 4 * get_precision():
                return big
            slack = _log2_dir(1 + _exp2_dir(-gap, DOWN), DOWN)
        else:
            gap = a - b_hi
            if gap > 4 * get_precision():
                slack = 2 * _tiny()
            else:
                slack = _log2_dir(1 + _exp2_dir(-gap, UP), UP)
        return _norm((1, round_dir(a + slack, d)), d)

    if d == DOWN:
        return big
    lg_big = (big[0] - 1, big[1])
    lg_small = _lg(small, UP)
    sep = _add(lg_small, (0, Fraction(4 * get_precision())), UP)
    if _cmp(lg_big, sep) == 1:
        slack = 2 * _tiny()
    elif c is not None:
        slack = Fraction(1)
    else:
        raise InconclusiveError("cannot order nearly equal summands")
    return _ex(_add(_norm(lg_big, UP), (0, slack), UP), UP)


def _sub(p, q, d):
    """``p - q`` for exact points with ``p >= q``."""
    if p[0] == 0 and q[0] == 0:
        v = p[1] - q[1]
        if v < 0:
            raise InconclusiveError("negative difference")
        return _norm((0, round_dir(v, d)), d)
    if _is_zero(q) or d == UP:
        if d == UP and q[0] >= 1 and p[0] == 0:
            raise InconclusiveError("negative difference")
        return p
    if p[0] == 0:
        raise InconclusiveError("negative difference")
    if q[0] == 0 and q[1] < 1:
        q = _ONE
    if p[0] == 1 and q[0] <= 1:
        a = p[1]
        b_hi = q[1] if q[0] == 1 else _log2_dir(q[1], UP)
        gap = a - b_hi
        if gap <= 0:
            raise InconclusiveError("difference not certifiably positive")
        if gap > 4 * get_precision():
            slack = -2 * _tiny()
        else:
            t = _exp2_dir(-gap, UP)
            if t >= 1:
                raise InconclusiveError("difference not certifiably positive")
            slack = _log2_dir(1 - t, DOWN)
        return _norm((1, round_dir(a + slack, DOWN)), DOWN)
    lg_p = _norm((p[0] - 1, p[1]), DOWN)
    lg_q = _lg(q, UP)
    sep = _add(lg_q, (0, Fraction(4 * get_precision())), UP)
    if _cmp(lg_p, sep) != 1:
        raise InconclusiveError("difference not certifiably separated")
    return _ex(_sub(lg_p, (0, 2 * _tiny()), DOWN), DOWN)


def _mul(p, q, d):
    if _is_zero(p) or _is_zero(q):
        return _ZERO
    if p[0] == 0 and q[0] == 0:
        return _norm((0, round_dir(p[1] * q[1], d)), d)
    if p[0] == 0 and p[1] < 1:
        p, q = q, p
    if q[0] == 0 and q[1] < 1:
        return _div(p, (0, 1 / q[1]), d)
    return _ex(_add(_lg(p, d), _lg(q, d), d), d)


def _div(p, q, d):
    if _is_zero(q):
        raise DomainError("division by zero")
    if p[0] == 0 and q[0] == 0:
        return _norm((0, round_dir(p[1] / q[1], d)), d)
    if q[0] == 0 and q[1] <= 1:
        return _mul(p, (0, 1 / q[1]), d)
    if p[0] == 0 and p[1] < 1:
        raise InconclusiveError("quotient below representable range")
    return _ex(_sub(_lg(p, d), _lg(q, -d), d), d)


_EXACT_POW_BITS = 1 << 16


def _pow(p, e, d):
    """``p ** e`` for a base ``p >= 1`` and exponent ``e >= 0``."""
    if _is_one(p) or _is_zero(e):
        return _ONE
    if p[0] == 0 and e[0] == 0 and e[1].denominator == 1:
        k = int(e[1])
        size = max(p[1].numerator.bit_length(), p[1].denominator.bit_length())
        if size * k <= _EXACT_POW_BITS:
            return _norm((0, round_dir(p[1] ** k, d)), d)
    return _ex(_mul(_lg(p, d), e, d), d)


# ---------------------------------------------------------------------------
# signed points: (reciprocal, point); a reciprocal point has value 1/E^l(r)


def _sp(rec, pt):
    if not rec and pt[0] == 0 and 0 < pt[1] < 1:
        return (True, (0, 1 / pt[1]))
    if rec and pt[0] == 0 and pt[1] < 1:
        return (False, (0, 1 / pt[1]))
    return (rec, pt)


def _spcmp(x, y):
    (rx, px), (ry, py) = x, y
    if not rx and not ry:
        return _cmp(px, py)
    if rx and ry:
        c = _cmp(px, py)
        return None if c is None else -c
    if rx:
        return 0 if _is_one(px) and _is_one(py) else -1
    return 0 if _is_one(px) and _is_one(py) else 1


def _spmul(x, y, d):
    (rx, px), (ry, py) = x, y
    if not rx and not ry:
        return _sp(False, _mul(px, py, d))
    if rx and ry:
        return (True, _mul(px, py, -d))
    num, den = (px, py) if not rx else (py, px)
    c = _cmp(num, den)
    if c is None:
        raise InconclusiveError("ratio too close to 1 to place")
    if c >= 0:
        return _sp(False, _div(num, den, d))
    return (True, _div(den, num, -d))


def _spadd(x, y, d):
    (rx, px), (ry, py) = x, y
    if not rx and not ry:
        return _sp(False, _add(px, py, d))
    if rx and ry:
        if px[0] == 0 and py[0] == 0:
            return _sp(False, (0, round_dir(1 / px[1] + 1 / py[1], d)))
        c = _cmp(px, py)
        small = px if c is not None and c <= 0 else py
        if d == DOWN:
            return (True, small if c is not None else max(px, py))
        # 1/X + 1/Y <= 2/min(X, Y)
        return _sp(True, _div(small, (0, Fraction(2)), DOWN))
    rec, non = (px, py) if rx else (py, px)
    if rec[0] == 0:
        return _sp(False, _add(non, (0, 1 / rec[1]), d))
    if d == DOWN:
        return _sp(False, non)
    return _sp(False, _add(non, _ONE, UP))


def _lift(pt, target, d):
    lvl, r = pt
    while lvl < target:
        if r < 1:
            raise InconclusiveError("enclosure too wide to represent at one level")
        r = _log2_dir(r, d)
        lvl += 1
    return r


# ---------------------------------------------------------------------------
# Magnitude


@dataclass(frozen=True)
class Magnitude:
    """Certified enclosure of a positive real as an iterated-log interval."""

    reciprocal: bool
    level: int
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.level < 0:
            raise DomainError("negative level")
        if self.lo > self.hi:
            raise DomainError("empty enclosure")
        if self.level == 0 and self.lo <= 0:
            raise DomainError("level-0 body must be positive")
        if self.level > 0 and self.lo < 0:
            raise DomainError("level>0 body must be non-negative")
        if self.reciprocal and self.level == 0 and self.lo < 1:
            raise DomainError("reciprocal body must be >= 1")

    # endpoints as signed points
    @property
    def lower(self):
        if self.reciprocal:
            return _sp(True, (self.level, self.hi))
        return _sp(False, (self.level, self.lo))

    @property
    def upper(self):
        if self.reciprocal:
            return _sp(True, (self.level, self.lo))
        return _sp(False, (self.level, self.hi))

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def normalized(self) -> "Magnitude":
        rec, lvl, lo, hi = self.reciprocal, self.level, self.lo, self.hi
        if lvl == 0 and not rec and hi < 1:
            rec, lo, hi = True, 1 / hi, 1 / lo
        elif lvl == 0 and rec and lo < 1:
            rec, lo, hi = False, 1 / hi, 1 / lo
        # a reciprocal body is an upper bound on the value when rounded down
        dlo, dhi = DOWN, UP
        while lvl >= 1 and hi < _DEMOTE:
            lo, hi = _exp2_dir(lo, dlo), _exp2_dir(hi, dhi)
            lvl -= 1
        while hi > _PROMOTE and lo >= 1:
            lo, hi = _log2_dir(lo, dlo), _log2_dir(hi, dhi)
            lvl += 1
        if (rec, lvl, lo, hi) == (self.reciprocal, self.level, self.lo, self.hi):
            return self
        return Magnitude(rec, lvl, lo, hi)

    def at_level(self, level: int) -> "Magnitude":
        """Re-express at a higher level (exact when bodies are powers of two)."""
        if level < self.level:
            raise DomainError("at_level only lifts")
        lo = _lift((self.level, self.lo), level, DOWN)
        hi = _lift((self.level, self.hi), level, UP)
        return Magnitude(self.reciprocal, level, lo, hi)

    def reciprocal_of(self) -> "Magnitude":
        if self.level == 0 and not self.reciprocal and self.lo < 1:
            return Magnitude(False, 0, 1 / self.hi, 1 / self.lo).normalized()
        return Magnitude(not self.reciprocal, self.level, self.lo, self.hi).normalized()

    def contains(self, x: Fraction | int) -> bool | None:
        """Certified membership of an exact positive rational; ``None`` if undecided."""
        x = Fraction(x)
        if x <= 0:
            return False
        xs = _sp(False, (0, x))
        a, b = _spcmp(self.lower, xs), _spcmp(xs, self.upper)
        if a is None or b is None:
            return None
        return a <= 0 and b <= 0

    def to_json(self) -> dict:
        return {
            "reciprocal": self.reciprocal,
            "level": self.level,
            "lo": format_rational(self.lo),
            "hi": format_rational(self.hi),
        }

    def __str__(self) -> str:
        tag = "1/" if self.reciprocal else ""
        return f"{tag}L{self.level}[{float(self.lo):.6g}, {float(self.hi):.6g}]"


ONE = Magnitude(False, 0, Fraction(1), Fraction(1))


def _from_ends(lo_sp, hi_sp) -> Magnitude:
    (rl, pl), (rh, ph) = lo_sp, hi_sp
    if not rl and not rh:
        lvl = max(pl[0], ph[0])
        return Magnitude(False, lvl, _lift(pl, lvl, DOWN), _lift(ph, lvl, UP)).normalized()
    if rl and rh:
        # value range [1/X, 1/Y] with X >= Y; body is [Y, X]
        lvl = max(pl[0], ph[0])
        return Magnitude(True, lvl, _lift(ph, lvl, DOWN), _lift(pl, lvl, UP)).normalized()
    if rl and not rh:
        if pl[0] != 0 or ph[0] != 0:
            raise InconclusiveError("enclosure straddles 1 across levels")
        return Magnitude(False, 0, round_dir(1 / pl[1], DOWN), ph[1]).normalized()
    if _is_one(pl) and _is_one(ph):
        return ONE
    raise InconclusiveError("inverted enclosure")


def mag_from_rational(x: Fraction | int | str) -> Magnitude:
    """Enclosure of a positive rational; exact unless promoted beyond 2**64."""
    x = parse_rational(x) if isinstance(x, str) else Fraction(x)
    if x <= 0:
        raise DomainError("Magnitude requires a positive value")
    if x >= 1:
        return Magnitude(False, 0, x, x).normalized()
    return Magnitude(True, 0, 1 / x, 1 / x).normalized()


def _as_mag(x) -> Magnitude:
    return x if isinstance(x, Magnitude) else mag_from_rational(x)


def mag_mul(a, b) -> Magnitude:
    a, b = _as_mag(a), _as_mag(b)
    return _from_ends(_spmul(a.lower, b.lower, DOWN), _spmul(a.upper, b.upper, UP))


def mag_div(a, b) -> Magnitude:
    return mag_mul(a, _as_mag(b).reciprocal_of())


def mag_add(a, b) -> Magnitude:
    a, b = _as_mag(a), _as_mag(b)
    return _from_ends(_spadd(a.lower, b.lower, DOWN), _spadd(a.upper, b.upper, UP))


def mag_add_one(a) -> Magnitude:
    return mag_add(a, ONE)


def _sppow(base, exp, d):
    rb, pb = base
    if rb:
        raise DomainError("mag_pow requires base >= 1")
    re, pe = exp
    if not re:
        return _sp(False, _pow(pb, pe, d))
    # exponent 1/E: log2 of the result is lg(base) / E
    lg = _lg(pb, d)
    if _is_zero(lg):
        return _sp(False, _ONE)
    c = _cmp(lg, pe)
    if c is not None and c >= 0:
        return _sp(False, _ex(_div(lg, pe, d), d))
    if lg[0] == 0 and pe[0] == 0:
        t = round_dir(lg[1] / pe[1], d)
        return _sp(False, (0, _exp2_dir(t, d)))
    return _sp(False, _ONE if d == DOWN else (0, Fraction(2)))


def mag_pow(base, exponent) -> Magnitude:
    """Enclosure of ``base ** exponent`` for ``base >= 1``, ``exponent > 0``."""
    base, exponent = _as_mag(base), _as_mag(exponent)
    if base.reciprocal or (base.level == 0 and base.lo < 1):
        raise DomainError("mag_pow requires base >= 1")
    return _from_ends(
        _sppow(base.lower, exponent.lower, DOWN), _sppow(base.upper, exponent.upper, UP)
    )


def mag_compare(a, b) -> CompareOutcome:
    a, b = _as_mag(a), _as_mag(b)
    if _spcmp(a.upper, b.lower) == -1:
        return CompareOutcome.LT
    if _spcmp(a.lower, b.upper) == 1:
        return CompareOutcome.GT
    if _spcmp(a.lower, b.upper) == 0 and _spcmp(a.upper, b.lower) == 0:
        return CompareOutcome.EQ
    return CompareOutcome.INCONCLUSIVE


def compare_refined(build_a, build_b, start_bits: int | None = None, max_bits: int = 1024):
    """Compare two lazily built magnitudes, doubling precision while inconclusive."""
    bits = start_bits or get_precision()
    while True:
        with precision(bits):
            out = mag_compare(build_a(), build_b())
        if out is not CompareOutcome.INCONCLUSIVE or bits >= max_bits:
            return out, bits
        bits *= 2


def mag_log2_bounds(m: Magnitude) -> tuple[Fraction, Fraction]:
    """Rational enclosure of ``log2`` of a level <= 1 magnitude."""
    if m.level >= 2:
        raise DomainError("log2 of a level>=2 magnitude is not a small rational")
    if m.level == 1:
        lo, hi = m.lo, m.hi
    else:
        lo, hi = log2_bounds(m.lo)[0], log2_bounds(m.hi)[1]
    if m.reciprocal:
        return -hi, -lo
    return lo, hi


def _div_iv(a, b):
    # positive-denominator interval quotient
    (alo, ahi), (blo, bhi) = a, b
    cands = [alo / blo, alo / bhi, ahi / blo, ahi / bhi]
    return round_dir(min(cands), DOWN), round_dir(max(cands), UP)


def log2_of_10() -> tuple[Fraction, Fraction]:
    return log2_bounds(10)


def mag_log10_bounds(m: Magnitude) -> tuple[Fraction, Fraction]:
    """Rational enclosure of ``log10`` of a level <= 1 magnitude."""
    return _div_iv(mag_log2_bounds(m), log2_of_10())


def mag_loglog10_bounds(m: Magnitude) -> tuple[Fraction, Fraction]:
    """Rational enclosure of ``log10(log10(x))`` for non-reciprocal ``x > 10``."""
    if m.reciprocal:
        raise DomainError("loglog10 needs x > 10")
    if m.level == 0:
        l10 = mag_log10_bounds(m)
        if l10[0] <= 1:
            raise DomainError("loglog10 needs x > 10")
        return _div_iv((log2_bounds(l10[0])[0], log2_bounds(l10[1])[1]), log2_of_10())
    if m.level == 1:
        lg2 = (log2_bounds(m.lo)[0], log2_bounds(m.hi)[1])
    elif m.level == 2:
        lg2 = (m.lo, m.hi)
    else:
        raise DomainError("loglog10 of a level>=3 magnitude is not a small rational")
    t10 = log2_of_10()
    llt = (log2_bounds(t10[0])[0], log2_bounds(t10[1])[1])
    num = (round_dir(lg2[0] - llt[1], DOWN), round_dir(lg2[1] - llt[0], UP))
    return _div_iv(num, t10)


# ---------------------------------------------------------------------------
# named constructions


def factorial(n: int, cap: int = FACTORIAL_CAP) -> int:
    if n < 0:
        raise DomainError("factorial of a negative number")
    if n > cap:
        raise CapExceeded(f"exact factorial capped at n <= {cap}, got {n}")
    return math.factorial(n)


def factorial_mag(n: int, cap: int = FACTORIAL_CAP) -> Magnitude:
    """Enclosure of ``n!``; sums certified chunk logs beyond the exact cap."""
    if n < 0:
        raise DomainError("factorial of a negative number")
    if n <= cap:
        return mag_from_rational(math.factorial(n))
    lo = hi = Fraction(0)
    chunk = 2048
    for start in range(2, n + 1, chunk):
        prod = math.prod(range(start, min(start + chunk, n + 1)))
        l, h = log2_bounds(prod)
        lo, hi = round_dir(lo + l, DOWN), round_dir(hi + h, UP)
    return Magnitude(False, 1, lo, hi).normalized()


def knuth_tower(p: int, n: int, r: Fraction | int) -> Magnitude:
    """Enclosure of ``(p^)^n r``: ``p`` raised to itself ``n`` times over ``r``."""
    r = Fraction(r)
    if p < 2 or n < 1 or r < 1:
        raise DomainError("knuth_tower needs p >= 2, n >= 1, r >= 1")
    if p == 2:
        return Magnitude(False, n, r, r).normalized()
    t = mag_from_rational(r)
    base = mag_from_rational(p)
    for _ in range(n):
        t = mag_pow(base, t)
    return t
