"""Real algebraic numbers and arithmetic in Q(alpha), exactly.

A `RealRoot` is a square-free integer polynomial together with an isolating
interval with rational endpoints (endpoints are never roots).  A
`RootField` wraps one RealRoot; its elements represent values in Q(alpha)
as quotients num(alpha)/den(alpha) of polynomials reduced modulo the
defining polynomial.  The quotient form makes inversion free and keeps all
arithmetic to polynomial multiplication; the only decision procedures are

* zero tests - e(alpha) = 0 iff gcd(num, f) still has the root in the
  isolating interval (integer gcds only), and
* sign tests - interval refinement once a value is known to be nonzero.

The defining polynomial is never factored, only gcds are taken; when a
zero test discovers a proper divisor of f vanishing at alpha, f shrinks to
it (dynamic evaluation), which keeps later arithmetic small.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from gmpy2 import mpq

from .exact import StructuralError
from .realroots import (
    _content_free,
    _eval_int_sign,
    _gcd_int,
    _poly_div_int,
    _strip,
    count_roots,
)

__all__ = [
    "RealRoot",
    "RootField",
    "FieldElement",
    "Interval",
    "interval_mul",
    "interval_pow",
    "interval_poly_eval",
]


# ---------------------------------------------------------------------------
# rational interval arithmetic (shared with the numeric certifier)
# ---------------------------------------------------------------------------

Interval = tuple  # (Fraction lo, Fraction hi), lo <= hi


def interval_add(a: Interval, b: Interval) -> Interval:
    return (a[0] + b[0], a[1] + b[1])


def interval_mul(a: Interval, b: Interval) -> Interval:
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(p), max(p))


def interval_pow(a: Interval, e: int) -> Interval:
    if e == 0:
        return (Fraction(1), Fraction(1))
    out = a
    for _ in range(e - 1):
        out = interval_mul(out, a)
    return out


def interval_poly_eval(coeffs: Sequence, x: Interval) -> Interval:
    """Interval Horner evaluation with exact rational endpoints."""
    acc = (Fraction(0), Fraction(0))
    for c in reversed(list(coeffs)):
        acc = interval_mul(acc, x)
        acc = (acc[0] + c, acc[1] + c)
    return acc


class RealRoot:
    """One real root of a square-free integer polynomial, isolated in
    (low, high) with non-root endpoints."""

    __slots__ = ("poly", "low", "high")

    def __init__(self, poly: Sequence, low, high):
        poly = [int(c) for c in poly]
        if len(poly) < 2:
            raise StructuralError("defining polynomial must be nonconstant")
        low, high = Fraction(low), Fraction(high)
        if _eval_int_sign(poly, low) == 0 or _eval_int_sign(poly, high) == 0:
            raise StructuralError("isolating interval endpoints must not be roots")
        if count_roots(poly, low, high) != 1:
            raise StructuralError("interval does not isolate exactly one root")
        self.poly = poly
        self.low = low
        self.high = high

    def __repr__(self):
        return f"RealRoot(~{float((self.low + self.high) / 2):.9g})"

    def width(self) -> Fraction:
        return self.high - self.low

    def interval(self) -> Interval:
        return (self.low, self.high)

    def refine_step(self) -> None:
        mid = (self.low + self.high) / 2
        s_mid = _eval_int_sign(self.poly, mid)
        if s_mid == 0:
            # the root is exactly this rational; shrink symmetrically around
            # it (signs flip across a simple root, so small offsets work)
            eps = (self.high - self.low) / 8
            while True:
                lo, hi = mid - eps, mid + eps
                s_lo = _eval_int_sign(self.poly, lo)
                s_hi = _eval_int_sign(self.poly, hi)
                if s_lo and s_hi and s_lo != s_hi:
                    self.low, self.high = lo, hi
                    return
                eps /= 2
        if s_mid == _eval_int_sign(self.poly, self.low):
            self.low = mid
        else:
            self.high = mid

    def refine_below(self, width) -> None:
        width = Fraction(width)
        while self.high - self.low > width:
            self.refine_step()

    def replace_poly(self, new_poly: Sequence) -> None:
        """Shrink the defining polynomial to a divisor that still has the
        root (dynamic-evaluation split)."""
        new_poly = [int(c) for c in new_poly]
        while _eval_int_sign(new_poly, self.low) == 0 or _eval_int_sign(new_poly, self.high) == 0:
            self.refine_step()
        assert count_roots(new_poly, self.low, self.high) == 1
        self.poly = new_poly

    def sign_of(self, h: Sequence) -> int:
        """Exact sign of h(alpha) for an integer polynomial h."""
        h = _content_free(_strip([int(c) for c in h]))
        if not h:
            return 0
        g = _gcd_int(h, self.poly)
        if len(g) > 1 and count_roots(g, self.low, self.high) == 1:
            return 0
        while True:
            lo, hi = interval_poly_eval(h, (self.low, self.high))
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            self.refine_step()

    def to_float(self) -> float:
        self.refine_below(Fraction(1, 10**17))
        return float((self.low + self.high) / 2)


def _reduce_mod(coeffs: list, f: list) -> tuple:
    """Remainder of a Fraction-coefficient polynomial modulo the integer
    polynomial f."""
    df = len(f) - 1
    lead = Fraction(f[-1])
    work = [Fraction(c) for c in coeffs]
    _strip(work)
    while work and len(work) - 1 >= df:
        q = work[-1] / lead
        shift = len(work) - 1 - df
        for i, c in enumerate(f):
            work[i + shift] -= q * c
        work.pop()
        _strip(work)
    return tuple(work)


def _mul_mod(a: Sequence, b: Sequence, f: list) -> tuple:
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return _reduce_mod(out, f)


def _add_poly(a: Sequence, b: Sequence) -> tuple:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return tuple(_strip(out))


def _cleared_int(coeffs: Sequence) -> list:
    """Primitive integer version of a Fraction-coefficient polynomial."""
    coeffs = list(coeffs)
    if not coeffs:
        return []
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    return _content_free(ints)


class FieldElement:
    """A value num(alpha)/den(alpha) in Q(alpha); supports mixed arithmetic
    with ints and Fractions so generic polynomial evaluation works."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: "RootField", num: Sequence, den: Sequence = (Fraction(1),)):
        self.field = field
        f = field.root.poly
        self.num = _reduce_mod([Fraction(c) for c in num], f)
        self.den = _reduce_mod([Fraction(c) for c in den], f)
        if not self.den:
            raise ZeroDivisionError("zero denominator polynomial")

    def _lift(self, other):
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise StructuralError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, [Fraction(other)])
        return NotImplemented

    def __repr__(self):
        return f"FieldElement(~{self.to_float():.9g})"

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        f = self.field.root.poly
        if self.den == o.den:
            return self.field._make(_add_poly(self.num, o.num), self.den)
        num = _add_poly(_mul_mod(self.num, o.den, f), _mul_mod(o.num, self.den, f))
        return self.field._make(num, _mul_mod(self.den, o.den, f))

    __radd__ = __add__

    def __neg__(self):
        return self.field._make(tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return self.field._make(tuple(c * q for c in self.num), self.den)
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        f = self.field.root.poly
        return self.field._make(_mul_mod(self.num, o.num, f), _mul_mod(self.den, o.den, f))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = self.field.constant(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        return self.field._make(self.den, self.num)

    def is_zero(self) -> bool:
        return self.field._poly_zero_at_root(self.num)

    def canonical(self) -> "FieldElement":
        """Equal element in polynomial form (denominator 1), which keeps
        coefficient heights near the minimum for later arithmetic."""
        if len(self.den) == 1:
            return self
        inv = self.field._inverse_mod(self.den)
        num = _mul_mod(self.num, inv, self.field.root.poly)
        return self.field._make(num, (Fraction(1),))

    def sign(self) -> int:
        if self.is_zero():
            return 0
        sn = self.field.root.sign_of(_cleared_int(self.num))
        sd = self.field.root.sign_of(_cleared_int(self.den))
        return sn * sd

    def interval(self, width) -> Interval:
        return self.field.interval_of(self, width)

    def to_float(self) -> float:
        lo, hi = self.interval(Fraction(1, 10**17))
        return float((lo + hi) / 2)

    def as_fraction(self):
        """Exact rational value when the element is a ratio of constants."""
        if len(self.num) <= 1 and len(self.den) == 1:
            n = self.num[0] if self.num else Fraction(0)
            return n / self.den[0]
        return None


class RootField:
    """Arithmetic in Q(alpha) for one isolated real root alpha."""

    def __init__(self, root: RealRoot):
        self.root = root

    def _make(self, num: Sequence, den: Sequence) -> FieldElement:
        e = FieldElement.__new__(FieldElement)
        e.field = self
        f = self.root.poly
        e.num = _reduce_mod(list(num), f)
        e.den = _reduce_mod(list(den), f)
        if not e.den:
            raise ZeroDivisionError("zero denominator polynomial")
        return e

    def element(self, coeffs: Sequence) -> FieldElement:
        return FieldElement(self, coeffs)

    def generator(self) -> FieldElement:
        return FieldElement(self, [Fraction(0), Fraction(1)])

    def constant(self, c) -> FieldElement:
        return FieldElement(self, [Fraction(c)])

    def _poly_zero_at_root(self, coeffs: Sequence) -> bool:
        h = _cleared_int(coeffs)
        if not h:
            return True
        if len(h) == 1:
            return False
        g = _gcd_int(h, self.root.poly)
        if len(g) > 1 and count_roots(g, self.root.low, self.root.high) == 1:
            if len(g) < len(self.root.poly):
                self.root.replace_poly(g)
            return True
        return False

    def sign(self, e: FieldElement) -> int:
        return e.sign()

    def is_zero(self, e: FieldElement) -> bool:
        return e.is_zero()

    def inverse(self, e: FieldElement) -> FieldElement:
        return e.inverse()

    def _inverse_mod(self, den: Sequence) -> tuple:
        """den(y)^-1 modulo the defining polynomial, as Fraction coefficients.

        Extended Euclid over the rationals (gmpy2.mpq for speed); a
        nonconstant gcd triggers the dynamic-evaluation split: the root
        belongs to the cofactor, so the defining polynomial shrinks and the
        inversion is retried in the smaller ring.
        """
        if self._poly_zero_at_root(den):
            raise ZeroDivisionError("inverting a value that vanishes at the root")
        while True:
            f = self.root.poly
            h = [mpq(c.numerator, c.denominator) for c in _reduce_mod(list(den), f)]
            g, s = _xgcd_mpq(h, [mpq(c) for c in f])
            if len(g) == 1:
                inv = g[0]
                return tuple(Fraction(int(c.numerator), int(c.denominator))
                             for c in (x / inv for x in s))
            g_int = _cleared_int([Fraction(int(c.numerator), int(c.denominator)) for c in g])
            cof = _poly_div_int(f, g_int)
            self.root.replace_poly(cof)

    def interval_of(self, e: FieldElement, width) -> Interval:
        width = Fraction(width)
        num, den = e.num, e.den
        if len(num) <= 1 and len(den) == 1:
            v = (num[0] if num else Fraction(0)) / den[0]
            return (v, v)
        while True:
            nlo, nhi = interval_poly_eval(num, self.root.interval())
            dlo, dhi = interval_poly_eval(den, self.root.interval())
            if dlo > 0 or dhi < 0:
                q = (nlo / dlo, nlo / dhi, nhi / dlo, nhi / dhi)
                lo, hi = min(q), max(q)
                if hi - lo <= width:
                    return (lo, hi)
            self.root.refine_step()


def _xgcd_mpq(a: list, b: list):
    """Extended gcd over Q[y] with mpq coefficients: returns (g, s) with
    s * a = g (mod b)."""
    r0, r1 = list(a), list(b)
    s0, s1 = [mpq(1)], []

    def strip(p):
        while p and not p[-1]:
            p.pop()
        return p

    strip(r0)
    strip(r1)
    while r1:
        dg = len(r1) - 1
        lead = r1[-1]
        q = [mpq(0)] * max(len(r0) - dg, 1)
        rem = list(r0)
        while rem and len(rem) - 1 >= dg:
            c = rem[-1] / lead
            shift = len(rem) - 1 - dg
            q[shift] = c
            for i, gc in enumerate(r1):
                rem[i + shift] -= c * gc
            rem.pop()
            strip(rem)
        # s_next = s0 - q * s1
        qs = [mpq(0)] * (len(q) + len(s1) - 1) if s1 else []
        for i, x in enumerate(q):
            if x:
                for j, y in enumerate(s1):
                    if y:
                        qs[i + j] += x * y
        n = max(len(s0), len(qs))
        s_next = [mpq(0)] * n
        for i, c in enumerate(s0):
            s_next[i] += c
        for i, c in enumerate(qs):
            s_next[i] -= c
        strip(s_next)
        r0, r1 = r1, rem
        s0, s1 = s1, s_next
    return r0, s0
