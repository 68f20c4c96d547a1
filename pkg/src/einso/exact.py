"""Exact rationals, sparse multivariate polynomials, and monomial orders.

This is the arithmetic substrate for the whole package: coefficients are
`fractions.Fraction` (never floats), monomials are exponent tuples, and a
polynomial is an immutable-by-convention sparse map from monomial to
coefficient.  Dense coefficient vectors appear only at the univariate
boundary (`MultiPoly.to_univariate`), where the real-root machinery takes
over.

Design notes:

* Results of every arithmetic operation are normalized (no stored zero
  coefficients, fractions in lowest terms), which keeps coefficient growth
  under control during long reduction chains.
* A ring fixes its variable *list* at construction; monomial *orders* are
  separate values so the same ideal can be processed under several
  lexicographic precedences.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, Mapping, Sequence

# exact coefficients in elimination ideals routinely exceed the default
# int-to-str conversion guard
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(2_000_000)

Rational = Fraction
Monomial = tuple  # tuple[int, ...], one exponent per ring variable

__all__ = [
    "Rational",
    "Monomial",
    "StructuralError",
    "rat",
    "PolyRing",
    "MonomialOrder",
    "MultiPoly",
    "poly_arith",
    "mono_mul",
    "mono_div",
    "mono_lcm",
]

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class StructuralError(ValueError):
    """A structural precondition was violated (ring mismatch, unknown variable...)."""


def rat(value, den=None) -> Fraction:
    """Coerce to an exact rational: ``rat(3, 4)``, ``rat("3/4")`` or ``rat(5)``.

    Floats are rejected so no rounding error can sneak in.
    """
    if den is not None:
        return Fraction(value, den)
    if isinstance(value, float):
        raise StructuralError("refusing to coerce a float to an exact rational")
    return Fraction(value)


# ---------------------------------------------------------------------------
# monomial helpers (exponent tuples)
# ---------------------------------------------------------------------------

def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial):
    """a / b as a monomial, or None when b does not divide a."""
    out = []
    for x, y in zip(a, b):
        if x < y:
            return None
        out.append(x - y)
    return tuple(out)


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """True when monomial a divides b."""
    return all(x <= y for x, y in zip(a, b))


class PolyRing:
    """An ordered tuple of variable names, fixed at construction."""

    __slots__ = ("vars", "_pos")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise StructuralError(f"duplicate variable names: {names}")
        for name in names:
            if not _NAME_RE.fullmatch(name):
                raise StructuralError(f"bad variable name: {name!r}")
        self.vars = names
        self._pos = {v: i for i, v in enumerate(names)}

    def __repr__(self):
        return f"PolyRing({', '.join(self.vars)})"

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.vars == other.vars

    def __hash__(self):
        return hash(self.vars)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def position(self, name: str) -> int:
        try:
            return self._pos[name]
        except KeyError:
            raise StructuralError(f"variable {name!r} not in ring {self.vars}") from None

    def zero_mono(self) -> Monomial:
        return (0,) * len(self.vars)

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def one(self) -> "MultiPoly":
        return self.const(1)

    def const(self, c) -> "MultiPoly":
        return MultiPoly(self, {self.zero_mono(): rat(c)})

    def var(self, name: str) -> "MultiPoly":
        i = self.position(name)
        mono = tuple(1 if j == i else 0 for j in range(len(self.vars)))
        return MultiPoly(self, {mono: Fraction(1)})

    def monomial(self, **powers) -> "MultiPoly":
        exps = [0] * len(self.vars)
        for name, e in powers.items():
            exps[self.position(name)] = e
        return MultiPoly(self, {tuple(exps): Fraction(1)})

    def from_terms(self, terms: Mapping[Monomial, object]) -> "MultiPoly":
        return MultiPoly(self, terms)

    def parse(self, text: str) -> "MultiPoly":
        return _parse_poly(self, text)


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order: 'lex' or 'grevlex', with explicit variable precedence.

    ``precedence`` lists variables from greatest to least.  The order is
    total, multiplicative, and has 1 as its minimal element (checked by the
    property suite).
    """

    kind: str
    precedence: tuple

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex"):
            raise StructuralError(f"unknown order kind {self.kind!r}")

    @staticmethod
    def lex(*names: str) -> "MonomialOrder":
        return MonomialOrder("lex", tuple(names))

    @staticmethod
    def grevlex(*names: str) -> "MonomialOrder":
        return MonomialOrder("grevlex", tuple(names))

    def for_ring(self, ring: PolyRing) -> "MonomialOrder":
        """Same kind, precedence defaulting to the ring's variable order."""
        if self.precedence:
            return self
        return MonomialOrder(self.kind, ring.vars)

    def _perm(self, ring: PolyRing) -> tuple:
        if set(self.precedence) != set(ring.vars) or len(self.precedence) != ring.nvars:
            raise StructuralError(
                f"order precedence {self.precedence} is not a permutation of ring {ring.vars}"
            )
        return tuple(ring.position(v) for v in self.precedence)

    def key_func(self, ring: PolyRing) -> Callable[[Monomial], tuple]:
        """Key such that key(a) > key(b) iff a > b in this order."""
        perm = self._perm(ring)
        if self.kind == "lex":
            def key(m, _p=perm):
                return tuple(m[i] for i in _p)
        else:
            rev = tuple(reversed(perm))
            def key(m, _r=rev):
                return (sum(m), tuple(-m[i] for i in _r))
        return key

    def negkey_func(self, ring: PolyRing) -> Callable[[Monomial], tuple]:
        """Key such that key(a) < key(b) iff a > b (for min-heaps)."""
        perm = self._perm(ring)
        if self.kind == "lex":
            def negkey(m, _p=perm):
                return tuple(-m[i] for i in _p)
        else:
            rev = tuple(reversed(perm))
            def negkey(m, _r=rev):
                return (-sum(m), tuple(m[i] for i in _r))
        return negkey


class MultiPoly:
    """Sparse multivariate polynomial with exact rational coefficients."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: Mapping[Monomial, object]):
        clean = {}
        n = ring.nvars
        for mono, c in terms.items():
            if not isinstance(c, Fraction):
                c = rat(c)
            if c:
                mono = tuple(mono)
                if len(mono) != n:
                    raise StructuralError(f"monomial {mono} has wrong arity for {ring}")
                clean[mono] = c
        self.ring = ring
        self.terms = clean

    # -- predicates / basic data ------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        return f"MultiPoly({self.text()!r})"

    def copy_terms(self) -> dict:
        return dict(self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.ring.position(name)
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    def variables(self) -> set:
        """Names of variables that actually occur."""
        out = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    out.add(self.ring.vars[i])
        return out

    def constant_value(self) -> Fraction:
        return self.terms.get(self.ring.zero_mono(), Fraction(0))

    def leading(self, order: MonomialOrder):
        """(monomial, coefficient) of the leading term under `order`."""
        if not self.terms:
            raise StructuralError("zero polynomial has no leading term")
        key = order.key_func(self.ring)
        m = max(self.terms, key=key)
        return m, self.terms[m]

    # -- ring checks --------------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.ring != other.ring:
            raise StructuralError(f"ring mismatch: {self.ring} vs {other.ring}")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        p = MultiPoly.__new__(MultiPoly)
        p.ring, p.terms = self.ring, out
        return p

    __radd__ = __add__

    def __neg__(self):
        p = MultiPoly.__new__(MultiPoly)
        p.ring = self.ring
        p.terms = {m: -c for m, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = rat(other)
            if not c:
                return self.ring.zero()
            p = MultiPoly.__new__(MultiPoly)
            p.ring = self.ring
            p.terms = {m: c * v for m, v in self.terms.items()}
            return p
        self._check(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    del out[m]
        p = MultiPoly.__new__(MultiPoly)
        p.ring, p.terms = self.ring, out
        return p

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise StructuralError("negative polynomial power")
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    # -- spec operations -----------------------------------------------------

    def evaluate(self, point: Mapping[str, object]):
        """Exact value at `point`; every occurring variable must be assigned.

        Works for any coefficient-compatible value type (Fraction, algebraic
        field elements...), since only ``+`` and ``*`` are used.
        """
        for v in self.variables():
            if v not in point:
                raise StructuralError(f"no assignment for variable {v!r}")
        vals = [point.get(v) for v in self.ring.vars]
        acc = Fraction(0)
        for mono, c in self.terms.items():
            term = c
            for i, e in enumerate(mono):
                if e:
                    term = term * vals[i] ** e
            acc = acc + term
        return acc

    def substitute(self, bindings: Mapping[str, "MultiPoly"], into: PolyRing = None) -> "MultiPoly":
        """Compose: replace bound variables by polynomials in the target ring.

        Unbound variables must exist in the target ring and map to themselves.
        """
        for name in bindings:
            self.ring.position(name)  # raises on unknown variable
        if into is None:
            rings = {b.ring for b in bindings.values()}
            if len(rings) == 1:
                into = rings.pop()
            elif not rings:
                into = self.ring
            else:
                raise StructuralError("ambiguous target ring; pass `into=`")
        images = {}
        for v in self.ring.vars:
            if v in bindings:
                b = bindings[v]
                if b.ring != into:
                    raise StructuralError(f"binding for {v!r} lives in {b.ring}, not {into}")
                images[v] = b
            else:
                images[v] = None  # only needed if v occurs
        power_cache: dict = {}

        def image_power(v: str, e: int) -> MultiPoly:
            kv = (v, e)
            if kv not in power_cache:
                base = images[v]
                if base is None:
                    base = into.var(v)  # raises if absent from target ring
                    images[v] = base
                power_cache[kv] = base ** e
            return power_cache[kv]

        acc = into.zero()
        for mono, c in self.terms.items():
            term = into.const(c)
            for i, e in enumerate(mono):
                if e:
                    term = term * image_power(self.ring.vars[i], e)
            acc = acc + term
        return acc

    def content_primitive(self, order: MonomialOrder = None):
        """Split p = content * primitive.

        The primitive part has coprime integer coefficients and positive
        leading coefficient under `order` (ring-order lex by default); the
        content is a rational carrying sign and denominators.
        """
        if not self.terms:
            return Fraction(0), self
        if order is None:
            order = MonomialOrder.lex(*self.ring.vars)
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = gcd(num_gcd, c.numerator)
            den_lcm = lcm(den_lcm, c.denominator)
        content = Fraction(num_gcd, den_lcm)
        prim = {m: c / content for m, c in self.terms.items()}
        lead = max(prim, key=order.key_func(self.ring))
        if prim[lead] < 0:
            content = -content
            prim = {m: -c for m, c in prim.items()}
        return content, MultiPoly(self.ring, prim)

    def to_univariate(self, name: str):
        """Dense coefficient vector in `name`, lowest degree first.

        Raises when any other variable occurs.
        """
        i = self.ring.position(name)
        extra = self.variables() - {name}
        if extra:
            raise StructuralError(f"polynomial involves {sorted(extra)}, not univariate in {name!r}")
        if not self.terms:
            return []
        deg = max(m[i] for m in self.terms)
        out = [Fraction(0)] * (deg + 1)
        for m, c in self.terms.items():
            out[m[i]] = c
        return out

    @classmethod
    def from_univariate(cls, ring: PolyRing, name: str, coeffs: Sequence) -> "MultiPoly":
        i = ring.position(name)
        terms = {}
        for e, c in enumerate(coeffs):
            if c:
                mono = tuple(e if j == i else 0 for j in range(ring.nvars))
                terms[mono] = rat(c)
        return cls(ring, terms)

    def derivative(self, name: str) -> "MultiPoly":
        i = self.ring.position(name)
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                dm = tuple(x - 1 if j == i else x for j, x in enumerate(m))
                out[dm] = out.get(dm, 0) + c * e
        return MultiPoly(self.ring, out)

    # -- text form -------------------------------------------------------------

    def text(self, order: MonomialOrder = None) -> str:
        """Canonical text form: terms descending under the active order."""
        if not self.terms:
            return "0"
        if order is None:
            order = MonomialOrder.lex(*self.ring.vars)
        key = order.key_func(self.ring)
        parts = []
        for m in sorted(self.terms, key=key, reverse=True):
            c = self.terms[m]
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(self.ring.vars[i])
                elif e > 1:
                    factors.append(f"{self.ring.vars[i]}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            parts.append(("- " if c < 0 else "+ ") + body)
        joined = " ".join(parts)
        if joined.startswith("+ "):
            return joined[2:]
        return "-" + joined[2:]

    __str__ = text


def poly_arith(a: MultiPoly, b: MultiPoly, op: str) -> MultiPoly:
    """Exact add/sub/mul on polynomials sharing a ring."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise StructuralError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# text format parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise StructuralError(f"cannot tokenize {text[pos:pos + 20]!r}")
            break
        pos = m.end()
        if m.group("num"):
            out.append(("num", Fraction(m.group("num"))))
        elif m.group("name"):
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
    return out


class _Parser:
    """Recursive descent for the polynomial text format.

    expr   := [+-] term (('+'|'-') term)*
    term   := factor (('*')? factor)*        -- '*' optional
    factor := primary ('^' INT)?
    primary:= NUMBER | NAME | '(' expr ')'
    """

    def __init__(self, ring: PolyRing, tokens):
        self.ring = ring
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> MultiPoly:
        p = self.expr()
        if self.i != len(self.toks):
            raise StructuralError(f"trailing input at token {self.toks[self.i]}")
        return p

    def expr(self) -> MultiPoly:
        sign = 1
        kind, val = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        acc = self.term() * sign
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                nxt = self.term()
                acc = acc + nxt if val == "+" else acc - nxt
            else:
                return acc

    def term(self) -> MultiPoly:
        acc = self.factor()
        while True:
            kind, val = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.factor()
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                acc = acc * self.factor()
            else:
                return acc

    def factor(self) -> MultiPoly:
        base = self.primary()
        kind, val = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val = self.take()
            if kind != "num" or val.denominator != 1:
                raise StructuralError("exponent must be a nonnegative integer")
            return base ** int(val)
        return base

    def primary(self) -> MultiPoly:
        kind, val = self.take()
        if kind == "num":
            return self.ring.const(val)
        if kind == "name":
            return self.ring.var(val)
        if kind == "op" and val == "(":
            p = self.expr()
            kind, val = self.take()
            if (kind, val) != ("op", ")"):
                raise StructuralError("expected ')'")
            return p
        if kind == "op" and val == "-":
            return -self.primary()
        raise StructuralError(f"unexpected token {val!r}")


def _parse_poly(ring: PolyRing, text: str) -> MultiPoly:
    return _Parser(ring, _tokenize(text)).parse()
