"""Exact real-root counting and isolation for univariate rational polynomials.

Sturm sequences with exact rational sign evaluation do all the counting;
isolation is bisection on exact rational endpoints, with rational roots
split off exactly (divisor search on the primitive integer coefficients).
Floating point appears only in display helpers.

Dense polynomials are plain coefficient lists, lowest degree first.  The
fast paths work on integer lists (clearing denominators does not move
roots); the public `sturm_sequence` returns the classical rational chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Iterable, Sequence

from .exact import MultiPoly, StructuralError, rat

__all__ = [
    "IsolatingInterval",
    "sturm_sequence",
    "count_roots",
    "count_positive_roots",
    "isolate_positive_roots",
    "isolate_roots",
    "refine",
    "sign_at",
    "cauchy_root_bound",
    "rational_roots",
    "squarefree_part",
    "sign_variations",
]


# ---------------------------------------------------------------------------
# dense-list helpers
# ---------------------------------------------------------------------------

def as_coeffs(p) -> list:
    """Accept a MultiPoly (univariate) or a coefficient sequence."""
    if isinstance(p, MultiPoly):
        names = sorted(p.variables())
        if len(names) > 1:
            raise StructuralError(f"not univariate: variables {names}")
        name = names[0] if names else (p.ring.vars[0] if p.ring.vars else "x")
        return [rat(c) for c in p.to_univariate(name)]
    return [rat(c) for c in p]


def _strip(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _to_int(p: Sequence) -> list:
    """Clear denominators and remove content; roots are unchanged."""
    p = _strip(list(p))
    if not p:
        return []
    den = 1
    for c in p:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints]


def _deriv(p: list) -> list:
    return [i * c for i, c in enumerate(p)][1:]


def _eval_fraction(p: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(list(p)):
        acc = acc * x + c
    return acc


def _eval_int_sign(p: list, x: Fraction) -> int:
    """Exact sign of an integer polynomial at a rational point.

    Horner on p(n/d) * d^deg: acc <- acc*n + c_k * d^i stays in integers.
    """
    num, den = x.numerator, x.denominator
    acc = 0
    dp = 1
    for c in reversed(p):
        acc = acc * num + c * dp
        dp *= den
    return (acc > 0) - (acc < 0)


def _rem_fraction(f: list, g: list) -> list:
    """Exact remainder of f by g over the rationals."""
    f = [Fraction(c) for c in f]
    g = [Fraction(c) for c in g]
    dg = len(g) - 1
    lg = g[-1]
    while len(f) - 1 >= dg and _strip(f):
        df = len(f) - 1
        if df < dg:
            break
        q = f[-1] / lg
        shift = df - dg
        for i, c in enumerate(g):
            f[i + shift] -= q * c
        f.pop()
        _strip(f)
    return f


def _prem_signed(f: list, g: list) -> list:
    """Integer pseudo-remainder of f by g scaled by a *positive* constant.

    Multiplying f by lc(g)^(delta+1) can flip signs when lc(g) < 0 and the
    exponent is odd; Sturm chains need sign fidelity, so the result is
    corrected to be a positive multiple of rem(f, g).
    """
    dg = len(g) - 1
    lg = g[-1]
    delta = len(f) - len(g) + 1
    mult = lg ** delta
    f = [c * mult for c in f]
    while len(f) - 1 >= dg and _strip(f):
        if len(f) - 1 < dg:
            break
        q, r = divmod(f[-1], lg)
        if r:
            raise AssertionError("pseudo-remainder division not exact")
        shift = len(f) - 1 - dg
        for i, c in enumerate(g):
            f[i + shift] -= q * c
        f.pop()
        _strip(f)
    if mult < 0:
        f = [-c for c in f]
    return _content_free(f)


def _content_free(p: list) -> list:
    g = 0
    for c in p:
        g = gcd(g, c)
    if g <= 1:
        return list(p)
    return [c // g for c in p]


def _gcd_int(f: list, g: list) -> list:
    """Primitive gcd of integer polynomials (primitive PRS)."""
    f = _content_free(_strip(list(f)))
    g = _content_free(_strip(list(g)))
    if not f:
        return g
    if not g:
        return f
    if len(f) < len(g):
        f, g = g, f
    while g:
        r = _prem_signed(f, g)
        f, g = g, r
    if f[-1] < 0:
        f = [-c for c in f]
    return f


def squarefree_part(p) -> list:
    """Square-free part of p as a primitive integer list."""
    ip = _to_int(as_coeffs(p))
    if len(ip) <= 1:
        return ip
    g = _gcd_int(ip, _deriv(ip))
    if len(g) == 1:
        return ip
    return _poly_div_int(ip, g)


def _poly_div_int(f: list, g: list) -> list:
    """f / g for integer lists when g divides f up to content; primitive result."""
    f = [Fraction(c) for c in f]
    gg = [Fraction(c) for c in g]
    dg = len(gg) - 1
    lg = gg[-1]
    out = [Fraction(0)] * (len(f) - dg)
    work = f
    while True:
        _strip(work)
        if len(work) - 1 < dg or not work:
            break
        df = len(work) - 1
        q = work[-1] / lg
        out[df - dg] = q
        shift = df - dg
        for i, c in enumerate(gg):
            work[i + shift] -= q * c
    if _strip(work):
        raise AssertionError("polynomial division not exact")
    return _to_int(out)


# ---------------------------------------------------------------------------
# Sturm machinery
# ---------------------------------------------------------------------------

def sturm_sequence(p) -> list:
    """Canonical Sturm chain of the square-free part of p.

    Classical definition: f0 = p*, f1 = p*', f_{k+1} = -rem(f_{k-1}, f_k);
    returned with exact rational coefficients, last element a nonzero
    constant.
    """
    coeffs = _strip(as_coeffs(p))
    if not coeffs:
        raise StructuralError("Sturm sequence of the zero polynomial")
    if len(coeffs) == 1:
        return [coeffs]
    sf = squarefree_part(coeffs)
    chain = [[Fraction(c) for c in sf]]
    if len(sf) > 1:
        chain.append([Fraction(c) for c in _deriv(sf)])
        while len(chain[-1]) > 1:
            r = _rem_fraction(chain[-2], chain[-1])
            chain.append([-c for c in r])
        if not chain[-1]:
            raise AssertionError("square-free chain must end in a nonzero constant")
    return chain


def _sturm_chain_int(sf: list) -> list:
    """Sign-faithful integer Sturm chain of a square-free integer polynomial."""
    chain = [sf]
    if len(sf) > 1:
        chain.append(_content_free(_deriv(sf)))
        while len(chain[-1]) > 1:
            r = _prem_signed(chain[-2], chain[-1])
            chain.append([-c for c in r])
    return chain


def sign_variations(values: Iterable) -> int:
    """Sign changes in a sequence, zeros skipped."""
    signs = [(v > 0) - (v < 0) for v in values]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _variations_at(chain: list, x: Fraction) -> int:
    return sign_variations(_eval_int_sign(q, x) for q in chain)


def _variations_at_pos_inf(chain: list) -> int:
    return sign_variations((1 if q[-1] > 0 else -1) for q in chain)


def _variations_at_neg_inf(chain: list) -> int:
    return sign_variations(
        (1 if q[-1] > 0 else -1) * (1 if (len(q) - 1) % 2 == 0 else -1) for q in chain
    )


def sign_at(p, x) -> int:
    """Exact sign of p at the rational point x."""
    ip = _to_int(as_coeffs(p))
    if not ip:
        return 0
    return _eval_int_sign(ip, rat(x))


def cauchy_root_bound(p) -> Fraction:
    """Exact bound B with every real root of p in [-B, B]."""
    ip = _to_int(as_coeffs(p))
    if len(ip) <= 1:
        return Fraction(1)
    an = abs(ip[-1])
    m = max(abs(c) for c in ip[:-1])
    return 1 + Fraction(m, an)


def _strip_origin(sf: list) -> tuple:
    """Remove x^k factors; returns (poly, k)."""
    k = 0
    while sf and sf[0] == 0:
        sf = sf[1:]
        k += 1
    return sf, k


def count_roots(p, a, b) -> int:
    """Number of distinct real roots of p in the half-open interval (a, b]."""
    a, b = rat(a), rat(b)
    if not a < b:
        raise StructuralError("need a < b")
    sf = squarefree_part(p)
    if len(sf) <= 1:
        return 0
    extra = 0
    if _eval_int_sign(sf, a) == 0:
        sf = _poly_div_int(sf, _to_int([-a, 1]))  # roots at a are excluded from (a, b]
    if _eval_int_sign(sf, b) == 0:
        sf = _poly_div_int(sf, _to_int([-b, 1]))
        extra = 1
    if len(sf) <= 1:
        return extra
    chain = _sturm_chain_int(sf)
    return _variations_at(chain, a) - _variations_at(chain, b) + extra


def count_positive_roots(p) -> int:
    """Number of distinct real roots in (0, +oo)."""
    sf, _ = _strip_origin(squarefree_part(p))
    if len(sf) <= 1:
        return 0
    chain = _sturm_chain_int(sf)
    return _variations_at(chain, Fraction(0)) - _variations_at_pos_inf(chain)


# ---------------------------------------------------------------------------
# rational roots
# ---------------------------------------------------------------------------

def _factorint(n: int, rho_rounds: int = 64) -> dict:
    """Prime factorization by trial division plus Pollard rho."""
    n = abs(n)
    out: dict = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    inc = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f < 1_000_000:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += inc[i]
        i = (i + 1) % 8
    if n == 1:
        return out

    def is_probable_prime(m: int) -> bool:
        if m < 2:
            return False
        for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
            if m % a == 0:
                return m == a
        d, s = m - 1, 0
        while d % 2 == 0:
            d //= 2
            s += 1
        for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
            x = pow(a, d, m)
            if x in (1, m - 1):
                continue
            for _ in range(s - 1):
                x = x * x % m
                if x == m - 1:
                    break
            else:
                return False
        return True

    def rho(m: int) -> int:
        if m % 2 == 0:
            return 2
        for c in range(1, rho_rounds):
            x = y = 2
            d = 1
            while d == 1:
                x = (x * x + c) % m
                y = (y * y + c) % m
                y = (y * y + c) % m
                d = gcd(abs(x - y), m)
            if d != m:
                return d
        raise ArithmeticError(f"cannot factor {m}")

    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = rho(m)
        stack.extend([d, m // d])
    return out


def _divisors(n: int, cap: int = 200_000) -> list:
    fac = _factorint(n)
    divs = [1]
    for p, e in fac.items():
        pe = [p ** k for k in range(e + 1)]
        divs = [d * q for d in divs for q in pe]
        if len(divs) > cap:
            raise ArithmeticError("too many divisors")
    return sorted(divs)


def simplest_rational_in(lo, hi) -> Fraction:
    """The fraction with the smallest denominator in the closed interval
    [lo, hi] (Stern-Brocot descent)."""
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi:
        raise StructuralError("empty interval")
    # integer in range?
    n = -((-lo.numerator) // lo.denominator)  # ceil(lo)
    if n <= hi:
        return Fraction(n)
    f = lo.numerator // lo.denominator  # floor(lo) == floor(hi) here
    return f + 1 / simplest_rational_in(1 / (hi - f), 1 / (lo - f))


def rational_root_in_interval(p_int: list, lo, hi, refine_rounds: int = 3):
    """The rational root of p in (lo, hi) when the interval isolates one
    root and that root has moderate height; None for (apparently)
    irrational roots.  Exact either way: a returned value is certainly a
    root, None only means no rational root of small height was found."""
    lo, hi = Fraction(lo), Fraction(hi)
    s_lo = _eval_int_sign(p_int, lo)
    for _ in range(refine_rounds):
        cand = simplest_rational_in(lo, hi)
        if lo < cand < hi and _eval_int_sign(p_int, cand) == 0:
            return cand
        target = (hi - lo) / 2 ** 40
        while hi - lo > target:
            mid = (lo + hi) / 2
            s_mid = _eval_int_sign(p_int, mid)
            if s_mid == 0:
                return mid
            if s_mid == s_lo:
                lo = mid
            else:
                hi = mid
    return None


def rational_roots(p, cap: int = 200_000) -> list:
    """All rational roots (no multiplicity), exactly; [] when none.

    Uses the rational root theorem on the primitive square-free part.  When
    the divisor enumeration would exceed `cap`, raises ArithmeticError so the
    caller can fall back to interval-only handling.
    """
    sf, k = _strip_origin(squarefree_part(p))
    roots = [Fraction(0)] if k else []
    if len(sf) <= 1:
        return roots
    a0, an = abs(sf[0]), abs(sf[-1])
    nums = _divisors(a0, cap)
    dens = _divisors(an, cap)
    if len(nums) * len(dens) > cap:
        raise ArithmeticError("rational-root candidate set too large")
    p1 = sum(sf)
    pm1 = sum(c if i % 2 == 0 else -c for i, c in enumerate(sf))
    for u in nums:
        for v in dens:
            if gcd(u, v) != 1:
                continue
            # if u/v is a root then (u - v) | p(1) and (u + v) | p(-1)
            if p1 and u != v and p1 % (u - v) != 0:
                pass
            elif _eval_int_sign(sf, Fraction(u, v)) == 0:
                roots.append(Fraction(u, v))
            if pm1 and pm1 % (u + v) != 0:
                continue
            if _eval_int_sign(sf, Fraction(-u, v)) == 0:
                roots.append(Fraction(-u, v))
    return sorted(set(roots))


# ---------------------------------------------------------------------------
# isolation and refinement
# ---------------------------------------------------------------------------

@dataclass
class IsolatingInterval:
    """Half-open interval (low, high] holding exactly one real root of the
    square-free part; `exact` is set when the root is a known rational."""

    low: Fraction
    high: Fraction
    multiplicity_hint: int = 1
    exact: Fraction = None

    def width(self) -> Fraction:
        return self.high - self.low

    def midpoint(self) -> Fraction:
        if self.exact is not None:
            return self.exact
        return (self.low + self.high) / 2

    def as_float(self) -> float:
        return float(self.midpoint())


def _multiplicity_at(p_int: list, root_sf: IsolatingInterval, sf: list) -> int:
    """Multiplicity of the isolated root in the original polynomial."""
    mult = 1
    g = _gcd_int(p_int, _deriv(p_int))
    while len(g) > 1:
        if root_sf.exact is not None:
            if _eval_int_sign(g, root_sf.exact) != 0:
                break
        else:
            gc = _gcd_int(g, sf)
            if len(gc) <= 1 or count_roots(gc, root_sf.low, root_sf.high) == 0:
                break
        mult += 1
        g = _gcd_int(g, _deriv(g))
    return mult


def isolate_roots(p, lo, hi, with_multiplicity: bool = False) -> list:
    """Disjoint isolating intervals for the distinct real roots in (lo, hi]."""
    lo, hi = rat(lo), rat(hi)
    p_int = _to_int(as_coeffs(p))
    if len(p_int) <= 1:
        return []
    sf = squarefree_part(p_int)
    try:
        known = [r for r in rational_roots(sf) if lo < r <= hi]
    except ArithmeticError:
        known = []
        work_sf = sf
    else:
        work_sf = sf
        for r in known:
            work_sf = _poly_div_int(work_sf, _to_int([-r, 1]))
    out = [IsolatingInterval(r, r, exact=r) for r in known]

    if len(work_sf) > 1:
        chain = _sturm_chain_int(work_sf)

        def var_at(x):
            return _variations_at(chain, x)

        def nudge_off_root(x, direction):
            # endpoints of bisection may hit a root of the deflated part
            step = Fraction(1, 2)
            while _eval_int_sign(work_sf, x) == 0:
                x += direction * step
                step /= 2
            return x

        a = nudge_off_root(lo, Fraction(1, 1_000_000_000))
        b = nudge_off_root(hi, Fraction(1, 1_000_000_000))
        if a < b:
            stack = [(a, b, var_at(a), var_at(b))]
            while stack:
                a, b, va, vb = stack.pop()
                n = va - vb
                if n <= 0:
                    continue
                if n == 1:
                    out.append(IsolatingInterval(a, b))
                    continue
                mid = (a + b) / 2
                if _eval_int_sign(work_sf, mid) == 0:
                    # rational root undetected by the divisor search (cap hit)
                    out.append(IsolatingInterval(mid, mid, exact=mid))
                    eps = (b - a) / 2 ** 20
                    left = nudge_off_root(mid - eps, Fraction(-1, 10 ** 12))
                    right = nudge_off_root(mid + eps, Fraction(1, 10 ** 12))
                    stack.append((a, left, va, var_at(left)))
                    stack.append((right, b, var_at(right), vb))
                else:
                    vm = var_at(mid)
                    stack.append((a, mid, va, vm))
                    stack.append((mid, b, vm, vb))
        # disjointness: bisect any interval that still geometrically contains
        # one of the exact rational roots (those were divided out of work_sf,
        # so a sign-preserving bisection eventually excludes them)
        exact_points = sorted(iv.exact for iv in out if iv.exact is not None)
        if exact_points:
            for iv in out:
                if iv.exact is not None:
                    continue
                while any(iv.low < r < iv.high for r in exact_points):
                    mid = (iv.low + iv.high) / 2
                    s_mid = _eval_int_sign(work_sf, mid)
                    if s_mid == 0:
                        iv.exact = mid
                        iv.low = iv.high = mid
                        break
                    if s_mid == _eval_int_sign(work_sf, iv.low):
                        iv.low = mid
                    else:
                        iv.high = mid
    out.sort(key=lambda iv: (iv.low, iv.high))
    if with_multiplicity:
        for iv in out:
            iv.multiplicity_hint = _multiplicity_at(p_int, iv, sf)
    return out


def isolate_positive_roots(p, with_multiplicity: bool = False) -> list:
    """One isolating interval per distinct positive real root of p.

    Descartes sanity: the result count never exceeds the sign-variation
    count of the coefficient sequence (asserted).
    """
    p_int = _to_int(as_coeffs(p))
    if len(p_int) <= 1:
        return []
    bound = cauchy_root_bound(p_int)
    out = isolate_roots(p_int, Fraction(0), bound, with_multiplicity=with_multiplicity)
    out = [iv for iv in out if iv.exact is None or iv.exact > 0]
    descartes = sign_variations(list(reversed(_strip_origin(p_int)[0])))
    assert len(out) <= descartes, "Descartes bound violated: isolation is wrong"
    return out


def refine(p, interval: IsolatingInterval, tol) -> IsolatingInterval:
    """Shrink an isolating interval below `tol` by exact-sign bisection."""
    tol = rat(tol)
    if interval.exact is not None:
        return interval
    sf = squarefree_part(p)
    lo, hi = interval.low, interval.high
    s_lo = _eval_int_sign(sf, lo)
    s_hi = _eval_int_sign(sf, hi)
    if s_lo == 0 or s_hi == 0:
        root = lo if s_lo == 0 else hi
        return IsolatingInterval(root, root, interval.multiplicity_hint, exact=root)
    if s_lo == s_hi:
        raise StructuralError("interval does not bracket a sign change of the square-free part")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s_mid = _eval_int_sign(sf, mid)
        if s_mid == 0:
            return IsolatingInterval(mid, mid, interval.multiplicity_hint, exact=mid)
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return IsolatingInterval(lo, hi, interval.multiplicity_hint)
