"""Buchberger's algorithm over the rationals, with saturation and
lexicographic elimination.

Polynomials enter and leave as `MultiPoly`, but the engine works on term
maps with `gmpy2.mpz` integer coefficients and fraction-free reduction
steps, so no rational gcd happens in the hot path; the evolving
polynomial's leading monomial is tracked with a lazy max-heap instead of
rescanning.  Basis elements are stored (and returned) as primitive integer
polynomials with positive leading coefficient, which makes the reduced
basis canonical and runs bitwise-identical on identical input.

Pair pruning uses the Gebauer-Moller formulation of Buchberger's first
(coprime leading monomials) and second (chain) criteria; pair selection is
the normal strategy (minimal lcm under the active order, ties by index).
"""

from __future__ import annotations

import hashlib
import heapq
import json
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from gmpy2 import gcd as _mpz_gcd
from gmpy2 import mpq, mpz

from .exact import (
    MonomialOrder,
    MultiPoly,
    PolyRing,
    StructuralError,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

__all__ = [
    "Ideal",
    "GroebnerBasis",
    "GroebnerStats",
    "Budget",
    "BudgetExceededError",
    "normal_form",
    "s_polynomial",
    "buchberger",
    "lex_basis_via_quotient",
    "reduced_lex_basis",
    "saturate",
    "eliminate",
    "BasisCache",
]


@dataclass
class Budget:
    """Resource limits for a basis computation: exceeded -> error, never a
    silently truncated answer."""

    max_steps: int = 1_000_000
    max_terms: int = 2_500_000  # ~512 MB at a couple hundred bytes per stored term

    def copy(self) -> "Budget":
        return Budget(self.max_steps, self.max_terms)


class BudgetExceededError(RuntimeError):
    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats


@dataclass
class GroebnerStats:
    pairs: int = 0
    reductions: int = 0
    steps: int = 0
    seconds: float = 0.0


@dataclass
class Ideal:
    ring: PolyRing
    generators: list
    order: MonomialOrder

    def __post_init__(self):
        if not self.generators:
            raise StructuralError("ideal needs at least one generator")
        gens = []
        for g in self.generators:
            if g.ring != self.ring:
                raise StructuralError("generator not in the ideal's ring")
            if g:
                gens.append(g)
        if not gens:
            raise StructuralError("all generators are zero")
        self.generators = gens
        self.order._perm(self.ring)  # validate precedence


@dataclass
class GroebnerBasis:
    ring: PolyRing
    polynomials: list
    order: MonomialOrder
    reduced: bool
    stats: GroebnerStats = field(default_factory=GroebnerStats)

    def leading_monomials(self):
        key = self.order.key_func(self.ring)
        return [max(p.terms, key=key) for p in self.polynomials]


# ---------------------------------------------------------------------------
# engine: term maps with fraction-free integer (mpz) coefficients
# ---------------------------------------------------------------------------

def _to_engine(p: MultiPoly) -> dict:
    """Primitive integer version of p (positive content scaling only)."""
    return _to_engine_scaled(p)[0]


def _to_engine_scaled(p: MultiPoly):
    """(integer dict, scale) with p = scale * dict and dict primitive."""
    if not p.terms:
        return {}, Fraction(1)
    den = 1
    for c in p.terms.values():
        den = den * c.denominator // int(_mpz_gcd(den, c.denominator))
    ints = {m: mpz(c.numerator) * (den // c.denominator) for m, c in p.terms.items()}
    g = mpz(0)
    for c in ints.values():
        g = _mpz_gcd(g, c)
    return {m: c // g for m, c in ints.items()}, Fraction(int(g), den)


def _to_multipoly(ring: PolyRing, f: dict) -> MultiPoly:
    return MultiPoly(ring, {m: Fraction(int(c)) for m, c in f.items()})


def _make_primitive(f: dict, keyf) -> dict:
    """Divide by the integer content, force positive leading coefficient."""
    if not f:
        return {}
    g = mpz(0)
    for c in f.values():
        g = _mpz_gcd(g, c)
        if g == 1:
            break
    lead = max(f, key=keyf)
    if f[lead] < 0:
        g = -g
    if g == 1:
        return f
    return {m: c // g for m, c in f.items()}


class _Engine:
    """Shared state for one basis computation.

    Reduction is fraction-free: a cancellation step is
        f <- (lc_g/d) * f - (c/d) * m * g,      d = gcd(c, lc_g),
    with every coefficient an integer throughout.  The remainder is kept in
    a journal so rescales of the working polynomial do not rescan it; the
    exact overall multiplier is returned for callers that need the true
    rational remainder.
    """

    def __init__(self, ring: PolyRing, order: MonomialOrder, budget: Budget):
        self.ring = ring
        self.order = order
        self.key = order.key_func(ring)
        self.negkey = order.negkey_func(ring)
        self.budget = budget
        self.stats = GroebnerStats()
        self._stored_terms = 0

    def reduce(self, f: dict, basis: list):
        """Full normal form of f modulo basis entries.

        basis entries: (lm, negkey(lm), lc, tail_dict), primitive integer.
        Returns (remainder_dict, multiplier) where remainder = multiplier *
        true_remainder and multiplier is a positive integer.
        """
        if not f:
            return f, 1
        negkey = self.negkey
        nk_cache: dict = {}

        def nk(m):
            v = nk_cache.get(m)
            if v is None:
                v = nk_cache[m] = negkey(m)
            return v

        heap = [(nk(m), m) for m in f]
        heapq.heapify(heap)
        push = heapq.heappush
        rem_items = []   # (mono, coeff, version)
        scales = []      # multipliers applied to f after each version
        steps = 0
        max_steps = self.budget.max_steps
        strip_countdown = 64
        lms = [(e[0], e[2], e[3]) for e in basis]
        while heap:
            if len(heap) > 4 * len(f) + 1024:
                heap = [(nk(m2), m2) for m2 in f]
                heapq.heapify(heap)
                if not heap:
                    break
            _, m = heapq.heappop(heap)
            c = f.get(m)
            if not c:
                f.pop(m, None)
                continue
            hit = None
            for lm, lc, tail in lms:
                for x, y in zip(lm, m):
                    if x > y:
                        break
                else:
                    hit = (lm, lc, tail)
                    break
            if hit is None:
                del f[m]
                rem_items.append((m, c, len(scales)))
                continue
            del f[m]
            lm, lc, tail = hit
            q = tuple(x - y for x, y in zip(m, lm))
            steps += 1
            if steps + self.stats.steps > max_steps:
                self.stats.steps += steps
                raise BudgetExceededError(
                    f"reduction step budget exhausted ({max_steps})", self.stats
                )
            d = _mpz_gcd(c, lc)
            a = lc // d
            b = c // d
            if a != 1:
                for m2 in f:
                    f[m2] *= a
                scales.append(int(a))
            if any(q):
                for mt, ct in tail.items():
                    m2 = mono_mul(mt, q)
                    s = f.get(m2, 0) - b * ct
                    if s:
                        if m2 not in f:
                            push(heap, (nk(m2), m2))
                        f[m2] = s
                    else:
                        f.pop(m2, None)
            else:
                for m2, ct in tail.items():
                    s = f.get(m2, 0) - b * ct
                    if s:
                        if m2 not in f:
                            push(heap, (nk(m2), m2))
                        f[m2] = s
                    else:
                        f.pop(m2, None)
            strip_countdown -= 1
            if strip_countdown == 0:
                strip_countdown = 64
                g = mpz(0)
                for v in f.values():
                    g = _mpz_gcd(g, v)
                    if g == 1:
                        break
                if g > 1:
                    for m2 in f:
                        f[m2] //= g
                    scales.append(Fraction(1, int(g)))
        self.stats.steps += steps
        self.stats.reductions += 1
        # apply the scale journal: each remainder entry picks up the product
        # of every multiplier recorded after it
        suffix = [Fraction(1)] * (len(scales) + 1)
        for i in range(len(scales) - 1, -1, -1):
            suffix[i] = suffix[i + 1] * scales[i]
        total = suffix[0]
        remainder = {}
        den_lcm = 1
        vals = []
        for m, c, ver in rem_items:
            v = Fraction(int(c)) * suffix[ver]
            vals.append((m, v))
            den_lcm = den_lcm * v.denominator // int(_mpz_gcd(den_lcm, v.denominator))
        for m, v in vals:
            remainder[m] = mpz(v.numerator) * (den_lcm // v.denominator)
        return remainder, den_lcm * total

    def make_entry(self, f: dict):
        """(lm, negkey(lm), lc, tail) for a primitive integer polynomial."""
        f = _make_primitive(f, self.key)
        lm = max(f, key=self.key)
        lc = f[lm]
        tail = {m: c for m, c in f.items() if m != lm}
        self._stored_terms += len(tail) + 1
        if self._stored_terms > self.budget.max_terms:
            raise BudgetExceededError(
                f"term storage budget exhausted ({self.budget.max_terms})", self.stats
            )
        return (lm, self.negkey(lm), lc, tail)


def _spair(e1, e2) -> dict:
    """Fraction-free S-polynomial of two basis entries; leaders cancel."""
    lm1, _, lc1, t1 = e1
    lm2, _, lc2, t2 = e2
    l = mono_lcm(lm1, lm2)
    q1 = mono_div(l, lm1)
    q2 = mono_div(l, lm2)
    d = _mpz_gcd(lc1, lc2)
    a1 = lc2 // d
    a2 = lc1 // d
    out = {}
    for m, c in t1.items():
        out[mono_mul(m, q1)] = a1 * c
    for m, c in t2.items():
        m2 = mono_mul(m, q2)
        s = out.get(m2, 0) - a2 * c
        if s:
            out[m2] = s
        else:
            out.pop(m2, None)
    return out


def _gm_update(G: set, B: set, ih: int, entries: list) -> tuple:
    """Gebauer-Moller pair update: add polynomial ih, prune critical pairs.

    Implements Buchberger's coprimality and chain criteria; mirrors the
    classical GROEBNERNEWS2 bookkeeping.
    """
    lm = {i: entries[i][0] for i in G}
    mh = entries[ih][0]

    C = set(G)
    D = set()
    while C:
        ig = min(C)  # deterministic
        C.remove(ig)
        mg = lm[ig]
        lcm_hg = mono_lcm(mh, mg)

        def lcm_divides(ip):
            return mono_divides(mono_lcm(mh, entries[ip][0]), lcm_hg)

        if mono_mul(mh, mg) == lcm_hg or (
            not any(lcm_divides(ip) for ip in C)
            and not any(lcm_divides(pr[1] if pr[0] == ih else pr[0]) for pr in D)
        ):
            D.add((ih, ig))

    E = set()
    for ih2, ig in D:
        mg = entries[ig][0]
        if mono_mul(mh, mg) != mono_lcm(mh, mg):
            E.add((min(ih2, ig), max(ih2, ig)))

    B_new = set()
    for ig1, ig2 in B:
        m1, m2 = entries[ig1][0], entries[ig2][0]
        lcm_12 = mono_lcm(m1, m2)
        if (
            not mono_divides(mh, lcm_12)
            or mono_lcm(m1, mh) == lcm_12
            or mono_lcm(m2, mh) == lcm_12
        ):
            B_new.add((ig1, ig2))
    B_new |= E

    G_new = {ig for ig in G if not mono_divides(mh, lm[ig])}
    G_new.add(ih)
    return G_new, B_new


def _buchberger_engine(ring, order, gens: list, budget: Budget) -> tuple:
    """Core loop on engine dicts; returns (list of primitive-int dicts, stats)."""
    eng = _Engine(ring, order, budget)
    t0 = time.monotonic()
    key = eng.key

    # mutual pre-reduction of the input generators
    work = [g for g in gens if g]
    entries = []
    for g in sorted(work, key=lambda d: key(max(d, key=key))):
        r, _ = eng.reduce(dict(g), entries)
        if r:
            entries.append(eng.make_entry(r))
    if not entries:
        raise StructuralError("all generators reduce to zero")

    G: set = set()
    B: set = set()
    for i in range(len(entries)):
        G, B = _gm_update(G, B, i, entries)

    while B:
        pair = min(B, key=lambda p: (key(mono_lcm(entries[p[0]][0], entries[p[1]][0])), p))
        B.remove(pair)
        eng.stats.pairs += 1
        i, j = pair
        s = _spair(entries[i], entries[j])
        basis_now = [entries[g] for g in sorted(G, key=lambda g: key(entries[g][0]))]
        r, _ = eng.reduce(s, basis_now)
        if r:
            entries.append(eng.make_entry(r))
            G, B = _gm_update(G, B, len(entries) - 1, entries)

    # minimal basis, then full inter-reduction (tails included)
    keep = sorted(G, key=lambda g: key(entries[g][0]))
    minimal = []
    for g in keep:
        mg = entries[g][0]
        if not any(h != g and mono_divides(entries[h][0], mg) for h in keep):
            minimal.append(g)
    reduced = []
    final_entries = [entries[g] for g in minimal]
    for idx, g in enumerate(minimal):
        others = [final_entries[k] for k in range(len(minimal)) if k != idx]
        lm, _, lc, tail = entries[g]
        full = dict(tail)
        full[lm] = lc
        r, _ = eng.reduce(full, others)
        prim = _make_primitive(r, key)
        reduced.append(prim)
        final_entries[idx] = eng.make_entry(dict(prim))
    reduced.sort(key=lambda d: key(max(d, key=key)), reverse=True)
    eng.stats.seconds = time.monotonic() - t0
    return reduced, eng.stats


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def normal_form(p: MultiPoly, basis: list, order: MonomialOrder) -> MultiPoly:
    """Remainder of p on division by `basis`: no remainder term is divisible
    by a basis leading monomial, and p - remainder lies in the ideal."""
    for b in basis:
        if b.ring != p.ring:
            raise StructuralError("basis polynomial in a different ring")
    eng = _Engine(p.ring, order, Budget())
    entries = [eng.make_entry(_to_engine(b)) for b in basis if b]
    f, scale = _to_engine_scaled(p)
    r, mult = eng.reduce(f, entries)
    factor = scale / mult
    return MultiPoly(p.ring, {m: Fraction(int(c)) * factor for m, c in r.items()})


def s_polynomial(f: MultiPoly, g: MultiPoly, order: MonomialOrder) -> MultiPoly:
    """S(f, g) = (lcm/lt(f)) f - (lcm/lt(g)) g; the leading terms cancel."""
    if not f or not g:
        raise StructuralError("S-polynomial of a zero polynomial")
    if f.ring != g.ring:
        raise StructuralError("ring mismatch")
    mf, cf = f.leading(order)
    mg, cg = g.leading(order)
    l = mono_lcm(mf, mg)
    ring = f.ring
    tf = MultiPoly(ring, {mono_div(l, mf): Fraction(1) / cf})
    tg = MultiPoly(ring, {mono_div(l, mg): Fraction(1) / cg})
    return tf * f - tg * g


def buchberger(ideal: Ideal, budget: Budget = None, two_stage: bool = False,
               cache: "BasisCache" = None) -> GroebnerBasis:
    """Reduced Groebner basis of `ideal` under its order.

    With ``two_stage=True`` a graded-reverse-lex basis is computed first and
    used as the generator set for the final run; the reduced result is
    identical either way (it is canonical), the intermediate route is just
    cheaper on hard lexicographic eliminations.
    """
    if budget is None:
        budget = Budget()
    if cache is not None:
        hit = cache.get(ideal, two_stage, budget=budget)
        if hit is not None:
            return hit
    gens = [_to_engine(g) for g in ideal.generators]
    total = GroebnerStats()
    try:
        if two_stage and ideal.order.kind == "lex":
            pre_order = MonomialOrder.grevlex(*ideal.order.precedence)
            gens, pre_stats = _buchberger_engine(ideal.ring, pre_order, gens, budget)
            total.pairs += pre_stats.pairs
            total.reductions += pre_stats.reductions
            total.steps += pre_stats.steps
            total.seconds += pre_stats.seconds
            remaining = budget.copy()
            remaining.max_steps = max(budget.max_steps - pre_stats.steps, 1)
        else:
            remaining = budget
        polys, stats = _buchberger_engine(ideal.ring, ideal.order, gens, remaining)
    except BudgetExceededError:
        if cache is not None:
            cache.put_failure(ideal, two_stage, budget.max_steps)
        raise
    total.pairs += stats.pairs
    total.reductions += stats.reductions
    total.steps += stats.steps
    total.seconds += stats.seconds
    gb = GroebnerBasis(
        ring=ideal.ring,
        polynomials=[_to_multipoly(ideal.ring, p) for p in polys],
        order=ideal.order,
        reduced=True,
        stats=total,
    )
    if cache is not None:
        cache.put(ideal, two_stage, gb)
    return gb


def _quotient_monomial_basis(lms: list, nvars: int, cap: int) -> list:
    """Monomials not divisible by any leading monomial: the vector-space
    basis of the quotient ring.  Finite iff the ideal is zero-dimensional."""
    for i in range(nvars):
        if not any(all(e == 0 for j, e in enumerate(lm) if j != i) and lm[i] > 0 for lm in lms):
            raise StructuralError(
                "ideal is not zero-dimensional: no pure power of "
                f"variable #{i} among the leading monomials"
            )
    basis = []
    seen = set()
    stack = [(0,) * nvars]
    while stack:
        m = stack.pop()
        if m in seen:
            continue
        seen.add(m)
        if any(mono_divides(lm, m) for lm in lms):
            continue
        basis.append(m)
        if len(basis) > cap:
            raise BudgetExceededError(f"quotient dimension exceeds {cap}")
        for i in range(nvars):
            m2 = tuple(e + 1 if j == i else e for j, e in enumerate(m))
            if m2 not in seen:
                stack.append(m2)
    return basis


def lex_basis_via_quotient(grevlex_gb: GroebnerBasis, lex_order: MonomialOrder,
                           budget: Budget = None, quotient_cap: int = 4096) -> GroebnerBasis:
    """Change of order to lex for a zero-dimensional ideal (FGLM walk).

    Walks monomials in increasing lex order, computes their normal forms
    against the graded basis, and finds linear dependencies over the
    quotient vector space; each dependency is one reduced-lex-basis element.
    Produces exactly the reduced basis Buchberger would, without the
    intermediate coefficient swell of lexicographic reduction.
    """
    if budget is None:
        budget = Budget()
    ring = grevlex_gb.ring
    eng = _Engine(ring, grevlex_gb.order, budget)
    entries = [eng.make_entry(_to_engine(p)) for p in grevlex_gb.polynomials]
    lms = [e[0] for e in entries]
    qbasis = _quotient_monomial_basis(lms, ring.nvars, quotient_cap)
    qindex = {m: i for i, m in enumerate(qbasis)}
    dim = len(qbasis)

    lex_key = lex_order.key_func(ring)
    pivots: dict = {}   # pivot column -> (echelon row, combination over indep)
    indep: list = []    # monomials whose NF vectors are independent so far
    nf_of: list = []    # normal form of each independent monomial, as a dict
    lex_lms: list = []  # leading monomials of the lex basis found so far
    out_polys: list = []
    zero = mpq(0)
    one_q = mpq(1)
    one = (0,) * ring.nvars
    # frontier entries carry the parent's independent index so the normal
    # form is one variable-multiplication away from a known one
    frontier = [(lex_key(one), one, None, None)]
    seen = {one}
    while frontier:
        _, m, parent, var_idx = heapq.heappop(frontier)
        if any(mono_divides(lb, m) for lb in lex_lms):
            continue
        if parent is None:
            nf = {one: one_q}
        else:
            shifted = {}
            for mm, c in nf_of[parent].items():
                shifted[tuple(e + 1 if j == var_idx else e for j, e in enumerate(mm))] = c
            if all(mm in qindex for mm in shifted):
                nf = shifted
            else:
                den = 1
                for c in shifted.values():
                    den = den * c.denominator // int(_mpz_gcd(den, c.denominator))
                ints = {mm: mpz(c.numerator) * (den // c.denominator)
                        for mm, c in shifted.items()}
                r, mult = eng.reduce(ints, entries)
                inv = one_q / (mpq(mult.numerator, mult.denominator) * den)
                nf = {mm: c * inv for mm, c in r.items()}
        vec = [zero] * dim
        for mm, c in nf.items():
            vec[qindex[mm]] = c
        dep = _echelon_insert(pivots, vec, dim, len(indep))
        if dep is None:
            idx = len(indep)
            indep.append(m)
            nf_of.append(nf)
            for i in range(ring.nvars):
                m2 = tuple(e + 1 if j == i else e for j, e in enumerate(m))
                if m2 not in seen:
                    seen.add(m2)
                    heapq.heappush(frontier, (lex_key(m2), m2, idx, i))
        else:
            terms = {m: Fraction(1)}
            for idx, c in enumerate(dep):
                if c:
                    prev = terms.get(indep[idx], Fraction(0))
                    terms[indep[idx]] = prev - Fraction(c.numerator, c.denominator)
            poly = MultiPoly(ring, terms)
            out_polys.append(poly.content_primitive(lex_order)[1])
            lex_lms.append(m)
    key = lex_order.key_func(ring)
    out_polys.sort(key=lambda p: key(max(p.terms, key=key)), reverse=True)
    stats = GroebnerStats(
        pairs=grevlex_gb.stats.pairs,
        reductions=eng.stats.reductions + grevlex_gb.stats.reductions,
        steps=eng.stats.steps + grevlex_gb.stats.steps,
        seconds=grevlex_gb.stats.seconds,
    )
    return GroebnerBasis(ring, out_polys, lex_order, reduced=True, stats=stats)


def _echelon_insert(pivots: dict, vec: list, dim: int, next_index: int):
    """Gauss-reduce vec against the echelon rows; on independence insert it
    (normalized) and return None, else return the dependency coefficients
    over the previously inserted vectors.

    Invariants: a stored row satisfies  row = sum_k rcombo[k] * original_k;
    during reduction the working vector satisfies
        vec = original_{next_index} + sum_k combo[k] * original_k.
    """
    zero = mpq(0)
    combo: dict = {}
    for col in range(dim):
        c = vec[col]
        if not c:
            continue
        hit = pivots.get(col)
        if hit is None:
            scale = mpq(1) / c
            row = [v * scale for v in vec]
            rcombo = {k: v * scale for k, v in combo.items()}
            rcombo[next_index] = scale
            pivots[col] = (row, rcombo)
            return None
        row, rcombo = hit
        for j in range(col, dim):
            if row[j]:
                vec[j] -= c * row[j]
        for k, v in rcombo.items():
            combo[k] = combo.get(k, zero) - c * v
    # vec reduced to zero: original_next = -sum combo[k] * original_k
    out = [zero] * next_index
    for k, v in combo.items():
        out[k] = -v
    return out


def reduced_lex_basis(ideal: Ideal, budget: Budget = None, cache: "BasisCache" = None,
                      strategy: str = "auto") -> GroebnerBasis:
    """Reduced lex basis of `ideal` by the configured route.

    strategy: 'buchberger' (direct), 'two_stage' (graded basis feeding a
    second Buchberger run), or 'auto' (graded Buchberger basis, then the
    quotient-walk order change; falls back to direct Buchberger when the
    ideal is not zero-dimensional).
    """
    if ideal.order.kind != "lex":
        raise StructuralError("reduced_lex_basis needs a lex target order")
    if budget is None:
        budget = Budget()
    if strategy == "buchberger":
        return buchberger(ideal, budget=budget, cache=cache)
    if strategy == "two_stage":
        return buchberger(ideal, budget=budget, two_stage=True, cache=cache)
    if strategy != "auto":
        raise StructuralError(f"unknown strategy {strategy!r}")
    if cache is not None:
        hit = cache.get(ideal, False, budget=budget)
        if hit is not None:
            return hit
    try:
        pre_order = MonomialOrder.grevlex(*ideal.order.precedence)
        pre = buchberger(Ideal(ideal.ring, ideal.generators, pre_order), budget=budget)
        try:
            gb = lex_basis_via_quotient(pre, ideal.order, budget=budget)
        except StructuralError:
            gb = buchberger(ideal, budget=budget, two_stage=False, cache=None)
    except BudgetExceededError:
        if cache is not None:
            cache.put_failure(ideal, False, budget.max_steps)
        raise
    if cache is not None:
        cache.put(ideal, False, gb)
    return gb


def saturate(ideal: Ideal, vars_nonzero: list, z_name: str = "z") -> Ideal:
    """Rabinowitsch trick: extend the ring by `z_name` and force the product
    of `vars_nonzero` to be invertible via  z * prod - 1."""
    if not vars_nonzero:
        return ideal
    if z_name in ideal.ring.vars:
        raise StructuralError(f"saturation variable {z_name!r} already in ring")
    new_ring = PolyRing((z_name,) + ideal.ring.vars)
    order = MonomialOrder(ideal.order.kind, (z_name,) + ideal.order.precedence)
    lift = {v: new_ring.var(v) for v in ideal.ring.vars}
    gens = [g.substitute(lift, into=new_ring) for g in ideal.generators]
    prod = new_ring.var(z_name)
    for v in vars_nonzero:
        prod = prod * new_ring.var(v)
    gens.append(prod - new_ring.one())
    return Ideal(new_ring, gens, order)


def eliminate(basis: GroebnerBasis, keep: list) -> list:
    """Members of a lex basis involving only the kept variables.

    Requires every eliminated variable to precede every kept variable in the
    order; by elimination theory the result generates the elimination ideal.
    """
    if basis.order.kind != "lex":
        raise StructuralError("elimination requires a lexicographic basis")
    keep_set = set(keep)
    for v in keep_set:
        basis.ring.position(v)
    positions = {v: i for i, v in enumerate(basis.order.precedence)}
    kept_min = min((positions[v] for v in keep_set), default=len(positions))
    for v in basis.ring.vars:
        if v not in keep_set and positions[v] > kept_min:
            raise StructuralError(
                f"order incompatible with keep-set: eliminated {v!r} follows a kept variable"
            )
    return [p for p in basis.polynomials if p.variables() <= keep_set]


# ---------------------------------------------------------------------------
# basis cache
# ---------------------------------------------------------------------------

class BasisCache:
    """Reduced bases serialized to JSON files keyed by a content hash of
    (ring, order, generators)."""

    def __init__(self, directory):
        self.directory = Path(directory)

    def _key(self, ideal: Ideal, two_stage: bool) -> str:
        gens = sorted(
            g.content_primitive(ideal.order)[1].text(ideal.order) for g in ideal.generators
        )
        blob = json.dumps(
            {
                "ring": list(ideal.ring.vars),
                "order": [ideal.order.kind, list(ideal.order.precedence)],
                "generators": gens,
            },
            separators=(",", ":"),
        )
        return hashlib.sha256(blob.encode()).hexdigest()

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, ideal: Ideal, two_stage: bool = False, budget: Budget = None):
        """Cached basis, or None; a recorded budget failure at least as
        generous as the requested budget re-raises immediately."""
        path = self._path(self._key(ideal, two_stage))
        if not path.exists():
            return None
        try:
            data = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            return None
        if "budget_exceeded" in data:
            tried = data["budget_exceeded"].get("max_steps", 0)
            if budget is not None and tried >= budget.max_steps:
                raise BudgetExceededError(
                    f"cached budget failure (tried {tried} steps)")
            return None
        ring = PolyRing(data["ring"])
        order = MonomialOrder(data["order"][0], tuple(data["order"][1]))
        polys = [ring.parse(s) for s in data["basis"]]
        st = data.get("stats", {})
        stats = GroebnerStats(
            pairs=st.get("pairs", 0),
            reductions=st.get("reductions", 0),
            steps=st.get("steps", 0),
            seconds=st.get("seconds", 0.0),
        )
        return GroebnerBasis(ring, polys, order, reduced=True, stats=stats)

    def put_failure(self, ideal: Ideal, two_stage: bool, max_steps: int) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        key = self._key(ideal, two_stage)
        path = self._path(key)
        if path.exists():
            try:
                old = json.loads(path.read_text())
            except (OSError, json.JSONDecodeError):
                old = {}
            if "budget_exceeded" not in old:
                return  # a real basis is already cached
            max_steps = max(max_steps, old["budget_exceeded"].get("max_steps", 0))
        tmp = path.with_suffix(f".tmp{os.getpid()}")
        tmp.write_text(json.dumps({"budget_exceeded": {"max_steps": max_steps}}))
        os.replace(tmp, path)

    def put(self, ideal: Ideal, two_stage: bool, gb: GroebnerBasis) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        key = self._key(ideal, two_stage)
        data = {
            "ring": list(gb.ring.vars),
            "order": [gb.order.kind, list(gb.order.precedence)],
            "generators": sorted(
                g.content_primitive(ideal.order)[1].text(ideal.order) for g in ideal.generators
            ),
            "basis": [p.text(gb.order) for p in gb.polynomials],
            "stats": {
                "pairs": gb.stats.pairs,
                "reductions": gb.stats.reductions,
                "steps": gb.stats.steps,
                "seconds": gb.stats.seconds,
            },
        }
        tmp = self._path(key).with_suffix(f".tmp{os.getpid()}")
        tmp.write_text(json.dumps(data, indent=1))
        os.replace(tmp, self._path(key))
