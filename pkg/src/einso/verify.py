"""Reproduction harness: recompute every published quantity and compare.

Each check returns a `CheckResult` with the expected value (tagged with its
provenance in the published reference results), the recomputed value, and a
status.  `run_verification` assembles the full report; budget exhaustion
marks the affected checks "skipped(budget)" instead of failing them.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Optional

from . import reference as ref
from .algebraic import interval_poly_eval
from .einstein import (
    build_system,
    classify,
    count_table,
    dedup_isometry,
    scale_to_unit,
    solve_exact,
    solve_numeric,
    v_eq,
    v_float,
)
from .exact import MonomialOrder, MultiPoly, PolyRing, rat
from .groebner import (
    BasisCache,
    Budget,
    BudgetExceededError,
    Ideal,
    eliminate,
    normal_form,
    reduced_lex_basis,
    s_polynomial,
)
from .liealg import Decomposition, so_basis, bracket, triplets_bruteforce, triplets_closed_form
from .realroots import count_roots, isolate_positive_roots, refine, sign_at
from .ricci import ricci_closed_form, ricci_generic, ricci_offdiag_check
from dataclasses import replace

__all__ = ["CheckResult", "VerificationReport", "run_verification", "ALL_CHECKS"]


@dataclass
class CheckResult:
    name: str
    expected: str
    actual: str
    status: str      # "pass" | "fail" | "skipped(budget)"
    runtime: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass
class VerificationReport:
    checks: list = dc_field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def as_json_dict(self) -> dict:
        return {
            "checks": [
                {
                    "name": c.name,
                    "expected": c.expected,
                    "actual": c.actual,
                    "status": c.status,
                    "runtime": round(c.runtime, 3),
                    "note": c.note,
                }
                for c in self.checks
            ],
            "all_passed": self.all_passed,
        }


def _decompositions(n_lo: int, n_hi: int):
    for n in range(n_lo, n_hi + 1):
        for k1 in range(n - 2, 0, -1):
            for k2 in range(min(k1, n - k1 - 1), 0, -1):
                k3 = n - k1 - k2
                if 1 <= k3 <= k2:
                    yield Decomposition(k1, k2, k3)


def _scaled_tuple(rec) -> tuple:
    names = ("x1", "x2", "x12", "x23", "x13")
    return tuple(v_float(rec.scaled_coordinates[v]) for v in names if v in rec.scaled_coordinates)


def _pipeline(d: Decomposition, budget=None, cache=None):
    sys = build_system(d)
    recs = solve_exact(sys, budget=budget, cache=cache)
    recs = [scale_to_unit(r, sys.ricci) for r in recs]
    recs = [replace(r, classification=classify(r)) for r in recs]
    return sys, dedup_isometry(recs, d)


# ---------------------------------------------------------------------------
# the acceptance checks
# ---------------------------------------------------------------------------

def check_triplet_equivalence(config) -> CheckResult:
    t0 = time.monotonic()
    bad = [d.k for d in _decompositions(5, 12)
           if triplets_bruteforce(d) != triplets_closed_form(d)]
    return CheckResult(
        "triplets-bruteforce-equals-closed-form",
        expected="identical tables for every decomposition, 5 <= n <= 12 "
                 "[reference: closed-form triplet relations]",
        actual="all equal" if not bad else f"mismatch at {bad}",
        status="pass" if not bad else "fail",
        runtime=time.monotonic() - t0,
    )


def check_ricci_oracle(config) -> CheckResult:
    t0 = time.monotonic()
    bad = []
    for d in _decompositions(5, 12):
        gen = ricci_generic(d)
        clo = ricci_closed_form(d)
        for lab in gen.components:
            n1, d1 = gen.components[lab]
            n2, d2 = clo.components[lab]
            if not (n1 * d2 - n2 * d1).is_zero():
                bad.append((d.k, lab))
    return CheckResult(
        "ricci-generic-equals-closed-form",
        expected="zero cross-multiplied difference for every component, 5 <= n <= 12 "
                 "[reference: closed-form Ricci components]",
        actual="all equal" if not bad else f"mismatch at {bad}",
        status="pass" if not bad else "fail",
        runtime=time.monotonic() - t0,
    )


def check_biinvariant(config) -> CheckResult:
    t0 = time.monotonic()
    bad = []
    quarter = Fraction(1, 4)
    for d in _decompositions(5, 12):
        sys = ricci_generic(d)
        pt = {v: Fraction(1) for v in sys.ring.vars}
        vals = sys.evaluate_at(pt)
        if any(v != quarter for v in vals.values()):
            bad.append(d.k)
    return CheckResult(
        "biinvariant-metric-components-quarter",
        expected="every component equals 1/4 at the all-ones metric",
        actual="all 1/4" if not bad else f"mismatch at {bad}",
        status="pass" if not bad else "fail",
        runtime=time.monotonic() - t0,
    )


def _univariate_in(p: MultiPoly, var: str) -> MultiPoly:
    R = PolyRing([var])
    pos = p.ring.position(var)
    return MultiPoly(R, {(m[pos],): c for m, c in p.terms.items()})


def _scalar_multiple(a: MultiPoly, b: MultiPoly) -> bool:
    if a.is_zero() or b.is_zero():
        return a.is_zero() and b.is_zero()
    order = MonomialOrder.lex(*a.ring.vars)
    ca = a.leading(order)[1]
    cb = b.leading(order)[1]
    return (a * cb - b * ca).is_zero()


def _so7_ideal(cache=None, budget=None):
    d = Decomposition(3, 3, 1)
    sys = build_system(d)
    from .einstein import _default_precedence, _saturate_with_extras

    prec = _default_precedence(d, sys.ring.vars)
    order = MonomialOrder.lex(*prec)
    ideal = Ideal(sys.ring, sys.polynomials, order)
    return _saturate_with_extras(ideal, list(sys.ring.vars), [])


def check_so7_eliminant(config) -> CheckResult:
    t0 = time.monotonic()
    try:
        sat = _so7_ideal()
        gb = reduced_lex_basis(sat, budget=config.budget, cache=config.cache)
    except BudgetExceededError:
        return CheckResult(
            "so7-eliminant-product", "degree-31 product", "budget exhausted",
            "skipped(budget)", time.monotonic() - t0)
    eli = eliminate(gb, ["x13"])[0]
    Rx = PolyRing(["x13"])
    prod = Rx.one()
    for f in ref.ELIMINANT_FACTORS_331:
        prod = prod * Rx.parse(f)
    prod = prod * MultiPoly.from_univariate(Rx, "x13", list(reversed(ref.H1_COEFFS)))
    ok = _scalar_multiple(_univariate_in(eli, "x13"), prod)
    return CheckResult(
        "so7-eliminant-product",
        expected="(x13-1)(6x13^3-44x13^2+90x13-45)(45x13^3-90x13^2+44x13-6) * h1, "
                 "h1 of degree 24 with the 25 published coefficients",
        actual="scalar multiple confirmed by exact division" if ok else "mismatch",
        status="pass" if ok else "fail",
        runtime=time.monotonic() - t0,
    )


def check_so7_metrics(config) -> CheckResult:
    t0 = time.monotonic()
    try:
        _, recs = _pipeline(Decomposition(3, 3, 1), budget=config.budget, cache=config.cache)
    except BudgetExceededError:
        return CheckResult("so7-einstein-classes", "1 non-NR + 5 NR", "budget exhausted",
                           "skipped(budget)", time.monotonic() - t0)
    non = [r for r in recs if r.classification.kind == "non_nr"]
    nr = [r for r in recs if r.classification.kind == "nr"]
    ok = len(non) == 1 and len(nr) == 5
    detail = f"{len(non)} non-NR, {len(nr)} NR"
    if ok:
        got = _scaled_tuple(non[0])
        swapped = (got[1], got[0], got[2], got[4], got[3])
        ok = any(
            all(abs(g - e) < 1e-4 for g, e in zip(cand, ref.SO7_NON_NR_SCALED))
            for cand in (got, swapped)
        )
        detail += "; scaled " + str(tuple(round(g, 7) for g in got))
    return CheckResult(
        "so7-einstein-classes",
        expected=f"one non-NR class with scaled coordinates {ref.SO7_NON_NR_SCALED} "
                 "(tolerance 1e-4) and five NR classes",
        actual=detail,
        status="pass" if ok else "fail",
        runtime=time.monotonic() - t0,
    )


def check_so8_eliminant(config) -> CheckResult:
    t0 = time.monotonic()
    d = Decomposition(4, 3, 1)
    sys = build_system(d)
    from .einstein import _default_precedence, _saturate_with_extras

    prec = _default_precedence(d, sys.ring.vars)
    ideal = Ideal(sys.ring, sys.polynomials, MonomialOrder.lex(*prec))
    try:
        gb = reduced_lex_basis(
            _saturate_with_extras(ideal, list(sys.ring.vars), []),
            budget=config.budget, cache=config.cache)
    except BudgetExceededError:
        return CheckResult("so8-eliminant-product", "degree-35 product", "budget exhausted",
                           "skipped(budget)", time.monotonic() - t0)
    eli = eliminate(gb, ["x13"])[0]
    Rx = PolyRing(["x13"])
    prod = Rx.one()
    for f in ref.ELIMINANT_FACTORS_431:
        prod = prod * Rx.parse(f)
    prod = prod * MultiPoly.from_univariate(Rx, "x13", list(reversed(ref.H2_COEFFS)))
    ok = _scalar_multiple(_univariate_in(eli, "x13"), prod)
    return CheckResult(
        "so8-eliminant-product",
        expected="(x13-5)(x13-1)(7x13^2-24x13+14)(287x13^3-625x13^2+369x13-63) * h2, "
                 "h2 of degree 28 with the 29 published coefficients",
        actual="scalar multiple confirmed by exact division" if ok else "mismatch",
        status="pass" if ok else "fail",
        runtime=time.monotonic() - t0,
    )


def check_so8_metrics(config) -> CheckResult:
    t0 = time.monotonic()
    try:
        _, recs = _pipeline(Decomposition(4, 3, 1), budget=config.budget, cache=config.cache)
    except BudgetExceededError:
        return CheckResult("so8-einstein-classes", "2 non-NR + 7 NR", "budget exhausted",
                           "skipped(budget)", time.monotonic() - t0)
    non = [r for r in recs if r.classification.kind == "non_nr"]
    nr = [r for r in recs if r.classification.kind == "nr"]
    ok = len(non) == 2 and len(nr) == 7
    detail = f"{len(non)} non-NR, {len(nr)} NR"
    if ok:
        tuples = sorted(_scaled_tuple(r) for r in non)
        expect = sorted(ref.SO8_NON_NR_SCALED)
        ok = all(
            abs(g - e) < 1e-5 for got, exp in zip(tuples, expect) for g, e in zip(got, exp)
        )
        detail += "; scaled " + str([tuple(round(g, 8) for g in t) for t in tuples])
    return CheckResult(
        "so8-einstein-classes",
        expected=f"two non-isometric non-NR classes {ref.SO8_NON_NR_SCALED} "
                 "(tolerance 1e-5) and seven NR classes",
        actual=detail,
        status="pass" if ok else "fail",
        runtime=time.monotonic() - t0,
    )


def check_specialized_tower(config) -> CheckResult:
    """Sign analysis and eliminant identity for the (n-6,3,3) specialization."""
    t0 = time.monotonic()
    problems = []
    for n in range(9, 13):
        coeffs = ref.specialized_eliminant_coeffs(n)
        Rx = PolyRing(["x23"])
        h = MultiPoly.from_univariate(Rx, "x23", coeffs)
        # exact sign checks
        if sign_at(coeffs, 0) <= 0:
            problems.append((n, "h(0) not positive"))
        if n > 9 and sign_at(coeffs, 1) >= 0:
            problems.append((n, "h(1) not negative"))
        if n == 9 and sign_at(coeffs, 1) != 0:
            problems.append((n, "h(1) nonzero at n=9"))
        if n == 9 and sign_at(coeffs, Fraction(6, 5)) >= 0:
            problems.append((n, "h(6/5) not negative at n=9"))
        if sign_at(coeffs, 2) <= 0:
            problems.append((n, "h(2) not positive"))
        # root bracketing
        if n > 9:
            if count_roots(coeffs, 0, 1) != 1 or count_roots(coeffs, 1, 2) != 1:
                problems.append((n, "roots not bracketed as 0 < a < 1 < b < 2"))
        else:
            if count_roots(coeffs, Fraction(6, 5), 2) != 1:
                problems.append((n, "second root not in (6/5, 2)"))
        # recompute the eliminant and compare
        k1 = n - 6
        d = Decomposition(max(k1, 3), 3, min(k1, 3))
        sys = build_system(d)
        try:
            recs = solve_exact(
                sys,
                specialization={"x12": "1", "x13": "1", "x3": "x2"},
                extra_nonzero=["x2 - x23"],
                budget=config.budget,
                cache=config.cache,
            )
        except BudgetExceededError:
            return CheckResult("specialized-tower-sign-analysis", "...", "budget exhausted",
                               "skipped(budget)", time.monotonic() - t0)
        from .einstein import _saturate_with_extras, _specialized_polys

        ring, polys, _ = _specialized_polys(sys, {"x12": "1", "x13": "1", "x3": "x2"})
        prec = [v for v in ring.vars if v != "x23"] + ["x23"]
        sat = _saturate_with_extras(
            Ideal(ring, polys, MonomialOrder.lex(*prec)), list(ring.vars),
            [ring.parse("x2 - x23")])
        gb = reduced_lex_basis(sat, budget=config.budget, cache=config.cache)
        eli = [p for p in gb.polynomials if p.variables() <= {"x23"}][0]
        if not _scalar_multiple(_univariate_in(eli, "x23"), h):
            problems.append((n, "eliminant differs from the published polynomial"))
        if len(recs) != 2:
            problems.append((n, f"expected 2 positive solutions, got {len(recs)}"))
        for r in recs:
            if v_float(r.coordinates["x1"]) <= 0 or v_float(r.coordinates["x2"]) <= 0:
                problems.append((n, "back-substituted coordinate not positive"))
            cls = classify(scale_to_unit(r, sys.ricci))
            x23f = v_float(r.coordinates["x23"])
            if abs(x23f - 1) > 1e-12:
                if cls.kind != "non_nr":
                    problems.append((n, f"root x23={x23f:.6f} not classified non-NR"))
    return CheckResult(
        "specialized-tower-sign-analysis",
        expected="eliminant matches the published degree-8 polynomial at each n in 9..12; "
                 "h(0)>0, h(1)<0 for n>9, h(2)>0; two positive roots bracketed by "
                 "(0,1) and (1,2) (root at 1 plus (6/5,2) at n=9); positive "
                 "back-substitution; non-NR classification",
        actual="all confirmed" if not problems else str(problems),
        status="pass" if not problems else "fail",
        runtime=time.monotonic() - t0,
    )


def check_tower_closed_forms(config) -> CheckResult:
    t0 = time.monotonic()
    rng = random.Random(11)
    problems = []
    for n in range(5, 13):
        d = Decomposition(n - 2, 1, 1)
        sys = build_system(d)
        try:
            recs = solve_exact(sys, budget=config.budget, cache=config.cache)
        except BudgetExceededError:
            return CheckResult("tower-closed-forms", "...", "budget exhausted",
                               "skipped(budget)", time.monotonic() - t0)
        recs = [scale_to_unit(r, sys.ricci) for r in recs]
        recs = [replace(r, classification=classify(r)) for r in recs]
        classes = dedup_isometry(recs, d)
        fams = ref.tower_families(n)
        reps = set()
        for r in classes:
            c = r.coordinates
            key = tuple(c[v] for v in ("x1", "x12", "x13", "x23"))
            mirror = (key[0], key[2], key[1], key[3])
            reps.add(min(key, mirror))
        want = set()
        for f in fams:
            mirror = (f[0], f[2], f[1], f[3])
            want.add(min(f, mirror))
        if reps != want:
            problems.append((n, "family mismatch", sorted(reps), sorted(want)))
        if len(classes) != 3:
            problems.append((n, f"{len(classes)} classes"))
        if any(r.classification.kind != "nr" for r in classes):
            problems.append((n, "non-NR classification appeared"))
        for _ in range(50):
            metric = {
                v: Fraction(rng.randint(1, 40), rng.randint(1, 40))
                for v in ("x1", "x12", "x13", "x23")
            }
            if ricci_offdiag_check(n, metric) != 0:
                problems.append((n, "off-diagonal Ricci entry nonzero", metric))
                break
    return CheckResult(
        "tower-closed-forms",
        expected="exactly the three published rational families for 5 <= n <= 12, all "
                 "naturally reductive; off-diagonal Ricci entries exactly zero for 50 "
                 "random positive rational metrics per n",
        actual="all confirmed" if not problems else str(problems[:4]),
        status="pass" if not problems else "fail",
        runtime=time.monotonic() - t0,
    )


def check_table(config) -> CheckResult:
    t0 = time.monotonic()
    n_max = min(config.table_n_max, 9)
    # cap the per-cell elimination budget so hopeless exact attempts hand
    # over to the certified numeric path within minutes
    budget = Budget(min(config.budget.max_steps, 250_000), config.budget.max_terms)
    cells = count_table(5, n_max, budget=budget, cache=config.cache,
                        starts=config.numeric_starts, seed=config.seed)
    problems = []
    for cell in cells:
        want = ref.TABLE_COUNTS.get(cell.decomposition.k)
        got = (cell.non_naturally_reductive, cell.naturally_reductive)
        if want is None:
            continue
        if got != want or cell.undecided:
            problems.append((cell.decomposition.k, got, "expected", want, cell.status))
    return CheckResult(
        f"table-counts-n5-to-n{n_max}",
        expected="the 21 published (non-NR, NR) pairs for 5 <= n <= 9",
        actual="all cells match" if not problems else str(problems),
        status="pass" if not problems else "fail",
        runtime=time.monotonic() - t0,
        note="; ".join(
            f"{c.decomposition.k}:{c.status}({c.seconds:.0f}s)" for c in cells
        ),
    )


def check_property_suite(config) -> CheckResult:
    """Cross-cutting exact properties: Jacobi, Sturm consistency, S-polynomial
    vanishing, Ricci scaling law, dedup order independence."""
    t0 = time.monotonic()
    problems = []
    # Jacobi identity, exhaustive for n <= 8
    for n in range(4, 9):
        basis = so_basis(n)
        for i, x in enumerate(basis):
            for y in basis[i:]:
                for zz in basis:
                    acc = {}
                    for (a, b) in ((x, y), (y, zz), (zz, x)):
                        s1, e1 = bracket(a, b)
                        if s1:
                            third = zz if (a, b) == (x, y) else (x if (a, b) == (y, zz) else y)
                            s2, e2 = bracket(e1, third)
                            if s2:
                                acc[e2] = acc.get(e2, 0) + s1 * s2
                    if any(acc.values()):
                        problems.append(("jacobi", n, x, y, zz))
                        break
    # Sturm versus isolation on random polynomials
    rng = random.Random(5)
    for trial in range(500):
        deg = rng.randint(1, 6)
        coeffs = [rng.randint(-8, 8) for _ in range(deg + 1)]
        if not any(coeffs):
            continue
        from .realroots import count_positive_roots

        ivs = isolate_positive_roots(coeffs)
        if len(ivs) != count_positive_roots(coeffs):
            problems.append(("sturm-isolation", trial, coeffs))
            break
    # S-polynomial vanishing on a computed basis
    R = PolyRing(["x", "y", "zz"])
    lex = MonomialOrder.lex("x", "y", "zz")
    gens = [R.parse("x^2 + y^2 + zz^2 - 4"), R.parse("x y - zz"), R.parse("x - y + zz")]
    gb = reduced_lex_basis(Ideal(R, gens, lex))
    ps = gb.polynomials
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            if normal_form(s_polynomial(ps[i], ps[j], lex), ps, lex):
                problems.append(("spoly", i, j))
    if any(normal_form(g, ps, lex) for g in gens):
        problems.append(("membership",))
    # scaling law r(c g) = r(g)/c, symbolically
    for k in ((3, 3, 1), (4, 1, 1), (2, 2, 2)):
        d = Decomposition(*k)
        sys = ricci_generic(d)
        ext = PolyRing(("c",) + sys.ring.vars)
        cvar = ext.var("c")
        scale_map = {v: ext.var(v) * cvar for v in sys.ring.vars}
        for lab, (num, den) in sys.components.items():
            n2 = num.substitute(scale_map, into=ext)
            d2 = den.substitute(scale_map, into=ext)
            lift = {v: ext.var(v) for v in sys.ring.vars}
            n1 = num.substitute(lift, into=ext)
            d1 = den.substitute(lift, into=ext)
            # r(c g) * c = r(g)
            if not (n2 * d1 * cvar - n1 * d2).is_zero():
                problems.append(("scaling", k, lab))
    # dedup order independence
    try:
        sys331, recs = _pipeline(Decomposition(3, 3, 1), budget=config.budget, cache=config.cache)
        base = [r.coordinate_tuple() for r in recs]
        sys2 = build_system(Decomposition(3, 3, 1))
        rec2 = solve_exact(sys2, budget=config.budget, cache=config.cache)
        rec2 = [scale_to_unit(r, sys2.ricci) for r in rec2]
        rec2 = [replace(r, classification=classify(r)) for r in rec2]
        shuffled = list(reversed(rec2))
        dd = dedup_isometry(shuffled, Decomposition(3, 3, 1))
        if len(dd) != len(recs):
            problems.append(("dedup-order", len(dd), len(recs)))
        else:
            for a, b in zip(recs, dd):
                fa = [v_float(x) for x in a.coordinate_tuple()]
                fb = [v_float(x) for x in b.coordinate_tuple()]
                if any(abs(p - q) > 1e-7 for p, q in zip(fa, fb)):
                    problems.append(("dedup-order", fa, fb))
    except BudgetExceededError:
        return CheckResult("property-suite", "...", "budget exhausted",
                           "skipped(budget)", time.monotonic() - t0)
    return CheckResult(
        "property-suite",
        expected="Jacobi identity exhaustively for n <= 8; Sturm count equals isolation "
                 "count on 500 random polynomials; S-polynomials of a computed basis "
                 "vanish; symbolic scaling law; dedup order independence",
        actual="all confirmed" if not problems else str(problems[:4]),
        status="pass" if not problems else "fail",
        runtime=time.monotonic() - t0,
    )


ALL_CHECKS = [
    ("triplets", check_triplet_equivalence),
    ("ricci-oracle", check_ricci_oracle),
    ("biinvariant", check_biinvariant),
    ("so7-eliminant", check_so7_eliminant),
    ("so7-metrics", check_so7_metrics),
    ("so8-eliminant", check_so8_eliminant),
    ("so8-metrics", check_so8_metrics),
    ("specialized-tower", check_specialized_tower),
    ("tower-closed-forms", check_tower_closed_forms),
    ("table", check_table),
    ("properties", check_property_suite),
]


def run_verification(config, only=None, progress: Callable = None) -> VerificationReport:
    report = VerificationReport()
    for name, fn in ALL_CHECKS:
        if only and name not in only:
            continue
        result = fn(config)
        report.checks.append(result)
        if progress:
            progress(result)
    return report
