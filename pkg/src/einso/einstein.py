"""Einstein systems for the diagonal metrics: build, solve, scale, classify.

The pipeline per decomposition:

1. `build_system` clears the consecutive Ricci-component differences to
   polynomials and normalizes the overall metric scale (x23 = 1 by default;
   a specialization that pins another variable replaces that normalization).
2. `solve_exact` saturates away zero coordinates, computes the reduced lex
   basis (quotient-walk order change by default), isolates the positive
   roots of the univariate eliminant, and back-substitutes exactly: fiber
   coordinates live in Q or in Q(alpha) for one isolated real root alpha.
3. `solve_numeric` is the multi-start damped-Newton fallback, with optional
   exact Krawczyk certification of each cluster on a rational box.
4. `scale_to_unit` rescales a solution so every Ricci component equals 1;
   `classify` decides natural reductivity from the equality patterns;
   `dedup_isometry` groups solutions under block symmetries (including the
   merged-block swap that identifies rescaled pairs when a solution's
   invariance group is larger than the decomposition's).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Optional, Sequence

import numpy as np

from .algebraic import FieldElement, RealRoot, RootField, interval_mul, interval_pow
from .exact import MonomialOrder, MultiPoly, PolyRing, StructuralError, rat
from .groebner import (
    BasisCache,
    Budget,
    BudgetExceededError,
    GroebnerBasis,
    Ideal,
    reduced_lex_basis,
)
from .liealg import Decomposition
from .realroots import (
    rational_root_in_interval,
    _eval_int_sign,
    _poly_div_int,
    _to_int,
    isolate_roots,
    cauchy_root_bound,
    rational_roots,
    squarefree_part,
)
from .ricci import (
    METRIC_VAR_OF,
    RicciSystem,
    component_order,
    metric_ring,
    metric_vars,
    ricci_generic,
)

__all__ = [
    "EinsteinSystem",
    "SolutionRecord",
    "Classification",
    "NonTriangularError",
    "InconsistentSolutionError",
    "build_system",
    "solve_exact",
    "solve_numeric",
    "scale_to_unit",
    "classify",
    "dedup_isometry",
    "solve_decomposition",
    "count_table",
    "TableCell",
]

NORMALIZED_VAR = "x23"
_FLOOR = Fraction(1, 10**30)


class NonTriangularError(RuntimeError):
    """Raised when exact back-substitution meets a fiber it cannot resolve
    in a single algebraic extension."""


class InconsistentSolutionError(RuntimeError):
    """A candidate point does not make all Ricci components equal."""


# ---------------------------------------------------------------------------
# values: exact rationals or elements of Q(alpha)
# ---------------------------------------------------------------------------

def v_is_zero(v) -> bool:
    if isinstance(v, Fraction):
        return v == 0
    return v.is_zero()


def v_sign(v) -> int:
    if isinstance(v, Fraction):
        return (v > 0) - (v < 0)
    return v.sign()


def v_interval(v, width) -> tuple:
    if isinstance(v, Fraction):
        return (v, v)
    return v.interval(width)


def v_float(v) -> float:
    if isinstance(v, Fraction):
        return float(v)
    return v.to_float()


def v_div(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a / b
    if isinstance(b, Fraction):
        return a * (Fraction(1) / b)
    return b.field.constant(a) / b if isinstance(a, Fraction) else a / b


def v_eq(a, b) -> bool:
    """Exact equality where decidable; interval separation otherwise.

    Values in the same field (or both rational) compare exactly.  Values in
    different fields are compared by interval refinement down to a floor
    width; overlap at the floor counts as equal (the floor is far below
    every separation occurring here).
    """
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    if isinstance(a, FieldElement) and isinstance(b, FieldElement) and a.field is b.field:
        return (a - b).is_zero()
    if isinstance(a, FieldElement) and isinstance(b, Fraction):
        return (a - b).is_zero()
    if isinstance(b, FieldElement) and isinstance(a, Fraction):
        return (b - a).is_zero()
    width = Fraction(1, 10**12)
    while width >= _FLOOR:
        ia = v_interval(a, width)
        ib = v_interval(b, width)
        if ia[0] > ib[1] or ib[0] > ia[1]:
            return False
        width /= 2**8
    return True


def v_cmp(a, b) -> int:
    """-1/0/+1 with the same semantics as `v_eq` for ties."""
    if v_eq(a, b):
        return 0
    width = Fraction(1, 10**12)
    while True:
        ia = v_interval(a, width)
        ib = v_interval(b, width)
        if ia[1] < ib[0]:
            return -1
        if ib[1] < ia[0]:
            return 1
        width /= 2**8


# ---------------------------------------------------------------------------
# system construction
# ---------------------------------------------------------------------------

@dataclass
class EinsteinSystem:
    """Cleared polynomial system whose positive zeros are the Einstein
    metrics of the ansatz (after the scale normalization)."""

    decomposition: Decomposition
    ring: PolyRing                 # variables after normalization
    polynomials: list              # normalized system (x23 = 1)
    raw_ring: PolyRing             # all metric variables
    raw_polynomials: list          # cleared differences before normalization
    components: list               # module labels in difference order
    ricci: RicciSystem


def _strip_monomial_content(p: MultiPoly) -> MultiPoly:
    """Divide out the largest monomial dividing every term."""
    if not p.terms:
        return p
    mins = [min(m[i] for m in p.terms) for i in range(p.ring.nvars)]
    if not any(mins):
        return p
    return MultiPoly(
        p.ring, {tuple(a - s for a, s in zip(m, mins)): c for m, c in p.terms.items()}
    )


def build_system(d: Decomposition, ricci: RicciSystem = None) -> EinsteinSystem:
    """Consecutive differences of Ricci components, cleared and primitive."""
    if ricci is None:
        ricci = ricci_generic(d)
    order = component_order(d)
    raw_ring = ricci.ring
    raw_polys = []
    for a, b in zip(order, order[1:]):
        na, da = ricci.components[a]
        nb, db = ricci.components[b]
        poly = _strip_monomial_content(na * db - nb * da)
        raw_polys.append(poly.content_primitive()[1])
    norm_vars = tuple(v for v in raw_ring.vars if v != NORMALIZED_VAR)
    ring = PolyRing(norm_vars)
    one = {NORMALIZED_VAR: ring.one()}
    lift = {v: ring.var(v) for v in norm_vars}
    polys = []
    for p in raw_polys:
        q = p.substitute({**lift, **one}, into=ring)
        if q:
            polys.append(_strip_monomial_content(q).content_primitive()[1])
    return EinsteinSystem(d, ring, polys, raw_ring, raw_polys, order, ricci)


def _default_precedence(d: Decomposition, names: Sequence) -> tuple:
    """Elimination precedence mirroring the published runs: saturation
    variable first; for the two-block tower shapes the off-diagonal chain
    ends at x13; the (n-2,1,1) shape eliminates down to x1; otherwise x23
    (when present) or the last canonical variable closes the chain."""
    names = list(names)
    if d.k2 == 1:
        pref = [v for v in ("x13", "x12", "x1") if v in names]
        rest = [v for v in names if v not in pref]
        return tuple(rest + pref[:-1] + [pref[-1]]) if pref else tuple(names)
    canonical = [v for v in ("x1", "x2", "x3", "x12", "x13", "x23") if v in names]
    if NORMALIZED_VAR in canonical:
        canonical.remove(NORMALIZED_VAR)
        canonical.append(NORMALIZED_VAR)
    return tuple(canonical)


# ---------------------------------------------------------------------------
# solution records
# ---------------------------------------------------------------------------

@dataclass
class Classification:
    kind: str                      # "nr" | "non_nr" | "undecided"
    case: Optional[int] = None
    subgroup: Optional[str] = None


@dataclass
class SolutionRecord:
    decomposition: Decomposition
    coordinates: dict              # var -> value (Fraction | FieldElement | float)
    einstein_constant_raw: object = None
    scaled_coordinates: dict = None
    classification: Classification = None
    isometry_class: int = -1
    status: str = "exact"          # "exact" | "numeric-only"
    certified: bool = True

    def coordinate_tuple(self, scaled: bool = True) -> tuple:
        coords = self.scaled_coordinates if scaled else self.coordinates
        return tuple(coords[v] for v in metric_vars(self.decomposition))

    def as_json_dict(self, tol=Fraction(1, 10**12)) -> dict:
        tol = Fraction(tol) if not isinstance(tol, Fraction) else tol

        def enc(v):
            if isinstance(v, float):
                return {"lo": None, "hi": None, "approx": v}
            lo, hi = v_interval(v, tol)
            return {"lo": str(lo), "hi": str(hi), "approx": v_float(v)}

        lam = self.einstein_constant_raw
        if isinstance(lam, Fraction):
            lam_s = str(lam)
        elif lam is None:
            lam_s = None
        elif isinstance(lam, float):
            lam_s = repr(lam)
        else:
            lam_s = str(v_float(lam))
        return {
            "k": list(self.decomposition.k),
            "coords": {v: enc(x) for v, x in self.coordinates.items()},
            "scaled": {v: enc(x) for v, x in (self.scaled_coordinates or {}).items()},
            "einstein_constant": lam_s,
            "class": {
                "kind": self.classification.kind if self.classification else None,
                "case": self.classification.case if self.classification else None,
                "subgroup": self.classification.subgroup if self.classification else None,
            },
            "isometry_class": self.isometry_class,
            "status": self.status,
            "certified": self.certified,
        }


# ---------------------------------------------------------------------------
# exact solving
# ---------------------------------------------------------------------------

def _specialized_polys(sys: EinsteinSystem, specialization: Mapping[str, object]):
    """Apply a specialization to the raw system; returns (ring, polys,
    reconstruct) where reconstruct maps fiber points back to all metric
    variables."""
    if not specialization:
        lift = {v: sys.ring.var(v) for v in sys.ring.vars}

        def reconstruct(point: dict) -> dict:
            out = dict(point)
            out[NORMALIZED_VAR] = Fraction(1)
            return out

        return sys.ring, list(sys.polynomials), reconstruct

    raw = sys.raw_ring
    bindings = {}
    for k, v in specialization.items():
        raw.position(k)
        p = v if isinstance(v, MultiPoly) else raw.parse(str(v))
        if p.ring != raw:
            p = p.substitute({w: raw.var(w) for w in p.ring.vars}, into=raw)
        if p == raw.var(k):
            continue  # identity binding is a no-op
        bindings[k] = p
    if not bindings:
        return _specialized_polys(sys, None)
    bound_names = set(bindings)
    remaining = [v for v in raw.vars if v not in bound_names]
    ring = PolyRing(remaining)
    parsed = {}
    fixes_scale = False
    for k, p in bindings.items():
        if p.variables() & bound_names:
            raise StructuralError(f"binding for {k!r} refers to another bound variable")
        parsed[k] = p.substitute({w: ring.var(w) for w in remaining}, into=ring)
        if not p.variables():
            fixes_scale = True
    lift = {v: ring.var(v) for v in remaining}
    subs = {**lift, **parsed}
    polys = []
    for p in sys.raw_polynomials:
        q = p.substitute(subs, into=ring)
        if q:
            polys.append(_strip_monomial_content(q).content_primitive()[1])
    normalize_tail = not fixes_scale and NORMALIZED_VAR in remaining
    if normalize_tail:
        remaining2 = [v for v in remaining if v != NORMALIZED_VAR]
        ring2 = PolyRing(remaining2)
        subs2 = {v: ring2.var(v) for v in remaining2}
        subs2[NORMALIZED_VAR] = ring2.one()
        polys = [
            _strip_monomial_content(q).content_primitive()[1]
            for q in (p.substitute(subs2, into=ring2) for p in polys)
            if q
        ]
        ring = ring2

    def reconstruct(point: dict) -> dict:
        out = dict(point)
        if normalize_tail:
            out[NORMALIZED_VAR] = Fraction(1)
        for k, p in parsed.items():
            out[k] = p.evaluate(out)
        return out

    return ring, polys, reconstruct


def _top_variable(p: MultiPoly, precedence: Sequence) -> str:
    occurring = p.variables()
    for v in precedence:
        if v in occurring:
            return v
    raise StructuralError("constant polynomial in basis")


def _as_univariate_in(p: MultiPoly, var: str, point: Mapping[str, object]) -> list:
    """Coefficients of p as a polynomial in `var`, evaluated at `point`."""
    ring = p.ring
    vi = ring.position(var)
    buckets: dict = {}
    for mono, c in p.terms.items():
        e = mono[vi]
        rest = tuple(0 if i == vi else x for i, x in enumerate(mono))
        buckets.setdefault(e, {})[rest] = c
    out = []
    for e in range(max(buckets) + 1):
        terms = buckets.get(e)
        if terms is None:
            out.append(Fraction(0))
        else:
            out.append(MultiPoly(ring, terms).evaluate(point))
    return out


def _trim_leading_zeros(coeffs: list) -> list:
    out = list(coeffs)
    while out and v_is_zero(out[-1]):
        out.pop()
    return out


def _field_of(point: Mapping[str, object]):
    for v in point.values():
        if isinstance(v, FieldElement):
            return v.field
    return None


def _solve_rational_univariate(coeffs: list, positive_only: bool):
    """Real roots of a rational-coefficient list, as exact rationals where
    detectable and RealRoots otherwise."""
    ints = _to_int(coeffs)
    if len(ints) <= 1:
        raise StructuralError("expected a nonconstant univariate slice")
    sf = squarefree_part(ints)
    try:
        rats = rational_roots(sf)
    except ArithmeticError:
        rats = []  # divisor enumeration too large: intervals take over
    work = sf
    for r in rats:
        work = _poly_div_int(work, _to_int([-r, 1]))
    roots = [r for r in rats if not positive_only or r > 0]
    if len(work) > 1:
        lo = Fraction(0) if positive_only else -cauchy_root_bound(work)
        for iv in isolate_roots(work, lo, cauchy_root_bound(work)):
            if iv.exact is not None:
                if not positive_only or iv.exact > 0:
                    roots.append(iv.exact)
                continue
            r = rational_root_in_interval(work, iv.low, iv.high)
            if r is not None:
                if not positive_only or r > 0:
                    roots.append(r)
            else:
                roots.append(RealRoot(work, iv.low, iv.high))
    return roots


def _resolve_variable(members: list, var: str, point: dict, positive: bool):
    """All admissible values of `var` over the partial point.

    Returns a list of values; raises NonTriangularError when the fiber
    needs a second independent algebraic extension.
    """
    slices = []
    for m in members:
        coeffs = _trim_leading_zeros(_as_univariate_in(m, var, point))
        if not coeffs:
            continue  # member vanishes identically on this fiber
        slices.append(coeffs)
    if not slices:
        raise NonTriangularError(f"no constraint for {var} on this fiber")
    constants = [s for s in slices if len(s) == 1]
    if constants:
        return []  # a nonzero constant rules the fiber out
    slices.sort(key=len)
    head = slices[0]
    others = slices[1:]
    field = _field_of(point)

    def check_rest(value) -> bool:
        pt = dict(point)
        pt[var] = value
        for m in others:
            acc = m[-1]
            for c in reversed(m[:-1]):
                acc = acc * value + c
            if not v_is_zero(acc):
                return False
        return True

    candidates = []
    if len(head) == 2:
        value = v_div(-head[0], head[1])
        if (not positive or v_sign(value) > 0) and check_rest(value):
            candidates.append(value)
        return candidates
    all_rational = all(isinstance(c, Fraction) for c in head)
    if all_rational:
        roots = _solve_rational_univariate(head, positive)
        for r in roots:
            if isinstance(r, RealRoot):
                if field is not None:
                    raise NonTriangularError(
                        f"{var} needs a new extension over an existing one"
                    )
                r_field = RootField(r)
                value = r_field.generator()
            else:
                value = r
            if check_rest(value):
                candidates.append(value)
        return candidates
    # algebraic coefficients: quadratic slices decided by the discriminant
    if len(head) == 3:
        c0, c1, c2 = head
        disc = c1 * c1 - 4 * c2 * c0
        s = v_sign(disc) if not isinstance(disc, Fraction) else ((disc > 0) - (disc < 0))
        if s < 0:
            return []
        if s == 0:
            value = v_div(-c1, 2 * c2)
            if (not positive or v_sign(value) > 0) and check_rest(value):
                candidates.append(value)
            return candidates
        raise NonTriangularError(f"irrational quadratic fiber for {var}")
    raise NonTriangularError(f"degree-{len(head) - 1} algebraic fiber for {var}")


def solve_exact(
    sys: EinsteinSystem,
    specialization: Mapping[str, object] = None,
    *,
    extra_nonzero: Sequence = None,
    precedence: Sequence = None,
    budget: Budget = None,
    cache: BasisCache = None,
    strategy: str = "auto",
) -> list:
    """All positive solutions of the (optionally specialized) system, as
    exact records; coordinates are rationals or single-extension algebraic
    numbers with isolating intervals."""
    ring, polys, reconstruct = _specialized_polys(sys, specialization)
    if not polys:
        raise StructuralError("specialized system is identically zero")
    if precedence is None:
        precedence = _default_precedence(sys.decomposition, ring.vars)
    order = MonomialOrder.lex(*precedence)
    ideal = Ideal(ring, polys, order)
    nonzero = list(ring.vars)
    sat = _saturate_with_extras(ideal, nonzero, extra_nonzero or [])
    gb = reduced_lex_basis(sat, budget=budget, cache=cache, strategy=strategy)
    members = [p for p in gb.polynomials if "z" not in p.variables()]
    if not members:
        return []  # ideal is the whole ring: no admissible solutions
    if any(not p.variables() for p in members):
        return []
    full_prec = list(precedence)
    elim_var = full_prec[-1]
    eliminants = [p for p in members if p.variables() <= {elim_var}]
    if not eliminants:
        raise StructuralError("no univariate eliminant: system not zero-dimensional")
    eli = eliminants[0].to_univariate(elim_var)
    groups: dict = {}
    for p in members:
        if p in eliminants:
            continue
        groups.setdefault(_top_variable(p, full_prec), []).append(p)

    roots = _solve_rational_univariate(eli, positive_only=True)
    points = []
    for r in roots:
        if isinstance(r, RealRoot):
            fld = RootField(r)
            point = {elim_var: fld.generator()}
        else:
            point = {elim_var: r}
        stack = [point]
        for var in reversed(full_prec[:-1]):
            if var not in groups:
                if any(var in p.variables() for p in members):
                    raise NonTriangularError(f"no leading member for {var}")
                continue
            new_stack = []
            for pt in stack:
                for value in _resolve_variable(groups[var], var, pt, positive=True):
                    pt2 = dict(pt)
                    pt2[var] = value
                    new_stack.append(pt2)
            stack = new_stack
            if not stack:
                break
        points.extend(stack)

    records = []
    for pt in points:
        full = reconstruct(pt)
        if any(v_sign(v) <= 0 for v in full.values()):
            continue
        full = {v: (x.canonical() if isinstance(x, FieldElement) else x) for v, x in full.items()}
        records.append(SolutionRecord(sys.decomposition, full, status="exact"))
    records.sort(key=lambda r: tuple(v_float(r.coordinates[v]) for v in metric_vars(sys.decomposition)))
    return records


def _saturate_with_extras(ideal: Ideal, vars_nonzero: list, extra: Sequence) -> Ideal:
    """Rabinowitsch generator z * prod(vars) * prod(extra polys) - 1."""
    z_name = "z"
    if z_name in ideal.ring.vars:
        raise StructuralError("saturation variable already present")
    new_ring = PolyRing((z_name,) + ideal.ring.vars)
    order = MonomialOrder(ideal.order.kind, (z_name,) + ideal.order.precedence)
    lift = {v: new_ring.var(v) for v in ideal.ring.vars}
    gens = [g.substitute(lift, into=new_ring) for g in ideal.generators]
    prod = new_ring.var(z_name)
    for v in vars_nonzero:
        prod = prod * new_ring.var(v)
    for p in extra:
        q = p if isinstance(p, MultiPoly) else ideal.ring.parse(str(p))
        prod = prod * q.substitute(lift, into=new_ring)
    gens.append(prod - new_ring.one())
    return Ideal(new_ring, gens, order)


# ---------------------------------------------------------------------------
# scaling, classification, isometry
# ---------------------------------------------------------------------------

def ricci_values(rec: SolutionRecord, ricci: RicciSystem) -> dict:
    return ricci.evaluate_at(rec.coordinates)


def scale_to_unit(rec: SolutionRecord, ricci: RicciSystem, tol=Fraction(1, 10**9)) -> SolutionRecord:
    """Multiply the metric by the common Ricci value so all components are 1.

    Component agreement is checked to the refinement tolerance (enough to
    catch any spurious numeric root); the invariant suite separately checks
    exact agreement on exact records.
    """
    tol = rat(tol) if not isinstance(tol, float) else Fraction(tol).limit_denominator(10**15)
    vals = ricci_values(rec, ricci)
    items = list(vals.items())
    lam = items[0][1]
    ilam = v_interval(lam, tol)
    for _, v in items[1:]:
        iv = v_interval(v, tol)
        if iv[0] > ilam[1] + tol or ilam[0] > iv[1] + tol:
            raise InconsistentSolutionError("Ricci components differ at this point")
    if isinstance(lam, FieldElement):
        lam = lam.canonical()
    scaled = {}
    for v, x in rec.coordinates.items():
        s = lam * x
        if isinstance(s, FieldElement):
            s = s.canonical()
        scaled[v] = s
    return replace(rec, einstein_constant_raw=lam, scaled_coordinates=scaled)


def _nr_cases(d: Decomposition) -> list:
    """Equality patterns that characterize natural reductivity, with the
    invariance subgroup each one certifies."""
    k1, k2, k3 = d.k
    if d.k3 >= 2:
        return [
            (1, [("x1", "x2"), ("x2", "x12")], [("x13", "x23")], f"SO({k1 + k2})xSO({k3})"),
            (2, [("x2", "x3"), ("x3", "x23")], [("x12", "x13")], f"SO({k1})xSO({k2 + k3})"),
            (3, [("x1", "x3"), ("x3", "x13")], [("x12", "x23")], f"SO({k1 + k3})xSO({k2})"),
            (4, [("x12", "x13"), ("x13", "x23")], [], f"SO({k1})xSO({k2})xSO({k3})"),
        ]
    if d.k2 >= 2:
        return [
            (1, [("x1", "x2"), ("x2", "x12")], [("x13", "x23")], f"SO({k1 + k2})"),
            (2, [("x2", "x23")], [("x12", "x13")], f"SO({k1})xSO({k2 + 1})"),
            (3, [("x1", "x13")], [("x12", "x23")], f"SO({k1 + 1})xSO({k2})"),
            (4, [("x12", "x13"), ("x13", "x23")], [], f"SO({k1})xSO({k2})"),
        ]
    return [
        (1, [("x1", "x12")], [("x13", "x23")], f"SO({k1 + 1})"),
        (2, [("x1", "x13")], [("x12", "x23")], f"SO({k1 + 1})"),
        (3, [("x12", "x13")], [], f"SO({k1})xSO(2)"),
    ]


def _values_equal(rec: SolutionRecord, a: str, b: str, tol: float) -> Optional[bool]:
    va, vb = rec.coordinates[a], rec.coordinates[b]
    if rec.status == "exact":
        return v_eq(va, vb)
    fa, fb = v_float(va), v_float(vb)
    scale = max(abs(fa), abs(fb), 1e-30)
    if abs(fa - fb) < tol * scale:
        return True
    if abs(fa - fb) > 100 * tol * scale:
        return False
    return None  # numerically undecidable


def classify(rec: SolutionRecord, d: Decomposition = None, tol: float = 1e-7) -> Classification:
    """Naturally reductive iff one of the equality patterns holds; the
    matched case id and certifying subgroup are reported."""
    if d is None:
        d = rec.decomposition
    undecided = False
    for case_id, eqs, eqs2, subgroup in _nr_cases(d):
        holds = True
        for a, b in eqs + eqs2:
            r = _values_equal(rec, a, b, tol)
            if r is None:
                undecided = True
                holds = False
                break
            if not r:
                holds = False
                break
        if holds:
            return Classification("nr", case_id, subgroup)
    if undecided:
        return Classification("undecided")
    return Classification("non_nr")


def _swap_map(i: int, j: int) -> dict:
    """Variable permutation induced by swapping blocks i and j."""
    out = {}
    for a, bb in itertools.combinations((1, 2, 3), 2):
        a2 = j if a == i else i if a == j else a
        b2 = j if bb == i else i if bb == j else bb
        out[f"x{a}{bb}"] = f"x{min(a2, b2)}{max(a2, b2)}"
    for a in (1, 2, 3):
        a2 = j if a == i else i if a == j else a
        out[f"x{a}"] = f"x{a2}"
    return out


def _apply_var_map(coords: dict, vmap: dict) -> dict:
    return {vmap.get(v, v): x for v, x in coords.items()}


def _merge_swap_candidates(d: Decomposition, coords: dict, tol: float, exact: bool):
    """When the solution is invariant under a larger subgroup obtained by
    merging blocks 2 and 3 (x2 = x3 = x23 and x12 = x13) and the merged
    block matches block 1 in size, swapping the two equal blocks of the
    coarser decomposition is an isometry not visible to the plain block
    swaps; it acts by (a, u, u, v, v, u) -> (u, a, a, v, v, a)."""
    k1, k2, k3 = d.k
    if k1 != k2 + k3:
        return []
    names = set(coords)

    def eq(a, b):
        if a not in names or b not in names:
            return True
        if exact:
            return v_eq(coords[a], coords[b])
        fa, fb = v_float(coords[a]), v_float(coords[b])
        return abs(fa - fb) < tol * max(abs(fa), abs(fb), 1e-30)

    if not (eq("x2", "x23") and eq("x3", "x23") and eq("x12", "x13")):
        return []
    a = coords["x1"]
    u = coords["x23"]
    v = coords["x12"]
    out = {"x1": u, "x12": v, "x13": v, "x23": a}
    if "x2" in names:
        out["x2"] = a
    if "x3" in names:
        out["x3"] = a
    return [out]


def _orbit(rec: SolutionRecord, d: Decomposition, tol: float) -> list:
    """Coordinate dictionaries reachable by the available isometries."""
    exact = rec.status == "exact"
    swaps = []
    if d.k1 == d.k2:
        swaps.append(_swap_map(1, 2))
    if d.k2 == d.k3:
        swaps.append(_swap_map(2, 3))
    if d.k1 == d.k3:
        swaps.append(_swap_map(1, 3))
    start = rec.scaled_coordinates or rec.coordinates
    seen = {}
    queue = [start]

    def key(coords):
        return tuple(round(v_float(coords[v]), 9) for v in metric_vars(d))

    while queue:
        c = queue.pop()
        k = key(c)
        if k in seen:
            continue
        seen[k] = c
        for vmap in swaps:
            queue.append(_apply_var_map(c, vmap))
        queue.extend(_merge_swap_candidates(d, c, tol, exact))
    return list(seen.values())


def dedup_isometry(records: list, d: Decomposition = None, tol: float = 1e-7) -> list:
    """One canonical representative per isometry class (the orbit-minimal
    scaled coordinate tuple); `isometry_class` indices are assigned in
    order of the canonical tuples."""
    if not records:
        return []
    if d is None:
        d = records[0].decomposition
    mv = metric_vars(d)
    orbits = []
    for rec in records:
        if rec.scaled_coordinates is None:
            raise StructuralError("dedup needs scaled records; call scale_to_unit first")
        orb = _orbit(rec, d, tol)
        tuples = sorted(tuple(v_float(c[v]) for v in mv) for c in orb)
        own = tuple(v_float(rec.scaled_coordinates[v]) for v in mv)
        orbits.append((tuples, own, rec))

    def close(t1, t2):
        return all(abs(a - b) <= tol * max(abs(a), abs(b), 1e-30) for a, b in zip(t1, t2))

    classes = []
    for tuples, own, rec in orbits:
        for cls in classes:
            if any(close(t, s) for t in tuples for s in cls["tuples"]):
                cls["members"].append((own, rec))
                cls["tuples"].extend(tuples)
                break
        else:
            classes.append({"tuples": list(tuples), "members": [(own, rec)]})
    out = []
    classes.sort(key=lambda cls: min(own for own, _ in cls["members"]))
    for idx, cls in enumerate(classes):
        rep = min(cls["members"], key=lambda tr: tr[0])[1]
        out.append(replace(rep, isometry_class=idx))
    return out


# ---------------------------------------------------------------------------
# numeric fallback
# ---------------------------------------------------------------------------

def _compile_polys(polys: list, names: Sequence):
    nv = len(names)
    compiled = []
    for p in polys:
        if p.terms:
            coeffs = np.array([float(c) for c in p.terms.values()])
            exps = np.array([list(m) for m in p.terms.keys()], dtype=np.int64)
        else:
            coeffs = np.zeros(0)
            exps = np.zeros((0, nv), dtype=np.int64)
        compiled.append((coeffs, exps))
    return compiled


def _eval_compiled(compiled, X: np.ndarray) -> np.ndarray:
    out = np.empty((X.shape[0], len(compiled)))
    for j, (coeffs, exps) in enumerate(compiled):
        monos = np.prod(X[:, None, :] ** exps[None, :, :], axis=2)
        out[:, j] = monos @ coeffs
    return out


def solve_numeric(
    sys: EinsteinSystem,
    starts: int = 2000,
    tol: float = 1e-10,
    seed: int = 20250201,
    specialization: Mapping[str, object] = None,
    certify: bool = True,
) -> list:
    """Multi-start damped Newton on the square normalized system; clusters
    of converged positive points become records, Krawczyk-certified on a
    rational box when `certify` is set."""
    ring, polys, reconstruct = _specialized_polys(sys, specialization)
    names = ring.vars
    nv = len(names)
    if len(polys) < nv:
        raise StructuralError("system is underdetermined after specialization")
    polys = polys[:nv] if len(polys) > nv else polys
    F_c = _compile_polys(polys, names)
    jac_polys = [[p.derivative(v) for v in names] for p in polys]
    J_c = [_compile_polys(row, names) for row in jac_polys]

    rng = np.random.default_rng(seed)
    X = 10.0 ** rng.uniform(-2, 2, size=(starts, nv))
    alive = np.ones(len(X), dtype=bool)
    for _ in range(60):
        if not alive.any():
            break
        Xa = X[alive]
        F = _eval_compiled(F_c, Xa)
        J = np.empty((Xa.shape[0], nv, nv))
        for i in range(nv):
            J[:, i, :] = _eval_compiled(J_c[i], Xa)
        with np.errstate(all="ignore"):
            try:
                delta = np.linalg.solve(J, F[..., None])[..., 0]
            except np.linalg.LinAlgError:
                delta = np.array([
                    np.linalg.lstsq(J[i], F[i], rcond=None)[0] for i in range(len(Xa))
                ])
        base = np.linalg.norm(F, axis=1)
        step = np.ones(len(Xa))
        Xn = Xa - delta
        for _ in range(25):
            bad_step = ~np.isfinite(Xn).all(axis=1) | (Xn <= 0).any(axis=1)
            Fn = np.full_like(F, np.inf)
            ok = ~bad_step
            if ok.any():
                Fn[ok] = _eval_compiled(F_c, Xn[ok])
            worse = np.linalg.norm(Fn, axis=1) > base * (1 - 1e-4) + 1e-300
            if not worse.any():
                break
            step[worse] *= 0.5
            Xn = Xa - step[:, None] * delta
            if (step < 1e-8).all():
                break
        moved = np.linalg.norm(Xn - Xa, axis=1)
        X[alive] = Xn
        sub = alive.copy()
        still = np.isfinite(Xn).all(axis=1) & (Xn > 1e-9).all(axis=1) & (moved > 1e-15)
        alive[sub] = still

    # polish the survivors with undamped Newton at full precision
    for _ in range(6):
        F = _eval_compiled(F_c, X)
        J = np.empty((X.shape[0], nv, nv))
        for i in range(nv):
            J[:, i, :] = _eval_compiled(J_c[i], X)
        with np.errstate(all="ignore"):
            try:
                delta = np.linalg.solve(J, F[..., None])[..., 0]
            except np.linalg.LinAlgError:
                break
        Xn = X - delta
        ok = np.isfinite(Xn).all(axis=1) & (Xn > 0).all(axis=1)
        X[ok] = Xn[ok]

    F = _eval_compiled(F_c, X)
    res = np.linalg.norm(F, axis=1)
    scale = np.maximum(np.linalg.norm(X, axis=1), 1.0)
    good = (res < 1e-11 * scale) & np.isfinite(X).all(axis=1) & (X > 1e-8).all(axis=1)
    sols = X[good]
    clusters: list = []
    for x in sols:
        for c in clusters:
            if np.allclose(c, x, rtol=1e-6, atol=1e-9):
                break
        else:
            clusters.append(x)
    records = []
    for x in sorted(clusters, key=tuple):
        point = {v: Fraction(float(xi)).limit_denominator(10**13) for v, xi in zip(names, x)}
        cert = False
        if certify:
            cert = _krawczyk_certify(polys, names, [point[v] for v in names])
        full = reconstruct(dict(point))
        full_f = {v: float(val) if isinstance(val, Fraction) else val for v, val in full.items()}
        rec = SolutionRecord(
            sys.decomposition,
            {v: Fraction(fv).limit_denominator(10**13) for v, fv in full_f.items()},
            status="numeric-only",
            certified=bool(cert),
        )
        # spurious clusters (non-converged saddles) do not make the Ricci
        # components agree; drop them here rather than downstream
        vals = list(sys.ricci.evaluate_at(rec.coordinates).values())
        lam = float(vals[0])
        if all(abs(float(v) - lam) <= 1e-7 * max(1.0, abs(lam)) for v in vals[1:]):
            records.append(rec)
    return records


def _krawczyk_certify(polys, names, center, rel_radius=Fraction(1, 10**7)) -> bool:
    """Existence and uniqueness of a true zero in a rational box around the
    numeric point, by the Krawczyk interval test (all exact arithmetic)."""
    nv = len(names)
    rads = [max(abs(c), Fraction(1)) * rel_radius for c in center]
    box = [(c - r, c + r) for c, r in zip(center, rads)]
    mid = {v: c for v, c in zip(names, center)}
    Fy = [p.evaluate(mid) for p in polys[:nv]]
    jac = [[p.derivative(v) for v in names] for p in polys[:nv]]
    Jmid = [[e.evaluate(mid) for e in row] for row in jac]
    Y = _rational_inverse(Jmid)
    if Y is None:
        return False

    def ieval(p) -> tuple:
        acc = (Fraction(0), Fraction(0))
        for mono, c in p.terms.items():
            t = (Fraction(c), Fraction(c))
            for i, e in enumerate(mono):
                if e:
                    t = interval_mul(t, interval_pow(box[i], e))
            acc = (acc[0] + t[0], acc[1] + t[1])
        return acc

    JX = [[ieval(e) for e in row] for row in jac]
    # K = y - Y F(y) + (I - Y JX)(X - y)
    YF = [sum((Y[i][j] * Fy[j] for j in range(nv)), Fraction(0)) for i in range(nv)]
    ok = True
    for i in range(nv):
        lo = hi = center[i] - YF[i]
        for j in range(nv):
            # entry (I - Y JX)_{ij}
            e_lo, e_hi = Fraction(0), Fraction(0)
            for k in range(nv):
                c = Y[i][k]
                cell = JX[k][j]
                mlo, mhi = (c * cell[0], c * cell[1]) if c >= 0 else (c * cell[1], c * cell[0])
                e_lo += mlo
                e_hi += mhi
            if i == j:
                e_lo, e_hi = 1 - e_hi, 1 - e_lo
            else:
                e_lo, e_hi = -e_hi, -e_lo
            d = (-rads[j], rads[j])
            plo, phi = interval_mul((e_lo, e_hi), d)
            lo += plo
            hi += phi
        if not (box[i][0] < lo and hi < box[i][1]):
            ok = False
            break
    return ok


def _rational_inverse(M: list):
    n = len(M)
    A = [[Fraction(M[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if A[r][col]:
                piv = r
                break
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        inv = Fraction(1) / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[n:] for row in A]


# ---------------------------------------------------------------------------
# per-decomposition pipeline and the summary table
# ---------------------------------------------------------------------------

@dataclass
class TableCell:
    decomposition: Decomposition
    non_naturally_reductive: int
    naturally_reductive: int
    undecided: int
    status: str                    # "exact" | "numeric-only" | "budget-exceeded"
    seconds: float
    records: list = field(default_factory=list)


def solve_decomposition(
    d: Decomposition,
    method: str = "exact",
    *,
    budget: Budget = None,
    cache: BasisCache = None,
    starts: int = 2000,
    seed: int = 20250201,
    tol: float = 1e-7,
) -> tuple:
    """Full pipeline for one decomposition: records (scaled, classified,
    deduplicated) plus the cell status."""
    sys = build_system(d)
    status = "exact"
    records = None
    if method in ("exact", "both", "auto"):
        try:
            records = solve_exact(sys, budget=budget, cache=cache)
        except (BudgetExceededError, NonTriangularError):
            if method == "exact":
                raise
            records = None
    if records is None:
        records = solve_numeric(sys, starts=starts, seed=seed)
        status = "numeric-only"
    elif method == "both":
        pass
    scaled = [scale_to_unit(r, sys.ricci) for r in records]
    classified = [replace(r, classification=classify(r, d, tol)) for r in scaled]
    deduped = dedup_isometry(classified, d, tol)
    return deduped, status


def count_table(
    n_min: int,
    n_max: int,
    *,
    budget: Budget = None,
    cache: BasisCache = None,
    starts: int = 4000,
    seed: int = 20250201,
) -> list:
    """(non-NR, NR) counts up to isometry for every decomposition
    n = k1+k2+k3 with k1 >= k2 >= k3 >= 1 in the range."""
    import time as _time

    if n_min < 5:
        raise StructuralError("table starts at n = 5")
    cells = []
    for n in range(n_min, n_max + 1):
        for k1 in range(n - 2, 0, -1):
            for k2 in range(min(k1, n - k1 - 1), 0, -1):
                k3 = n - k1 - k2
                if 1 <= k3 <= k2:
                    d = Decomposition(k1, k2, k3)
                    t0 = _time.monotonic()
                    try:
                        recs, status = solve_decomposition(
                            d, method="auto", budget=budget, cache=cache,
                            starts=starts, seed=seed,
                        )
                    except BudgetExceededError:
                        cells.append(TableCell(d, -1, -1, -1, "budget-exceeded",
                                               _time.monotonic() - t0))
                        continue
                    nr = sum(1 for r in recs if r.classification.kind == "nr")
                    non = sum(1 for r in recs if r.classification.kind == "non_nr")
                    und = sum(1 for r in recs if r.classification.kind == "undecided")
                    cells.append(TableCell(d, non, nr, und, status,
                                           _time.monotonic() - t0, recs))
    return cells
