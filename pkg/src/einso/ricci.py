"""Symbolic Ricci components for the diagonal invariant metrics.

Components are kept as rational functions (numerator polynomial over a
monomial denominator) in the metric variables, one per nonempty module.
Two independent constructions are provided:

* `ricci_generic` - assembled purely from module dimensions and the triplet
  table via the general homogeneous-space component formula
      r_k = 1/(2 x_k) + (1/4d_k) sum_{j,i} [k;ji] x_k/(x_j x_i)
                      - (1/2d_k) sum_{j,i} [j;ki] x_j/(x_k x_i).
* `ricci_closed_form` - the specialized formulas for the three diagonal
  metric shapes (all blocks, k3 = 1, and k2 = k3 = 1).

The generic path is authoritative; any discrepancy between the two is a
hard test failure.  `ricci_offdiag_check` evaluates the polarized Ricci
formula on the equivalent-module pairs (m12, m13) for the (n-2, 1, 1)
shape and must return exact zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .exact import MonomialOrder, MultiPoly, PolyRing, StructuralError, rat
from .liealg import (
    MODULE_LABELS,
    BasisElement,
    Decomposition,
    TripletTable,
    bracket,
    module_of,
    so_basis,
    triplet_table,
)

__all__ = [
    "METRIC_VAR_OF",
    "metric_vars",
    "metric_ring",
    "component_order",
    "RicciSystem",
    "ricci_generic",
    "ricci_closed_form",
    "ricci_offdiag_check",
]

METRIC_VAR_OF = {
    "m1": "x1",
    "m2": "x2",
    "m3": "x3",
    "m12": "x12",
    "m13": "x13",
    "m23": "x23",
}
_CANONICAL_VARS = ("x1", "x2", "x3", "x12", "x13", "x23")


def metric_vars(d: Decomposition) -> tuple:
    """Variables of the metric ansatz: one per nonempty module."""
    present = [METRIC_VAR_OF[lab] for lab in d.nonempty_modules()]
    return tuple(v for v in _CANONICAL_VARS if v in present)


def metric_ring(d: Decomposition) -> PolyRing:
    return PolyRing(metric_vars(d))


def component_order(d: Decomposition) -> list:
    """Module order used to form the consecutive Einstein differences.

    Matches the equation chains used for each metric shape:
    all blocks -> r1,r2,r3,r12,r13,r23;  k3 = 1 -> r1,r2,r12,r23,r13;
    k2 = k3 = 1 -> r1,r12,r23,r13.
    """
    if d.k3 >= 2:
        return ["m1", "m2", "m3", "m12", "m13", "m23"]
    if d.k2 >= 2:
        return ["m1", "m2", "m12", "m23", "m13"]
    return ["m1", "m12", "m23", "m13"]


@dataclass
class RicciSystem:
    """Map module -> (numerator, monomial denominator), plus its ring."""

    decomposition: Decomposition
    ring: PolyRing
    components: dict

    def labels(self) -> list:
        return list(self.components)

    def evaluate_at(self, point: Mapping[str, object]) -> dict:
        out = {}
        for lab, (num, den) in self.components.items():
            dval = den.evaluate(point)
            out[lab] = num.evaluate(point) * _invert(dval)
        return out

    def component_pairs_equal(self) -> list:
        """Cross-multiplied numerators of consecutive component differences."""
        order = component_order(self.decomposition)
        polys = []
        for a, b in zip(order, order[1:]):
            na, da = self.components[a]
            nb, db = self.components[b]
            polys.append(na * db - nb * da)
        return polys


def _invert(v):
    if isinstance(v, Fraction):
        return Fraction(1) / v
    return v.inverse()


class _RationalAccumulator:
    """Sum of coeff * monomial / monomial terms with a common monomial
    denominator, all exact."""

    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.num = ring.zero()
        self.den = ring.one()

    def add(self, coeff: Fraction, num_vars: Mapping[str, int], den_vars: Mapping[str, int]):
        term_num = self.ring.monomial(**num_vars) * coeff
        term_den = self.ring.monomial(**den_vars)
        # common denominator lcm(self.den, term_den): both are monomials
        d_self = next(iter(self.den.terms))
        d_term = next(iter(term_den.terms))
        d_new = tuple(max(a, b) for a, b in zip(d_self, d_term))
        lift_self = MultiPoly(self.ring, {tuple(a - b for a, b in zip(d_new, d_self)): 1})
        lift_term = MultiPoly(self.ring, {tuple(a - b for a, b in zip(d_new, d_term)): 1})
        self.num = self.num * lift_self + term_num * lift_term
        self.den = MultiPoly(self.ring, {d_new: 1})

    def result(self) -> tuple:
        # cancel common monomial factors between numerator and denominator
        d = next(iter(self.den.terms))
        mins = [min(m[i] for m in self.num.terms) if self.num else 0 for i in range(len(d))]
        shift = tuple(min(a, b) for a, b in zip(mins, d))
        if any(shift):
            num = MultiPoly(
                self.ring,
                {tuple(a - s for a, s in zip(m, shift)): c for m, c in self.num.terms.items()},
            )
            den = MultiPoly(self.ring, {tuple(a - s for a, s in zip(d, shift)): 1})
            return num, den
        return self.num, self.den


def ricci_generic(d: Decomposition, table: TripletTable = None) -> RicciSystem:
    """Ricci components from module dimensions and the triplet table alone."""
    if table is None:
        table = triplet_table(d)
    ring = metric_ring(d)
    labels = d.nonempty_modules()
    comps = {}
    for k in labels:
        dk = d.dim(k)
        xk = METRIC_VAR_OF[k]
        acc = _RationalAccumulator(ring)
        acc.add(Fraction(1, 2), {}, {xk: 1})
        for j in labels:
            xj = METRIC_VAR_OF[j]
            for i in labels:
                xi = METRIC_VAR_OF[i]
                t1 = table.get(k, j, i)
                if t1:
                    num = {xk: 1}
                    den = {}
                    for v in (xj, xi):
                        den[v] = den.get(v, 0) + 1
                    acc.add(t1 / (4 * dk), num, den)
                t2 = table.get(j, k, i)
                if t2:
                    num = {xj: 1}
                    den = {}
                    for v in (xk, xi):
                        den[v] = den.get(v, 0) + 1
                    acc.add(-t2 / (2 * dk), num, den)
        comps[k] = acc.result()
    return RicciSystem(d, ring, comps)


def ricci_closed_form(d: Decomposition) -> RicciSystem:
    """Transcribed closed-form components, selected by the block pattern."""
    ring = metric_ring(d)
    n = d.n
    k1, k2, k3 = d.k
    q = Fraction(1, 4 * (n - 2))

    def rational(expr_terms):
        acc = _RationalAccumulator(ring)
        for coeff, num, den in expr_terms:
            acc.add(coeff, num, den)
        return acc.result()

    comps = {}
    if k3 >= 2:
        comps["m1"] = rational([
            ((k1 - 2) * q, {}, {"x1": 1}),
            (k2 * q, {"x1": 1}, {"x12": 2}),
            (k3 * q, {"x1": 1}, {"x13": 2}),
        ])
        comps["m2"] = rational([
            ((k2 - 2) * q, {}, {"x2": 1}),
            (k1 * q, {"x2": 1}, {"x12": 2}),
            (k3 * q, {"x2": 1}, {"x23": 2}),
        ])
        comps["m3"] = rational([
            ((k3 - 2) * q, {}, {"x3": 1}),
            (k1 * q, {"x3": 1}, {"x13": 2}),
            (k2 * q, {"x3": 1}, {"x23": 2}),
        ])
        comps["m12"] = rational([
            (Fraction(1, 2), {}, {"x12": 1}),
            (k3 * q, {"x12": 1}, {"x13": 1, "x23": 1}),
            (-k3 * q, {"x13": 1}, {"x12": 1, "x23": 1}),
            (-k3 * q, {"x23": 1}, {"x12": 1, "x13": 1}),
            (-(k1 - 1) * q, {"x1": 1}, {"x12": 2}),
            (-(k2 - 1) * q, {"x2": 1}, {"x12": 2}),
        ])
        comps["m13"] = rational([
            (Fraction(1, 2), {}, {"x13": 1}),
            (k2 * q, {"x13": 1}, {"x12": 1, "x23": 1}),
            (-k2 * q, {"x12": 1}, {"x13": 1, "x23": 1}),
            (-k2 * q, {"x23": 1}, {"x12": 1, "x13": 1}),
            (-(k1 - 1) * q, {"x1": 1}, {"x13": 2}),
            (-(k3 - 1) * q, {"x3": 1}, {"x13": 2}),
        ])
        comps["m23"] = rational([
            (Fraction(1, 2), {}, {"x23": 1}),
            (k1 * q, {"x23": 1}, {"x13": 1, "x12": 1}),
            (-k1 * q, {"x13": 1}, {"x12": 1, "x23": 1}),
            (-k1 * q, {"x12": 1}, {"x23": 1, "x13": 1}),
            (-(k2 - 1) * q, {"x2": 1}, {"x23": 2}),
            (-(k3 - 1) * q, {"x3": 1}, {"x23": 2}),
        ])
    elif k2 >= 2:
        comps["m1"] = rational([
            ((k1 - 2) * q, {}, {"x1": 1}),
            (k2 * q, {"x1": 1}, {"x12": 2}),
            (q, {"x1": 1}, {"x13": 2}),
        ])
        comps["m2"] = rational([
            ((k2 - 2) * q, {}, {"x2": 1}),
            (k1 * q, {"x2": 1}, {"x12": 2}),
            (q, {"x2": 1}, {"x23": 2}),
        ])
        comps["m12"] = rational([
            (Fraction(1, 2), {}, {"x12": 1}),
            (q, {"x12": 1}, {"x13": 1, "x23": 1}),
            (-q, {"x13": 1}, {"x12": 1, "x23": 1}),
            (-q, {"x23": 1}, {"x12": 1, "x13": 1}),
            (-(k1 - 1) * q, {"x1": 1}, {"x12": 2}),
            (-(k2 - 1) * q, {"x2": 1}, {"x12": 2}),
        ])
        comps["m13"] = rational([
            (Fraction(1, 2), {}, {"x13": 1}),
            (k2 * q, {"x13": 1}, {"x12": 1, "x23": 1}),
            (-k2 * q, {"x12": 1}, {"x13": 1, "x23": 1}),
            (-k2 * q, {"x23": 1}, {"x12": 1, "x13": 1}),
            (-(k1 - 1) * q, {"x1": 1}, {"x13": 2}),
        ])
        comps["m23"] = rational([
            (Fraction(1, 2), {}, {"x23": 1}),
            (k1 * q, {"x23": 1}, {"x13": 1, "x12": 1}),
            (-k1 * q, {"x13": 1}, {"x12": 1, "x23": 1}),
            (-k1 * q, {"x12": 1}, {"x23": 1, "x13": 1}),
            (-(k2 - 1) * q, {"x2": 1}, {"x23": 2}),
        ])
    else:
        comps["m1"] = rational([
            ((n - 4) * q, {}, {"x1": 1}),
            (q, {"x1": 1}, {"x12": 2}),
            (q, {"x1": 1}, {"x13": 2}),
        ])
        comps["m12"] = rational([
            (Fraction(1, 2), {}, {"x12": 1}),
            (q, {"x12": 1}, {"x13": 1, "x23": 1}),
            (-q, {"x13": 1}, {"x12": 1, "x23": 1}),
            (-q, {"x23": 1}, {"x12": 1, "x13": 1}),
            (-(n - 3) * q, {"x1": 1}, {"x12": 2}),
        ])
        comps["m13"] = rational([
            (Fraction(1, 2), {}, {"x13": 1}),
            (q, {"x13": 1}, {"x12": 1, "x23": 1}),
            (-q, {"x12": 1}, {"x13": 1, "x23": 1}),
            (-q, {"x23": 1}, {"x12": 1, "x13": 1}),
            (-(n - 3) * q, {"x1": 1}, {"x13": 2}),
        ])
        comps["m23"] = rational([
            (Fraction(1, 2), {}, {"x23": 1}),
            (Fraction(1, 4), {"x23": 1}, {"x13": 1, "x12": 1}),
            (-Fraction(1, 4), {"x13": 1}, {"x12": 1, "x23": 1}),
            (-Fraction(1, 4), {"x12": 1}, {"x23": 1, "x13": 1}),
        ])
    ordered = {lab: comps[lab] for lab in d.nonempty_modules()}
    return RicciSystem(d, ring, ordered)


# ---------------------------------------------------------------------------
# polarized off-diagonal check for the equivalent-module case
# ---------------------------------------------------------------------------

def _metric_coeff(elem: BasisElement, d: Decomposition, metric: Mapping[str, Fraction]) -> Fraction:
    return metric[METRIC_VAR_OF[module_of(elem, d)]]


def ricci_offdiag_check(n: int, metric: Mapping[str, object]) -> Fraction:
    """Max |r(X, Y)| over X in the m12 basis, Y in the m13 basis, for the
    (n-2, 1, 1) decomposition, evaluated exactly.

    Polarized Ricci formula over a metric-orthonormal basis {X_j}:
        r(X, Y) = -1/2 sum_j <[X, X_j], [Y, X_j]>  - 1/2 B(X, Y)
                  + 1/4 sum_{i,j} <[X_i, X_j], X> <[X_i, X_j], Y>.
    Each X_j is e_cd scaled by 1/sqrt(2(n-2) x_cd); only squared scalings
    enter any summand, so every term is rational.
    """
    if n < 4:
        raise StructuralError("need n >= 4")
    d = Decomposition(n - 2, 1, 1)
    metric = {k: rat(v) for k, v in metric.items()}
    for v in metric_vars(d):
        if metric.get(v, Fraction(0)) <= 0:
            raise StructuralError(f"metric value {v} must be positive")
    basis = so_basis(n)
    scale = 2 * (n - 2)  # -B(e_ab, e_ab)

    def coeff(e):
        return _metric_coeff(e, d, metric)

    # index pairs by bracket target for the curvature-squared sum
    by_target: dict = {}
    for xi in basis:
        for xj in basis:
            s, t = bracket(xi, xj)
            if s:
                by_target.setdefault(t, []).append((xi, xj, s))

    worst = Fraction(0)
    m12 = [e for e in basis if module_of(e, d) == "m12"]
    m13 = [e for e in basis if module_of(e, d) == "m13"]
    for X in m12:
        cX = coeff(X)
        for Y in m13:
            cY = coeff(Y)
            # term 1: -1/2 sum_j <[X, X_j], [Y, X_j]> over orthonormal X_j
            t1 = Fraction(0)
            for e in basis:
                s1, b1 = bracket(X, e)
                if not s1:
                    continue
                s2, b2 = bracket(Y, e)
                if s2 and b1 == b2:
                    # <s1 e_b1, s2 e_b1> / (scale * x_e) = s1 s2 x_b1 / x_e
                    t1 += Fraction(s1 * s2) * coeff(b1) / coeff(e)
            # term 2: -1/2 B(X, Y); B vanishes on distinct basis elements
            t2 = Fraction(-scale) if X == Y else Fraction(0)
            # term 3: 1/4 sum over pairs with [X_i, X_j] proportional to X and Y
            t3 = Fraction(0)
            for xi, xj, s in by_target.get(X, ()):
                # <[Xi,Xj],Y> needs the bracket proportional to Y as well
                if X == Y:
                    t3 += Fraction(s * s) * cX * cY / (coeff(xi) * coeff(xj))
            r = Fraction(-1, 2) * t1 + Fraction(-1, 2) * t2 + Fraction(1, 4) * t3
            worst = max(worst, abs(r))
    return worst


def ricci_diagonal_entry(n: int, metric: Mapping[str, object], elem: BasisElement) -> Fraction:
    """r(X, X)/<X, X> for a basis element, from the same polarized formula.

    Used as a consistency side-check: for the bi-invariant metric every
    diagonal entry equals 1/4.
    """
    d = Decomposition(n - 2, 1, 1)
    metric = {k: rat(v) for k, v in metric.items()}
    basis = so_basis(n)
    scale = 2 * (n - 2)
    X = elem
    cX = _metric_coeff(X, d, metric)

    def coeff(e):
        return _metric_coeff(e, d, metric)

    t1 = Fraction(0)
    for e in basis:
        s1, b1 = bracket(X, e)
        if s1:
            t1 += Fraction(s1 * s1) * coeff(b1) / coeff(e)
    t2 = Fraction(-scale)
    t3 = Fraction(0)
    for xi in basis:
        for xj in basis:
            s, t = bracket(xi, xj)
            if s and t == X:
                t3 += Fraction(cX * cX) / (coeff(xi) * coeff(xj))
    r = Fraction(-1, 2) * t1 + Fraction(-1, 2) * t2 + Fraction(1, 4) * t3
    # <X, X> = scale * cX; normalize to the component convention
    return r / (scale * cX)
