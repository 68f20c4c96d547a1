"""Ricci components: generic vs closed form, published formulas, the
polarized off-diagonal check, and the symbolic scaling law."""

import random
from fractions import Fraction

import pytest

from einso.exact import MonomialOrder, PolyRing, StructuralError
from einso.liealg import Decomposition, so_basis
from einso.ricci import (
    metric_vars,
    ricci_closed_form,
    ricci_diagonal_entry,
    ricci_generic,
    ricci_offdiag_check,
)

from test_liealg import all_decompositions


def rational_point(ring, rng):
    return {v: Fraction(rng.randint(1, 24), rng.randint(1, 24)) for v in ring.vars}


class TestGeneric:
    def test_all_ones_gives_one_quarter(self):
        for d in all_decompositions(5, 12):
            sys = ricci_generic(d)
            vals = sys.evaluate_at({v: Fraction(1) for v in sys.ring.vars})
            assert set(vals.values()) == {Fraction(1, 4)}, d

    def test_published_r23_for_331(self):
        d = Decomposition(3, 3, 1)
        sys = ricci_generic(d)
        rng = random.Random(3)
        for _ in range(5):
            p = rational_point(sys.ring, rng)
            num, den = sys.components["m23"]
            got = num.evaluate(p) / den.evaluate(p)
            x1, x2, x12, x13, x23 = (p[v] for v in ("x1", "x2", "x12", "x13", "x23"))
            want = (
                Fraction(1, 2) / x23
                + Fraction(3, 20) * (x23 / (x12 * x13) - x13 / (x12 * x23) - x12 / (x23 * x13))
                - Fraction(1, 10) * x2 / x23**2
            )
            assert got == want

    def test_published_r1_for_431(self):
        d = Decomposition(4, 3, 1)
        sys = ricci_generic(d)
        rng = random.Random(5)
        p = rational_point(sys.ring, rng)
        num, den = sys.components["m1"]
        got = num.evaluate(p) / den.evaluate(p)
        x1, x12, x13 = p["x1"], p["x12"], p["x13"]
        assert got == Fraction(1, 12) / x1 + Fraction(1, 24) * (3 * x1 / x12**2 + x1 / x13**2)

    def test_published_r23_for_tower_n6(self):
        d = Decomposition(4, 1, 1)
        sys = ricci_generic(d)
        rng = random.Random(7)
        p = rational_point(sys.ring, rng)
        num, den = sys.components["m23"]
        got = num.evaluate(p) / den.evaluate(p)
        x12, x13, x23 = p["x12"], p["x13"], p["x23"]
        want = Fraction(1, 2) / x23 + Fraction(1, 4) * (
            x23 / (x13 * x12) - x13 / (x12 * x23) - x12 / (x23 * x13)
        )
        assert got == want

    def test_denominators_are_monomials(self):
        for d in all_decompositions(5, 9):
            sys = ricci_generic(d)
            for num, den in sys.components.values():
                assert len(den.terms) == 1


class TestClosedFormOracle:
    @pytest.mark.parametrize("d", list(all_decompositions(5, 12)), ids=str)
    def test_generic_equals_closed_form(self, d):
        gen = ricci_generic(d)
        clo = ricci_closed_form(d)
        assert set(gen.components) == set(clo.components)
        for lab in gen.components:
            n1, d1 = gen.components[lab]
            n2, d2 = clo.components[lab]
            assert (n1 * d2 - n2 * d1).is_zero(), (d, lab)

    def test_metric_vars_follow_pattern(self):
        assert metric_vars(Decomposition(3, 3, 3)) == ("x1", "x2", "x3", "x12", "x13", "x23")
        assert metric_vars(Decomposition(3, 3, 1)) == ("x1", "x2", "x12", "x13", "x23")
        assert metric_vars(Decomposition(4, 1, 1)) == ("x1", "x12", "x13", "x23")


class TestScalingLaw:
    @pytest.mark.parametrize("k", [(3, 3, 1), (4, 1, 1), (2, 2, 2), (4, 3, 2)])
    def test_components_scale_inversely(self, k):
        d = Decomposition(*k)
        sys = ricci_generic(d)
        ext = PolyRing(("c",) + sys.ring.vars)
        cvar = ext.var("c")
        scaled = {v: ext.var(v) * cvar for v in sys.ring.vars}
        lift = {v: ext.var(v) for v in sys.ring.vars}
        for num, den in sys.components.values():
            n_scaled = num.substitute(scaled, into=ext)
            d_scaled = den.substitute(scaled, into=ext)
            n_plain = num.substitute(lift, into=ext)
            d_plain = den.substitute(lift, into=ext)
            # r(c g) * c = r(g), cross-multiplied
            assert (n_scaled * d_plain * cvar - n_plain * d_scaled).is_zero()


class TestPermutationEquivariance:
    def test_swap_of_equal_blocks(self):
        d = Decomposition(3, 3, 1)
        sys = ricci_generic(d)
        swap = {"x1": "x2", "x2": "x1", "x13": "x23", "x23": "x13"}
        ring = sys.ring
        mapping = {v: ring.var(swap.get(v, v)) for v in ring.vars}
        pairs = [("m1", "m2"), ("m2", "m1"), ("m13", "m23"), ("m23", "m13"),
                 ("m12", "m12")]
        for src, dst in pairs:
            n1, d1 = sys.components[src]
            n2, d2 = sys.components[dst]
            assert (n1.substitute(mapping, into=ring) * d2
                    - n2 * d1.substitute(mapping, into=ring)).is_zero()


class TestOffDiagonal:
    def test_published_example_metric(self):
        assert ricci_offdiag_check(6, {"x1": 1, "x12": 2, "x13": 3, "x23": 5}) == 0

    @pytest.mark.parametrize("n", range(5, 10))
    def test_vanishes_for_random_metrics(self, n):
        rng = random.Random(100 + n)
        for _ in range(50):
            metric = {
                v: Fraction(rng.randint(1, 30), rng.randint(1, 30))
                for v in ("x1", "x12", "x13", "x23")
            }
            assert ricci_offdiag_check(n, metric) == 0

    def test_biinvariant_diagonal_entries_agree(self):
        ones = {v: Fraction(1) for v in ("x1", "x12", "x13", "x23")}
        for n in (5, 6, 7):
            entries = {ricci_diagonal_entry(n, ones, e) for e in so_basis(n)}
            assert entries == {Fraction(1, 4)}

    def test_nonpositive_metric_rejected(self):
        with pytest.raises(StructuralError):
            ricci_offdiag_check(6, {"x1": 0, "x12": 1, "x13": 1, "x23": 1})
