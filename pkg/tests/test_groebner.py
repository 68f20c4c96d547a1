"""Buchberger, order change, saturation, elimination, and the basis cache."""

from fractions import Fraction

import pytest

from einso.exact import MonomialOrder, MultiPoly, PolyRing, StructuralError
from einso.groebner import (
    BasisCache,
    Budget,
    BudgetExceededError,
    Ideal,
    buchberger,
    eliminate,
    normal_form,
    reduced_lex_basis,
    s_polynomial,
    saturate,
)

R = PolyRing(["x", "y"])
LEX = MonomialOrder.lex("x", "y")

R5 = PolyRing(["z", "x1", "x2", "x12", "x13"])
LEX5 = MonomialOrder.lex("z", "x1", "x2", "x12", "x13")


def so7_generators():
    g1 = R5.parse(
        "x1^2 x12^2 x2 + 3 x1^2 x13^2 x2 - x1 x12^2 x13^2 x2^2 - x1 x12^2 x13^2"
        " - 3 x1 x13^2 x2^2 + x12^2 x13^2 x2"
    )
    g2 = R5.parse(
        "2 x1 x13 x2 - x12^3 x2 + x12^2 x13 x2^2 + x12^2 x13 + x12 x13^2 x2"
        " - 10 x12 x13 x2 + x12 x2 + 5 x13 x2^2"
    )
    g3 = R5.parse(
        "-x1 x13 + 2 x12^3 + x12^2 x13 x2 - 5 x12^2 x13 + x12 x13^2 + 5 x12 x13"
        " - 2 x12 - x13 x2"
    )
    g4 = R5.parse(
        "x1 x12 - x12 x13^2 x2 + 5 x12 x13^2 - 5 x12 x13 - 3 x13^3 + 3 x13"
    )
    sat = R5.parse("z x1 x2 x12 x13 - 1")
    return [g1, g2, g3, g4, sat]


class TestNormalForm:
    def test_monomial_reduction(self):
        assert normal_form(R.parse("x^2"), [R.parse("x")], LEX).is_zero()

    def test_partial_reduction(self):
        assert normal_form(R.parse("x^2 + y"), [R.parse("x")], LEX) == R.parse("y")

    def test_true_remainder_is_exact(self):
        r = normal_form(R.parse("3 x^2 + 5"), [R.parse("2 x - 1")], LEX)
        assert r == R.const(Fraction(23, 4))

    def test_remainder_has_no_reducible_terms(self):
        basis = [R.parse("x^2 - y"), R.parse("y^3 - 1")]
        r = normal_form(R.parse("x^7 + x^2 y^5 + y^4"), basis, LEX)
        for mono in r.terms:
            assert mono[0] < 2 and mono[1] < 3


class TestSPolynomial:
    def test_leading_terms_cancel(self):
        s = s_polynomial(R.parse("x^2 - 1"), R.parse("x"), LEX)
        assert s == R.const(-1)

    def test_self_pair_vanishes(self):
        f = R.parse("x^2 y - 3 y")
        assert s_polynomial(f, f, LEX).is_zero()

    def test_hand_computed_example(self):
        s = s_polynomial(R.parse("x y - 1"), R.parse("y^2 - 1"), LEX)
        assert s == R.parse("x - y")


class TestBuchberger:
    def test_circle_and_line(self):
        gb = buchberger(Ideal(R, [R.parse("x^2 + y^2 - 1"), R.parse("x - y")], LEX))
        assert [p.text(LEX) for p in gb.polynomials] == ["x - y", "2*y^2 - 1"]

    def test_already_reduced_input_unchanged(self):
        gens = [R.parse("x - y"), R.parse("2 y^2 - 1")]
        gb = buchberger(Ideal(R, gens, LEX))
        assert gb.polynomials == gens

    def test_published_subideal_basis(self):
        cubic = R5.parse("6 x13^3 - 44 x13^2 + 90 x13 - 45")
        gb = buchberger(Ideal(R5, so7_generators() + [cubic], LEX5))
        texts = {p.text(LEX5) for p in gb.polynomials}
        assert "x12 - x13" in texts
        assert "x2 - 1" in texts
        assert "x1 + x13^2 - 5*x13 + 3" in texts
        assert "6*x13^3 - 44*x13^2 + 90*x13 - 45" in texts
        assert "405*z - 804*x13^2 + 5284*x13 - 8112" in texts

    def test_all_s_polynomials_reduce_to_zero(self):
        gb = buchberger(Ideal(R5, so7_generators()[:4], MonomialOrder.grevlex(*R5.vars)))
        ps = gb.polynomials
        order = gb.order
        for i in range(len(ps)):
            for j in range(i + 1, len(ps)):
                assert normal_form(s_polynomial(ps[i], ps[j], order), ps, order).is_zero()

    def test_generators_reduce_to_zero(self):
        gens = so7_generators()[:4]
        gb = buchberger(Ideal(R5, gens, MonomialOrder.grevlex(*R5.vars)))
        for g in gens:
            assert normal_form(g, gb.polynomials, gb.order).is_zero()

    def test_determinism(self):
        gens = [R.parse("x^3 y - 2 x y^2 + 1"), R.parse("x^2 - y^3")]
        a = buchberger(Ideal(R, gens, LEX))
        b = buchberger(Ideal(R, list(gens), LEX))
        assert [p.text(LEX) for p in a.polynomials] == [p.text(LEX) for p in b.polynomials]

    def test_budget_exhaustion_is_an_error(self):
        with pytest.raises(BudgetExceededError):
            buchberger(Ideal(R5, so7_generators(), LEX5), budget=Budget(max_steps=50))


class TestOrderChangeStrategies:
    def test_strategies_agree_on_small_system(self):
        gens = [R.parse("x^2 + y^2 - 1"), R.parse("x y - 1")]
        ideal = Ideal(R, gens, LEX)
        direct = buchberger(ideal)
        two = reduced_lex_basis(ideal, strategy="two_stage")
        walk = reduced_lex_basis(ideal, strategy="auto")
        t = [p.text(LEX) for p in direct.polynomials]
        assert t == [p.text(LEX) for p in two.polynomials]
        assert t == [p.text(LEX) for p in walk.polynomials]

    def test_strategies_agree_on_published_subideal(self):
        cubic = R5.parse("45 x13^3 - 90 x13^2 + 44 x13 - 6")
        ideal = Ideal(R5, so7_generators() + [cubic], LEX5)
        direct = buchberger(ideal)
        walk = reduced_lex_basis(ideal, strategy="auto")
        assert [p.text(LEX5) for p in direct.polynomials] == [
            p.text(LEX5) for p in walk.polynomials
        ]

    def test_walk_requires_zero_dimensional_ideal(self):
        # a positive-dimensional ideal falls back to plain Buchberger
        gens = [R.parse("x y")]
        gb = reduced_lex_basis(Ideal(R, gens, LEX), strategy="auto")
        assert [p.text(LEX) for p in gb.polynomials] == ["x*y"]


class TestSaturate:
    def test_nilpotent_and_invertible_is_contradictory(self):
        one_ring = PolyRing(["x"])
        ideal = Ideal(one_ring, [one_ring.parse("x^2")], MonomialOrder.lex("x"))
        sat = saturate(ideal, ["x"])
        gb = buchberger(sat)
        assert [p.text(sat.order) for p in gb.polynomials] == ["1"]

    def test_reproduces_published_generator(self):
        ideal = Ideal(R5, so7_generators()[:4],
                      MonomialOrder.lex("x1", "x2", "x12", "x13", "z"))
        # build from a z-free ring to exercise the extension
        base = PolyRing(["x1", "x2", "x12", "x13"])
        lift = {v: base.var(v) for v in base.vars}
        gens = [g.substitute(lift, into=base) for g in so7_generators()[:4]]
        sat = saturate(Ideal(base, gens, MonomialOrder.lex(*base.vars)),
                       ["x1", "x2", "x12", "x13"])
        expected = sat.ring.parse("z x1 x2 x12 x13 - 1")
        assert sat.generators[-1] == expected

    def test_empty_saturation_is_identity(self):
        ideal = Ideal(R, [R.parse("x y - 1")], LEX)
        assert saturate(ideal, []) is ideal

    def test_name_collision_rejected(self):
        ideal = Ideal(R5, so7_generators(), LEX5)
        with pytest.raises(StructuralError):
            saturate(ideal, ["x1"])


class TestEliminate:
    def test_keep_all(self):
        gb = buchberger(Ideal(R, [R.parse("x^2 + y^2 - 1"), R.parse("x - y")], LEX))
        assert eliminate(gb, ["x", "y"]) == gb.polynomials

    def test_keep_last(self):
        gb = buchberger(Ideal(R, [R.parse("x^2 + y^2 - 1"), R.parse("x - y")], LEX))
        only_y = eliminate(gb, ["y"])
        assert [p.text(LEX) for p in only_y] == ["2*y^2 - 1"]

    def test_keep_none_of_proper_ideal(self):
        gb = buchberger(Ideal(R, [R.parse("x - y")], LEX))
        assert eliminate(gb, []) == []

    def test_incompatible_order_rejected(self):
        gb = buchberger(Ideal(R, [R.parse("x - y")], LEX))
        with pytest.raises(StructuralError):
            eliminate(gb, ["x"])  # eliminated y follows kept x in the precedence


class TestCache:
    def test_roundtrip_and_hit(self, tmp_path):
        cache = BasisCache(tmp_path)
        ideal = Ideal(R, [R.parse("x^2 + y^2 - 1"), R.parse("x - y")], LEX)
        cold = buchberger(ideal, cache=cache)
        warm = buchberger(ideal, cache=cache)
        assert [p.text(LEX) for p in cold.polynomials] == [
            p.text(LEX) for p in warm.polynomials
        ]
        files = list(tmp_path.glob("*.json"))
        assert len(files) == 1

    def test_key_depends_on_order(self, tmp_path):
        cache = BasisCache(tmp_path)
        gens = [R.parse("x^2 + y^2 - 1"), R.parse("x - y")]
        buchberger(Ideal(R, gens, LEX), cache=cache)
        buchberger(Ideal(R, gens, MonomialOrder.lex("y", "x")), cache=cache)
        assert len(list(tmp_path.glob("*.json"))) == 2
