"""Exact arithmetic in Q(alpha): zero tests, signs, dynamic splitting."""

from fractions import Fraction

import pytest

from einso.algebraic import FieldElement, RealRoot, RootField, interval_poly_eval
from einso.exact import StructuralError


def sqrt2_field():
    return RootField(RealRoot([-2, 0, 1], Fraction(1), Fraction(2)))


class TestRealRoot:
    def test_construction_validates_isolation(self):
        with pytest.raises(StructuralError):
            RealRoot([-2, 0, 1], Fraction(-2), Fraction(2))  # two roots inside

    def test_endpoint_roots_rejected(self):
        with pytest.raises(StructuralError):
            RealRoot([-1, 0, 1], Fraction(1), Fraction(2))

    def test_refine_converges(self):
        r = RealRoot([-2, 0, 1], Fraction(1), Fraction(2))
        r.refine_below(Fraction(1, 10**12))
        assert abs(r.to_float() - 2**0.5) < 1e-11

    def test_sign_of(self):
        r = RealRoot([-2, 0, 1], Fraction(1), Fraction(2))
        assert r.sign_of([-2, 0, 1]) == 0          # its own polynomial
        assert r.sign_of([-1, 1]) == 1             # alpha - 1 > 0
        assert r.sign_of([-3, 0, 2]) == 1          # 2 alpha^2 - 3 = 1 > 0
        assert r.sign_of([3, 0, -2]) == -1


class TestFieldArithmetic:
    def test_generator_squares_to_two(self):
        F = sqrt2_field()
        a = F.generator()
        assert (a * a - 2).is_zero()

    def test_mixed_arithmetic_with_rationals(self):
        F = sqrt2_field()
        a = F.generator()
        v = (Fraction(3, 2) * a + 1) * (a - 1)
        # (3/2 a + 1)(a - 1) = 3/2 a^2 - 1/2 a - 1 = 2 - a/2
        assert (v - (2 - a * Fraction(1, 2))).is_zero()

    def test_inverse_is_free_and_exact(self):
        F = sqrt2_field()
        a = F.generator()
        inv = (a + 1).inverse()
        assert ((a + 1) * inv - 1).is_zero()
        # 1/(1 + sqrt2) = sqrt2 - 1
        assert (inv - (a - 1)).is_zero()

    def test_division_by_zero_detected(self):
        F = sqrt2_field()
        a = F.generator()
        zero = a * a - 2
        with pytest.raises(ZeroDivisionError):
            zero.inverse()

    def test_sign_and_interval(self):
        F = sqrt2_field()
        a = F.generator()
        v = a - Fraction(3, 2)
        assert v.sign() == -1
        lo, hi = v.interval(Fraction(1, 10**9))
        true_value = 2**0.5 - 1.5
        assert lo <= true_value <= hi
        assert hi - lo <= Fraction(1, 10**9)

    def test_canonical_removes_denominator(self):
        F = sqrt2_field()
        a = F.generator()
        v = (a + 3) / (a + 1)
        c = v.canonical()
        assert c.den == (Fraction(1),)
        assert (v - c).is_zero()

    def test_powers(self):
        F = sqrt2_field()
        a = F.generator()
        assert ((a ** 4) - 4).is_zero()

    def test_as_fraction_on_constants(self):
        F = sqrt2_field()
        assert F.constant(Fraction(5, 3)).as_fraction() == Fraction(5, 3)
        assert F.generator().as_fraction() is None


class TestDynamicSplit:
    def test_reducible_defining_polynomial_shrinks(self):
        # f = (y^2 - 2)(y - 3), alpha = sqrt2 isolated in (1, 2)
        f = [6, -2, -3, 1]
        root = RealRoot(f, Fraction(1), Fraction(2))
        F = RootField(root)
        a = F.generator()
        # 1/(a - 3) in polynomial form needs the modular inverse, which
        # discovers that y - 3 shares no root with alpha and splits f
        v = ((a - 3).inverse()).canonical()
        assert ((a - 3) * v - 1).is_zero()
        assert len(root.poly) == 3  # defining polynomial became y^2 - 2
        assert (a * a - 2).is_zero()

    def test_zero_test_shrinks_too(self):
        f = [6, -2, -3, 1]
        root = RealRoot(f, Fraction(1), Fraction(2))
        F = RootField(root)
        a = F.generator()
        assert (a * a - 2).is_zero()
        assert len(root.poly) == 3


def test_interval_poly_eval_contains_value():
    box = (Fraction(1), Fraction(2))
    lo, hi = interval_poly_eval([Fraction(-2), Fraction(0), Fraction(1)], box)
    assert lo <= -1 <= 2 <= hi
