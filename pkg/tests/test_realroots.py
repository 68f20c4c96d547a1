"""Sturm chains, root counting, isolation, refinement."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from einso.realroots import (
    IsolatingInterval,
    cauchy_root_bound,
    count_positive_roots,
    count_roots,
    isolate_positive_roots,
    isolate_roots,
    rational_root_in_interval,
    rational_roots,
    refine,
    sign_at,
    sign_variations,
    simplest_rational_in,
    squarefree_part,
    sturm_sequence,
)
from einso.reference import H1_COEFFS, H2_COEFFS


def test_sturm_chain_of_quadratic():
    assert sturm_sequence([-2, 0, 1]) == [[-2, 0, 1], [0, 2], [2]]


def test_sturm_chain_of_constant():
    assert sturm_sequence([5]) == [[5]]


def test_h1_has_exactly_two_positive_roots():
    coeffs = list(reversed(H1_COEFFS))
    assert count_positive_roots(coeffs) == 2


def test_count_roots_of_published_cubic():
    # roots near 4.16278, 2.42874, 0.741818
    assert count_roots([-45, 90, -44, 6], 0, 10) == 3


def test_no_real_roots():
    assert count_roots([1, 0, 1], -10, 10) == 0


def test_specialized_eliminant_bracketing_n10():
    from einso.reference import specialized_eliminant_coeffs

    h = specialized_eliminant_coeffs(10)
    assert count_roots(h, 0, 1) == 1
    assert count_roots(h, 1, 2) == 1


def test_endpoint_root_counting_is_half_open():
    p = [0, -1, 0, 1]  # x^3 - x: roots -1, 0, 1
    assert count_roots(p, 0, 1) == 1   # 1 included, 0 excluded
    assert count_roots(p, -1, 1) == 3 - 1  # -1 excluded


class TestIsolation:
    def test_isolates_h1(self):
        ivs = isolate_positive_roots(list(reversed(H1_COEFFS)))
        mids = sorted(float(iv.midpoint()) for iv in ivs)
        assert len(mids) == 2
        assert abs(mids[0] - 0.4254295) < 1e-3 or _refined_close(H1_COEFFS, ivs, 0.4254295)
        assert abs(mids[1] - 2.350565) < 1e-2 or _refined_close(H1_COEFFS, ivs, 2.350565)

    def test_isolates_h2(self):
        ivs = isolate_positive_roots(list(reversed(H2_COEFFS)))
        assert len(ivs) == 2
        refined = sorted(
            float(refine(list(reversed(H2_COEFFS)), iv, Fraction(1, 10**9)).midpoint())
            for iv in ivs
        )
        assert abs(refined[0] - 0.48183112) < 1e-7
        assert abs(refined[1] - 2.7966957) < 1e-6

    def test_quartic_without_real_roots(self):
        assert isolate_positive_roots([26, -35, 19, -5, 2]) == []

    def test_exact_rational_root_detected(self):
        # (x - 1) * (x^2 - 2)
        p = [2, -2, -1, 1]
        ivs = isolate_positive_roots(p)
        exacts = [iv for iv in ivs if iv.exact is not None]
        assert [iv.exact for iv in exacts] == [1]
        assert len(ivs) == 2

    def test_multiplicity_hints(self):
        # (x - 2)^2 (x - 5)
        p = [-20, 24, -9, 1]
        ivs = isolate_positive_roots(p, with_multiplicity=True)
        hints = sorted((float(iv.midpoint()), iv.multiplicity_hint) for iv in ivs)
        assert [h for _, h in hints] == [2, 1]

    @settings(max_examples=200, deadline=None)
    @given(st.lists(st.integers(-8, 8), min_size=2, max_size=7))
    def test_isolation_count_matches_sturm_count(self, coeffs):
        if not any(coeffs):
            return
        ivs = isolate_positive_roots(coeffs)
        assert len(ivs) == count_positive_roots(coeffs)
        # Descartes sanity
        stripped = list(coeffs)
        while stripped and stripped[0] == 0:
            stripped.pop(0)
        assert len(ivs) <= sign_variations(list(reversed(stripped)))

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.integers(-8, 8), min_size=2, max_size=6))
    def test_intervals_are_disjoint_and_cover(self, coeffs):
        if not any(coeffs):
            return
        ivs = isolate_positive_roots(coeffs)
        spans = sorted((iv.low, iv.high) for iv in ivs)
        for (l1, h1), (l2, h2) in zip(spans, spans[1:]):
            assert h1 <= l2


def _refined_close(coeffs_desc, ivs, target):
    p = list(reversed(coeffs_desc))
    return any(
        abs(float(refine(p, iv, Fraction(1, 10**8)).midpoint()) - target) < 1e-6
        for iv in ivs
    )


class TestRefine:
    def test_sqrt2(self):
        iv = IsolatingInterval(Fraction(1), Fraction(2))
        out = refine([-2, 0, 1], iv, Fraction(1, 10**12))
        assert out.width() <= Fraction(1, 10**12)
        assert abs(float(out.midpoint()) - 1.41421356237) < 1e-9

    def test_smaller_h1_root(self):
        p = list(reversed(H1_COEFFS))
        iv = min(isolate_positive_roots(p), key=lambda i: i.low)
        out = refine(p, iv, Fraction(1, 10**7))
        assert abs(float(out.midpoint()) - 0.4254295) < 1e-6

    def test_exact_endpoint_root_returned_as_degenerate(self):
        # root at 1 exactly; bracketing interval with integer endpoints
        p = [-1, 0, 0, 1]  # x^3 - 1
        iv = IsolatingInterval(Fraction(1, 2), Fraction(3, 2))
        out = refine(p, iv, Fraction(1, 10**6))
        assert out.exact == 1

    def test_sign_never_lost(self):
        p = [-3, 0, 1]  # sqrt(3)
        iv = IsolatingInterval(Fraction(1), Fraction(2))
        for _ in range(5):
            iv = refine(p, iv, iv.width() / 7)
            assert sign_at(p, iv.low) * sign_at(p, iv.high) < 0


class TestRationalRoots:
    def test_finds_all(self):
        # (2x - 3)(x + 1)(x - 5)
        p = [15, 2, -11, 2]
        assert rational_roots(p) == [-1, Fraction(3, 2), 5]

    def test_simplest_rational(self):
        assert simplest_rational_in(Fraction(9, 10), Fraction(11, 10)) == 1
        assert simplest_rational_in(Fraction(2, 7), Fraction(3, 7)) == Fraction(1, 3)

    def test_rational_root_in_interval(self):
        p = [-2, 3]  # root 2/3
        assert rational_root_in_interval(p, Fraction(1, 2), Fraction(9, 10)) == Fraction(2, 3)
        assert rational_root_in_interval([-3, 0, 1], Fraction(1), Fraction(2)) is None


def test_cauchy_bound_contains_roots():
    p = [-45, 90, -44, 6]
    bound = cauchy_root_bound(p)
    assert count_roots(p, -bound, bound) == 3


def test_squarefree_part_removes_multiplicity():
    # (x-1)^3 (x+2)
    p = [2, -3, -3, 3, 1]
    # p = (x-1)^3 (x+2); expand to double check in the test itself
    from einso.exact import PolyRing

    R = PolyRing(["x"])
    expanded = R.parse("(x-1)^3 (x+2)").to_univariate("x")
    sf = squarefree_part(expanded)
    assert sf == [-2, 1, 1] or sf == [2, -1, -1]  # (x-1)(x+2) up to sign
