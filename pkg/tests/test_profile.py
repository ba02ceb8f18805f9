import json
from fractions import Fraction as F

import pytest

from bvmax.arith import QuadSurd, SurdSum, exact_abs_diff, format_decimal, format_rational, quadratic_roots, rational_between
from bvmax.exact import local_maximal, maximal
from bvmax.funcspace import Interval, StepFunction
from bvmax.gallery import char_interval
from bvmax.profile import (
    Segment,
    max_merge,
    profile_csv,
    profile_derivative_l2_squared,
    profile_l1_derivative,
    profile_l1_norm,
    profile_sup_derivative,
    profile_to_dict,
    profile_variation,
)


class TestArith:
    def test_surd_ordering(self):
        r2 = QuadSurd(F(0), F(1), 2)
        assert F(141, 100) < r2 < F(142, 100)
        assert r2 * r2 == 2

    def test_quadratic_roots_exact(self):
        roots = quadratic_roots(F(1), F(0), F(-2))
        assert [float(r) for r in roots] == pytest.approx([-2**0.5, 2**0.5])
        assert quadratic_roots(F(1), F(-3), F(2)) == [1, 2]

    def test_surd_sum_sign(self):
        s = SurdSum.of(QuadSurd(F(0), F(1), 2)) - SurdSum.of(QuadSurd(F(0), F(1), 3))
        assert s.sign() == -1
        assert exact_abs_diff(QuadSurd(F(1), F(1), 5), F(1)) == QuadSurd(F(0), F(1), 5)

    def test_rational_between_surds(self):
        lo, hi = QuadSurd(F(0), F(1), 2), QuadSurd(F(0), F(1), 3)
        q = rational_between(lo, hi)
        assert lo < q < hi

    def test_formatting(self):
        assert format_rational(F(-3, 4)) == "-3/4"
        assert format_rational(float("inf")) == "inf"
        assert format_decimal(F(1, 2)) == "0.5"
        assert float(format_decimal(0.1)) == 0.1


class TestCalculus:
    def test_indicator_profile(self):
        p = maximal(char_interval(0, 1))
        assert profile_variation(p) == 2
        assert profile_l1_derivative(p) == 2
        assert profile_sup_derivative(p) == 1

    def test_constant_profile(self):
        p = maximal(StepFunction.constant(5, Interval(0, 1)))
        assert profile_variation(p) == profile_sup_derivative(p) == profile_l1_derivative(p) == 0

    def test_derivative_l2_closed_form(self):
        # frozen: oracle grid integration of the capped profile gives 6.7901 = 550/81
        f = char_interval(F(2, 5), F(3, 5), Interval(0, 1))
        assert profile_derivative_l2_squared(local_maximal(f, F(3, 10))) == F(550, 81)

    def test_l1_norm_of_indicator_profile(self):
        # on [-1, 2]: 1 + 2 * integral_0^1 dx/(1+x) = 1 + 2 log 2
        import math

        p = maximal(char_interval(0, 1, Interval(-1, 2)))
        assert float(profile_l1_norm(p)) == pytest.approx(1 + 2 * math.log(2), abs=1e-15)

    def test_continuity(self):
        assert maximal(StepFunction(Interval(0, 5), (1, 2, 4), (3, 0, 2, 1))).is_continuous


class TestMerge:
    def test_max_of_crossing_lines(self):
        a = [Segment(F(0), F(2), (F(0), F(1), F(1), F(0)))]
        b = [Segment(F(0), F(2), (F(1), F(0), F(1), F(0)))]
        merged = max_merge(a, b)
        assert [s.lo for s in merged] == [0, 1]
        assert merged[0].coeffs[0] == 1 and merged[1].coeffs[1] == 1


class TestSerialization:
    def test_json(self):
        d = profile_to_dict(maximal(char_interval(0, 1)))
        assert d["provenance"] == "exact"
        assert d["segments"][0]["lo"] == "-inf"
        json.dumps(d)

    def test_surd_endpoints_in_json(self):
        f = StepFunction(Interval(0, 6), (1, 2, F(7, 2)), (3, 0, 5, 1))
        d = profile_to_dict(local_maximal(f, F(3, 2)))
        assert any(isinstance(s["lo"], dict) and "surd" in s["lo"] for s in d["segments"])

    def test_csv(self):
        text = profile_csv(maximal(char_interval(0, 1)), [F(2), F(-1)])
        assert text == "2,0.5\n-1,0.5\n"
        text = profile_csv(maximal(char_interval(0, 1)), [F(3)], exact_rationals=True)
        assert text == "3,1/3\n"
