import json
import math
import random
from fractions import Fraction as F

import pytest

from bvmax.funcspace import Interval, PiecewiseLinearFunction, StepFunction
from bvmax.gallery import char_interval, plateau_example, sawtooth_example
from bvmax.theorems import (
    SUITES,
    PreconditionError,
    VerificationReport,
    check_bv_to_w11,
    check_component_structure,
    check_fat_cantor,
    check_landau,
    check_landau_simplified_counterexample,
    check_lipschitz_bound,
    check_norm_decrease,
    check_poincare,
    check_usc_discontinuity,
    check_variation_bound,
    random_step_function,
    run_suite,
)

HAT = PiecewiseLinearFunction.continuous(Interval.real_line(), (-1, 0, 1), (0, 1, 0))
JUMP = PiecewiseLinearFunction(Interval.real_line(), (0, 1), ((0, 1), (1, 0)))


class TestVariationBound:
    def test_sharp_on_line(self):
        r = check_variation_bound(char_interval(0, 1))
        assert r.lhs == r.rhs == 2 and r.tightness == 1 and r.passed

    def test_constant(self):
        r = check_variation_bound(StepFunction.constant(4, Interval(0, 1)))
        assert r.lhs == r.rhs == 0 and r.passed

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_shrinking_indicator_tightness(self, k):
        # frozen: V(Mf) = 2 - 4 eps / (1/2 + eps) for the centered bump on [0, 1]
        eps = F(1, 10**k)
        r = check_variation_bound(char_interval(F(1, 2) - eps, F(1, 2) + eps, Interval(0, 1)))
        assert r.lhs == 2 - 4 * eps / (F(1, 2) + eps)
        if k >= 3:
            assert r.tightness >= 0.99

    @pytest.mark.parametrize("seed", range(30))
    def test_random(self, seed):
        assert check_variation_bound(random_step_function(random.Random(seed))).passed


class TestStructure:
    def test_indicator(self):
        r = check_component_structure(char_interval(0, 1))
        assert r.passed and r.notes["shapes"] == ["monotone", "monotone"]

    def test_constant(self):
        r = check_component_structure(StepFunction.constant(2, Interval(0, 3)))
        assert r.passed and r.notes["components"] == 0

    def test_two_bumps_make_a_valley(self):
        f = StepFunction(Interval.real_line(), (0, 1, 3, 4), (0, 1, 0, 1, 0))
        r = check_component_structure(f)
        assert r.passed and r.notes["shapes"] == ["monotone", "valley", "monotone"]
        assert r.notes["local_maxima_off_contact"] == []


class TestLipschitz:
    def test_hat(self):
        r = check_lipschitz_bound(HAT, "line")
        assert r.passed and r.rhs == 1
        assert float(r.lhs) == pytest.approx(math.sqrt(2) - 1, abs=1e-6)
        assert r.notes["refined_ok"]

    def test_constant(self):
        f = PiecewiseLinearFunction.continuous(Interval(0, 1), (0, 1), (3, 3))
        r = check_lipschitz_bound(f)
        assert r.lhs == 0 and r.rhs == 0 and r.passed

    def test_plateau_mechanism_bound(self):
        r = check_lipschitz_bound(plateau_example(20), bound=1 / (F(1, 2) - F(1, 20)))
        assert r.passed and float(r.lhs) <= 20 / 9

    def test_jump_rejected(self):
        with pytest.raises(PreconditionError):
            check_lipschitz_bound(JUMP)


class TestLandau:
    def test_hat_real_line(self):
        r = check_landau(HAT, "real-line")
        assert r.passed and r.lhs == 1 and float(r.rhs) == 48
        assert r.notes["dm_plus"] == 1 and r.notes["dm_minus"] == 1

    def test_zero(self):
        u = PiecewiseLinearFunction.continuous(Interval.real_line(), (0,), (0,))
        r = check_landau(u, "real-line")
        assert r.passed and r.lhs == 0

    def test_sawtooth_passes_real_line(self):
        u, _ = sawtooth_example(16)
        assert check_landau(u, "real-line").passed

    def test_jump_rejected(self):
        with pytest.raises(PreconditionError):
            check_landau(JUMP, "real-line")

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            check_landau(HAT, "sideways")

    @pytest.mark.parametrize("c,N", [(10, 16), (1, 2)])
    def test_simplified_refuted(self, c, N):
        r = check_landau_simplified_counterexample(c, N)
        assert r.passed and r.notes["values_as_claimed"]
        assert r.lhs == F(c, 2 * N) and r.rhs == 1
        assert r.notes["u_sup"] == F(1, 2 * N)

    def test_simplified_needs_large_N(self):
        with pytest.raises(PreconditionError):
            check_landau_simplified_counterexample(10, 10)


class TestPoincare:
    def test_centered_bump(self):
        r = check_poincare(char_interval(F(2, 5), F(3, 5), Interval(0, 1)), F(3, 10))
        assert r.passed and r.lhs == F(1, 5)
        assert r.notes["raw_rhs_integral"] == F(550, 81)
        assert float(r.rhs) == pytest.approx(550 / 81 / math.pi**2, rel=1e-14)

    def test_zero(self):
        r = check_poincare(StepFunction.constant(0, Interval(0, 1)), F(1, 4))
        assert r.passed and r.lhs == 0

    def test_margin_violation(self):
        with pytest.raises(PreconditionError):
            check_poincare(char_interval(0, F(1, 2), Interval(0, 1)), F(1, 4))

    def test_plateau_shaped_pwl(self):
        f = PiecewiseLinearFunction.continuous(Interval(0, 4), (0, 1, 2, 3, 4), (0, 0, 1, 0, 0))
        assert check_poincare(f, 1).passed


class TestBvToW11:
    def test_indicator(self):
        r = check_bv_to_w11(char_interval(0, 1, Interval(-1, 2)))
        assert r.passed and r.notes["l1_bound_ok"]
        # frozen: ||Mf||_1 = 1 + 2 log 2
        assert float(r.notes["maximal_l1"]) == pytest.approx(1 + 2 * math.log(2), abs=1e-15)

    def test_constant_equality(self):
        r = check_bv_to_w11(StepFunction.constant(3, Interval(0, 1)))
        assert r.notes["maximal_l1"] == 3 == r.notes["l1_cap"]

    def test_unbounded_rejected(self):
        with pytest.raises(PreconditionError):
            check_bv_to_w11(char_interval(0, 1))


class TestFixedExamples:
    @pytest.mark.parametrize("n,value", [(1, F(6, 7)), (2, F(30, 31))])
    def test_fat_cantor(self, n, value):
        r = check_fat_cantor(n)
        assert r.passed and r.lhs == value and r.rhs == 1 - F(1, 2 ** (2 * n + 1))
        assert r.notes["witness"]["quotient"] >= r.notes["witness"]["target"]

    def test_fat_cantor_range(self):
        with pytest.raises(PreconditionError):
            check_fat_cantor(4)

    def test_usc(self):
        r = check_usc_discontinuity(8)
        assert r.passed and r.lhs == F(511, 1024)
        assert r.notes["gap"] >= F(49, 100)
        assert r.notes["brute_force_agrees"] and r.notes["one_on_blocks"]

    @pytest.mark.parametrize("N,p", [(100, 1), (100, "inf"), (8, 2)])
    def test_norm_decrease(self, N, p):
        r = check_norm_decrease(N, p)
        assert r.passed and r.strict and float(r.lhs) < float(r.rhs)

    def test_sup_gap(self):
        assert check_norm_decrease(100, "inf").notes["gap_below_one"]

    def test_norm_decrease_needs_N(self):
        with pytest.raises(PreconditionError):
            check_norm_decrease(4)


class TestReports:
    def test_json_shape(self):
        d = check_variation_bound(char_interval(0, 1)).to_dict()
        assert d["lhs"] == {"exact": "2", "decimal": "2"}
        assert set(d) >= {"claim", "instance", "lhs", "rhs", "passed", "tightness", "provenance", "notes"}
        json.dumps(d)

    def test_surd_values_print_readably(self):
        d = check_landau(HAT, "real-line").to_dict()
        assert d["rhs"]["exact"] == "48"

    def test_pass_flag_matches_sides(self):
        r = VerificationReport("x", "y", F(3), F(2), False, None, "exact")
        row = r.tsv_row().split("\t")
        assert row[:4] == ["x", "y", "3", "2"] and row[-1] == "FAIL"

    def test_suites_are_reproducible(self):
        a = run_suite("theorem-main", seed=3, count=5)
        b = run_suite("theorem-main", seed=3, count=5)
        assert a == b

    def test_parallel_matches_serial(self):
        a = run_suite("structure", seed=1, count=6)
        b = run_suite("structure", seed=1, count=6, jobs=2)
        assert a == b

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run_suite("nope")

    @pytest.mark.parametrize("suite", [s for s in SUITES if s != "all"])
    def test_every_suite_passes_small(self, suite):
        reports = run_suite(suite, seed=11, count=8)
        assert reports and all(r["passed"] for r in reports)
