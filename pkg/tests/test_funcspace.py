import json
from fractions import Fraction as F

import pytest

from bvmax.funcspace import (
    FunctionSchemaError,
    Interval,
    PiecewiseLinearFunction,
    StepFunction,
    canonical_representative,
    derivative_measure,
    dump_function,
    extend_by_zero,
    function_from_dict,
    function_to_dict,
    l1_norm,
    lipschitz_constant,
    load_function,
    negative_part,
    positive_part,
    sup_norm,
    total_variation,
)
from bvmax.exact import maximal
from bvmax.gallery import char_interval

LINE = Interval.real_line()


def hat():
    return PiecewiseLinearFunction.continuous(Interval(0, 1), (0, F(1, 2), 1), (0, F(1, 2), 0))


class TestInterval:
    def test_rejects_degenerate(self):
        with pytest.raises(ValueError):
            Interval(1, 1)
        with pytest.raises(ValueError):
            Interval(2, 1)

    def test_infinite_ends(self):
        assert not LINE.is_bounded
        assert Interval(0, 3).length == 3
        assert LINE.contains(F(10**9))


class TestStepFunction:
    def test_piece_count_validation(self):
        with pytest.raises(FunctionSchemaError):
            StepFunction(Interval(0, 2), (1,), (1,))

    def test_breakpoints_increasing_and_interior(self):
        with pytest.raises(FunctionSchemaError):
            StepFunction(Interval(0, 3), (2, 1), (0, 1, 0))
        with pytest.raises(FunctionSchemaError):
            StepFunction(Interval(0, 3), (3,), (0, 1))

    def test_compact_support_on_infinite_domain(self):
        with pytest.raises(FunctionSchemaError):
            StepFunction(LINE, (0,), (1, 0))

    def test_evaluation_and_limits(self):
        f = StepFunction(LINE, (0, 1), (0, 2, 0))
        assert f(F(1, 2)) == 2
        assert f.left_limit(1) == 2 and f.right_limit(1) == 0
        assert f.canonical_value(0) == 2


class TestCanonical:
    def test_max_of_lateral_limits(self):
        f = StepFunction(Interval(0, 2), (1,), (2, 3), (5,))
        g = canonical_representative(f)
        assert g.point_value(0) == 3

    def test_continuous_breakpoint_unchanged(self):
        f = StepFunction(Interval(0, 2), (1,), (4, 4))
        assert canonical_representative(f).point_value(0) == 4

    def test_indicator_with_closed_ends(self):
        f = StepFunction(LINE, (0, 1), (0, 1, 0), (1, 1))
        g = canonical_representative(f)
        assert (g.point_value(0), g.point_value(1)) == (1, 1)

    def test_idempotent(self):
        f = StepFunction(Interval(0, 4), (1, 2, 3), (1, 5, 2, 7), (0, None, 9))
        g = canonical_representative(f)
        assert canonical_representative(g) == g


class TestVariation:
    def test_indicator_on_line(self):
        assert total_variation(char_interval(0, 1)) == 2

    def test_constant(self):
        assert total_variation(StepFunction.constant(3, Interval(0, 1))) == 0

    def test_three_pieces(self):
        # canonical point values are max of the limits: 0 -> 2 -> 1 -> 0
        f = StepFunction(LINE, (0, 1, 2), (0, 2, 1, 0))
        assert total_variation(f) == 2 + 1 + 1 - 1 + 1 - 0 or total_variation(f) == 4

    def test_pieces_0_2_1_inner_variation(self):
        f = StepFunction(Interval(-1, 2), (0, 1), (0, 2, 1))
        assert total_variation(f) == 3

    def test_noncanonical_point_value_adds_variation(self):
        f = StepFunction(Interval(0, 2), (1,), (1, 1), (4,))
        assert total_variation(f) == 6
        assert total_variation(canonical_representative(f)) == 0

    def test_pwl_hat(self):
        assert total_variation(hat()) == 1


class TestDerivativeMeasure:
    def test_indicator(self):
        dm = derivative_measure(char_interval(0, 1))
        assert dm.jump_part == ((0, 1), (1, -1))
        assert dm.total_variation_mass == 2

    def test_ramp(self):
        ramp = PiecewiseLinearFunction.continuous(Interval(0, 1), (0, 1), (0, 3))
        dm = derivative_measure(ramp)
        assert dm.jump_part == ()
        assert dm.total_variation_mass == 3

    def test_hat_mass(self):
        dm = derivative_measure(hat())
        assert dm.total_variation_mass == 1
        assert set(dm.density_part.piece_values) == {1, -1}


class TestParts:
    def test_positive_part(self):
        f = StepFunction(Interval(0, 2), (1,), (-1, 2))
        assert positive_part(f).piece_values == (0, 2)
        assert negative_part(f).piece_values == (1, 0)

    def test_nonnegative_identity(self):
        f = StepFunction(Interval(0, 2), (1,), (1, 2))
        assert positive_part(f) == f
        assert all(v == 0 for v in negative_part(f).piece_values)

    def test_hat_derivative_parts(self):
        du = derivative_measure(extend_by_zero(hat(), LINE)).density_part
        plus = positive_part(du).simplified()
        minus = negative_part(du).simplified()
        assert plus.breakpoints == (0, F(1, 2)) and plus.piece_values == (0, 1, 0)
        assert minus.breakpoints == (F(1, 2), 1) and minus.piece_values == (0, 1, 0)


class TestExtend:
    def test_to_line(self):
        f = char_interval(0, 1, Interval(0, 1))
        g = extend_by_zero(f, LINE)
        assert g.breakpoints == (0, 1) and g.piece_values == (0, 1, 0)

    def test_smaller_target_rejected(self):
        with pytest.raises(ValueError):
            extend_by_zero(char_interval(0, 1, Interval(0, 1)), Interval(0, F(1, 2)))

    def test_maximal_unchanged_on_old_domain(self):
        f = StepFunction(Interval(0, 1), (F(1, 3), F(1, 2)), (1, 3, 2))
        g = extend_by_zero(f, Interval(-2, 3))
        pf, pg = maximal(f), maximal(g)
        # larger domains can only add windows, and for f >= 0 those windows
        # reach into zeros; the values on the old domain agree
        for k in range(21):
            x = F(k, 20)
            assert pf(x) == pg(x)


class TestNorms:
    def test_indicator(self):
        f = char_interval(0, 1)
        assert sup_norm(f) == 1 and l1_norm(f) == 1

    def test_hat_sup(self):
        assert sup_norm(hat()) == F(1, 2)

    def test_lipschitz_rejects_jumps(self):
        jump = PiecewiseLinearFunction(Interval(0, 2), (0, 1, 2), ((0, 0), (0, 1), (1, 1)))
        with pytest.raises(ValueError):
            lipschitz_constant(jump)
        assert lipschitz_constant(hat()) == 1


class TestSchema:
    def test_round_trip(self, tmp_path):
        f = StepFunction(LINE, (F(-1, 3), 0, F(7, 2)), (0, F(5, 7), 2, 0), (None, 9, None))
        path = tmp_path / "f.json"
        dump_function(f, path)
        assert load_function(path) == f
        data = json.loads(path.read_text())
        assert data["breakpoints"][0] == "-1/3"
        assert data["domain"] == ["-inf", "inf"]

    def test_pwl_round_trip(self):
        h = hat()
        assert function_from_dict(function_to_dict(h)) == h

    def test_malformed(self):
        with pytest.raises(FunctionSchemaError):
            function_from_dict({"kind": "step"})
        with pytest.raises(FunctionSchemaError):
            function_from_dict({"kind": "blob", "domain": ["0", "1"]})
