import json
from fractions import Fraction as F

import pytest

from bvmax.exact import maximal
from bvmax.funcspace import (
    Interval,
    canonical_representative,
    function_from_dict,
    function_to_dict,
    lipschitz_constant,
    negative_part,
    positive_part,
    sup_norm,
    total_variation,
)
from bvmax.gallery import (
    GENERATORS,
    build,
    cantor_function_pair,
    char_interval,
    fat_cantor,
    fat_cantor_components,
    manifest,
    plateau_example,
    sawtooth_example,
    sqrt_cusp_example,
    sqrt_cusp_quotient,
    usc_discontinuity_example,
)
from bvmax.pwl import pwl_derivative_sup


def test_char_interval_closed_form():
    p = maximal(char_interval(0, 1))
    for x in (F(-3), F(-1, 7), F(0), F(1, 2), F(1), F(9, 4)):
        want = 1 / (1 - x) if x <= 0 else (1 if x <= 1 else 1 / x)
        assert p(x) == want


def test_char_interval_variation():
    assert total_variation(char_interval(0, 1)) == 2


@pytest.mark.parametrize("a,b", [(1, 1), (2, 1)])
def test_char_interval_degenerate(a, b):
    with pytest.raises(ValueError):
        char_interval(a, b)


def test_char_interval_outside_domain():
    with pytest.raises(ValueError):
        char_interval(0, 2, Interval(0, 1))


@pytest.mark.parametrize("n,measure", [(1, F(3, 4)), (2, F(45, 64)), (3, F(2835, 4096))])
def test_fat_cantor_measure(n, measure):
    comps = fat_cantor_components(n)
    assert sum(hi - lo for lo, hi in comps) == measure
    assert len(comps) == 2 ** (n * (n + 1))


def test_fat_cantor_recursion():
    # each stage removes 4^n cuts, the inner ones of width 16^-n of the parent
    for n in (1, 2, 3):
        prev = sum(hi - lo for lo, hi in fat_cantor_components(n - 1))
        cur = sum(hi - lo for lo, hi in fat_cantor_components(n))
        assert cur == prev * (1 - F(1, 4**n))


@pytest.mark.parametrize("n", [0, 4])
def test_fat_cantor_range(n):
    with pytest.raises(ValueError):
        fat_cantor(n)


def test_usc_breakpoints():
    f = usc_discontinuity_example(3)
    assert f.breakpoints == (0, F(3, 32), F(1, 8), F(3, 16), F(1, 4), F(3, 8), F(1, 2), F(3, 4), 1)
    assert f(0) == 1
    assert f.canonical_value(0) == 0  # isolated point: both laterals vanish


def test_usc_point_values_dominate_laterals():
    f = usc_discontinuity_example(5)
    for k, t in enumerate(f.breakpoints):
        assert f.point_value(k) >= max(f.left_limit(t), f.right_limit(t))


def test_usc_needs_two_levels():
    with pytest.raises(ValueError):
        usc_discontinuity_example(1)


def test_plateau():
    f = plateau_example(10)
    assert f(F(1, 2)) == 0
    assert sup_norm(f) == 1
    assert lipschitz_constant(f) == 10
    with pytest.raises(ValueError):
        plateau_example(3)


@pytest.mark.parametrize("N", [1, 3, 16])
def test_sawtooth(N):
    u, du = sawtooth_example(N)
    assert sup_norm(u) == F(1, 2 * N)
    assert sup_norm(du) == 1
    assert all(u(F(k, N)) == 0 for k in range(N + 1))
    # u' = 1 on (k/N, (2k+1)/2N]
    assert du.canonical_value(F(1, 2 * N)) == 1
    assert du(F(1, 4 * N)) == 1 and du(F(3, 4 * N)) == -1
    assert du(F(-1)) == 0 and du(F(2)) == 0


def test_sqrt_cusp_values():
    s = sqrt_cusp_example(64)
    assert s.samples.min() >= 0 and s.samples.max() <= 1
    t = sqrt_cusp_example(48, window=(0, 1))
    assert t.samples[0] == pytest.approx(1 - (1 / 96) ** 0.5)
    with pytest.raises(ValueError):
        sqrt_cusp_example(8)


def test_sqrt_cusp_quotient_grows():
    qs = [sqrt_cusp_quotient(96 * 2**k) for k in range(4)]
    assert all(a < b for a, b in zip(qs, qs[1:]))


@pytest.mark.parametrize("m", [1, 3, 6])
def test_cantor_pair(m):
    g = cantor_function_pair(m)
    assert sup_norm(g) == 1
    assert min(v for pair in g.knot_values for v in pair) == -1
    assert total_variation(positive_part(g)) == 2
    assert total_variation(negative_part(g)) == 2
    total = pwl_derivative_sup(positive_part(g)) + pwl_derivative_sup(negative_part(g))
    assert total <= 2 + 1e-9


def test_cantor_pair_range():
    with pytest.raises(ValueError):
        cantor_function_pair(9)


@pytest.mark.parametrize(
    "name,params",
    [("char-interval", ["0", "1"]), ("fat-cantor", ["3"]), ("usc", ["8"]), ("plateau", ["8"]), ("cantor-pair", ["4"])],
)
def test_json_round_trip_is_exact(name, params):
    f = build(name, params)
    text = json.dumps(function_to_dict(f))
    g = function_from_dict(json.loads(text))
    assert g == f
    assert json.dumps(function_to_dict(g)) == text


def test_sawtooth_round_trip():
    for f in sawtooth_example(5):
        assert function_from_dict(json.loads(json.dumps(function_to_dict(f)))) == f


def test_generators_are_deterministic():
    sample = {"char-interval": ["0", "1"], "fat-cantor": ["2"], "usc": ["4"], "plateau": ["5"],
              "sawtooth": ["3"], "sqrt-cusp": ["32"], "cantor-pair": ["2"]}
    assert set(sample) == set(GENERATORS)
    for name, args in sample.items():
        a, b = build(name, args), build(name, args)
        if name == "sqrt-cusp":
            assert (a.samples == b.samples).all()
        else:
            assert a == b


def test_manifest():
    m = manifest("fat-cantor", ["2"])
    assert m["expected"]["measure"] == "45/64"
    assert m["expected"]["components"] == 64
    assert manifest("char-interval", ["1/2", "3"])["params"] == {"a": "1/2", "b": "3"}
    with pytest.raises(KeyError):
        manifest("nope", [])
    with pytest.raises(ValueError):
        build("fat-cantor", ["1/2"])


def test_generated_steps_are_canonical():
    for f in (fat_cantor(2), char_interval(0, 1)):
        assert canonical_representative(f) == f
    # the isolated point is deliberately above both lateral limits
    assert canonical_representative(usc_discontinuity_example(4)) != usc_discontinuity_example(4)
