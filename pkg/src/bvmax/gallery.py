"""Constructors for the worked examples, parameterized at desk scale."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .arith import format_rational, to_fraction
from .discrete import SampledSignal, discrete_maximal
from .funcspace import Interval, PiecewiseLinearFunction, StepFunction

__all__ = [
    "char_interval",
    "fat_cantor",
    "fat_cantor_components",
    "fat_cantor_deleted_centers",
    "usc_discontinuity_example",
    "plateau_example",
    "sawtooth_example",
    "sqrt_cusp_example",
    "sqrt_cusp_quotient",
    "cantor_iterate_knots",
    "cantor_function_pair",
    "GENERATORS",
    "manifest",
    "build",
]


def char_interval(a, b, domain: Interval = None) -> StepFunction:
    """Indicator of the closed interval [a, b]."""
    a, b = to_fraction(a), to_fraction(b)
    domain = Interval.real_line() if domain is None else domain
    if not a < b:
        raise ValueError("need a < b")
    if not (domain.left <= a and b <= domain.right):
        raise ValueError(f"[{a}, {b}] not inside {domain}")
    bps, vals = [], []
    if domain.left < a:
        bps.append(a)
        vals.append(0)
    vals.append(1)
    if b < domain.right:
        bps.append(b)
        vals.append(0)
    return StepFunction(domain, tuple(bps), tuple(vals))


def _indicator_of_union(components: list, domain: Interval) -> StepFunction:
    """Indicator of a sorted union of disjoint closed intervals inside ``domain``."""
    vals = [1 if components and components[0][0] == domain.left else 0]
    bps = []
    for lo, hi in components:
        if lo > domain.left:
            bps.append(lo)
            vals.append(1)
        if hi < domain.right:
            bps.append(hi)
            vals.append(0)
    return StepFunction(domain, tuple(bps), tuple(vals))


# ---------------------------------------------------------------------------
# fat Cantor set


def fat_cantor_components(n: int) -> list:
    """Closed components of the n-th stage, as (lo, hi) pairs."""
    if not 0 <= n <= 3:
        raise ValueError("fat Cantor stage must be between 0 and 3")
    comps = [(Fraction(0), Fraction(1))]
    for k in range(1, n + 1):
        parts = 4**k
        new = []
        for lo, hi in comps:
            step = (hi - lo) / parts
            half = (hi - lo) / (2 * 16**k)
            for i in range(parts):
                new.append((lo + i * step + half, lo + (i + 1) * step - half))
        comps = new
    return comps


def fat_cantor_deleted_centers(n: int) -> list:
    """Centers of the intervals removed at stage n (endpoints of parents included)."""
    if not 1 <= n <= 3:
        raise ValueError("fat Cantor stage must be between 1 and 3")
    centers = []
    for lo, hi in fat_cantor_components(n - 1):
        step = (hi - lo) / 4**n
        centers.extend(lo + i * step for i in range(4**n + 1))
    return centers


def fat_cantor(n: int) -> StepFunction:
    """Indicator of the n-th stage on [0, 1]."""
    if not 1 <= n <= 3:
        raise ValueError("fat Cantor stage must be between 1 and 3")
    return _indicator_of_union(fat_cantor_components(n), Interval(0, 1))


# ---------------------------------------------------------------------------


def usc_discontinuity_example(K: int) -> StepFunction:
    """Indicator of {0} and the blocks [3/2^(k+2), 1/2^k], k = 0..K, on the line.

    The isolated point 0 is an explicit point value of 1.
    """
    if K < 2:
        raise ValueError("need K >= 2")
    comps = sorted((Fraction(3, 2 ** (k + 2)), Fraction(1, 2**k)) for k in range(K + 1))
    base = _indicator_of_union(comps, Interval.real_line())
    bps = (Fraction(0), *base.breakpoints)
    pvs = (Fraction(1),) + (None,) * len(base.breakpoints)
    return StepFunction(base.domain, bps, (0, *base.piece_values), pvs)


def plateau_example(N: int) -> PiecewiseLinearFunction:
    """Continuous plateau of height 1 on [0, 1] with a V notch down to 0 at 1/2."""
    if N < 4:
        raise ValueError("need N >= 4")
    h = Fraction(1, N)
    knots = (0, Fraction(1, 2) - h, Fraction(1, 2), Fraction(1, 2) + h, 1)
    return PiecewiseLinearFunction.continuous(Interval(0, 1), knots, (1, 1, 0, 1, 1))


def sawtooth_example(N: int) -> tuple:
    """(u, u') with u' = +-1 alternating on half cells of (0, 1], zero elsewhere."""
    if N < 1:
        raise ValueError("need N >= 1")
    half = Fraction(1, 2 * N)
    knots = [Fraction(k, 2 * N) for k in range(2 * N + 1)]
    u_vals = [half if k % 2 else Fraction(0) for k in range(2 * N + 1)]
    u = PiecewiseLinearFunction.continuous(Interval.real_line(), knots, u_vals)
    slopes = [0] + [1 if k % 2 == 0 else -1 for k in range(2 * N)] + [0]
    # u' = 1 on (k/N, (2k+1)/2N], so point values follow the left piece
    pvs = [None] * len(knots)
    pvs[0] = Fraction(0)
    for k in range(1, 2 * N + 1):
        pvs[k] = Fraction(slopes[k])
    du = StepFunction(Interval.real_line(), tuple(knots), tuple(slopes), tuple(pvs))
    return u, du


def sqrt_cusp_example(n: int, window=(-1, 2)) -> SampledSignal:
    """Midpoint samples of (1 - sqrt x) on [0, 1], zero outside, over ``window``."""
    if n < 16:
        raise ValueError("need n >= 16")
    lo, hi = (float(to_fraction(w)) for w in window)
    if not (lo <= 0 and hi >= 1):
        raise ValueError("window must contain [0, 1]")
    h = (hi - lo) / n
    x = lo + (np.arange(n) + 0.5) * h
    inside = (x >= 0) & (x <= 1)
    vals = np.zeros(n)
    vals[inside] = 1.0 - np.sqrt(x[inside])
    return SampledSignal(vals, h, lo)


def sqrt_cusp_quotient(n: int) -> float:
    """Difference quotient of the discrete Mf across 0 for the sampled cusp."""
    s = sqrt_cusp_example(n)
    m = discrete_maximal(s).samples
    k = int(np.searchsorted(s.positions, 0.0))
    return float((m[k] - m[k - 1]) / (s.positions[k] - s.positions[k - 1]))


def cantor_iterate_knots(m: int) -> tuple:
    """Knots and values of the level-m piecewise-linear Cantor iterate on [0, 1]."""
    if not 1 <= m <= 8:
        raise ValueError("Cantor level must be between 1 and 8")
    intervals = [(Fraction(0), Fraction(1))]
    for _ in range(m):
        nxt = []
        for lo, hi in intervals:
            third = (hi - lo) / 3
            nxt.append((lo, lo + third))
            nxt.append((hi - third, hi))
        intervals = nxt
    step = Fraction(1, 2**m)
    knots, values = [Fraction(0)], [Fraction(0)]
    for k, (lo, hi) in enumerate(intervals):
        if lo != knots[-1]:
            knots.append(lo)
            values.append(values[-1])
        knots.append(hi)
        values.append((k + 1) * step)
    return knots, values


def cantor_function_pair(m: int) -> PiecewiseLinearFunction:
    """g(x) = c(x) - c(x - 3), c the level-m iterate raised on [0, 1], flat on
    [1, 2] and mirrored about 3/2 back down on [2, 3]."""
    ks, vs = cantor_iterate_knots(m)
    rise = list(zip(ks, vs))
    fall = [(3 - t, v) for t, v in reversed(rise)]
    bump = rise + fall
    pts = bump + [(t + 3, -v) for t, v in bump[1:]]
    knots = [t for t, _ in pts]
    vals = [v for _, v in pts]
    return PiecewiseLinearFunction.continuous(Interval.real_line(), knots, vals)


# ---------------------------------------------------------------------------
# manifest


def _fat_cantor_expected(n: int) -> dict:
    measure = Fraction(1)
    for k in range(1, n + 1):
        measure *= 1 - Fraction(1, 4**k)
    return {
        "measure": format_rational(measure),
        "components": 2 ** (n * (n + 1)),
        "midpoint_bound": format_rational(1 - Fraction(1, 2 ** (2 * n + 1))),
    }


GENERATORS = {
    "char-interval": (char_interval, ("a", "b"), lambda a, b: {"variation": "2", "sup_norm": "1"}),
    "fat-cantor": (fat_cantor, ("n",), _fat_cantor_expected),
    "usc": (usc_discontinuity_example, ("K",), lambda K: {"value_at_0": "1", "maximal_at_0_at_most": format_rational(Fraction(1, 2) + Fraction(1, 2**K))}),
    "plateau": (plateau_example, ("N",), lambda N: {"value_at_half": "0", "sup_norm": "1", "lipschitz": str(N)}),
    "sawtooth": (sawtooth_example, ("N",), lambda N: {"sup_norm_u": format_rational(Fraction(1, 2 * N)), "sup_norm_du": "1", "sup_derivative_maximal_du": "1"}),
    "sqrt-cusp": (sqrt_cusp_example, ("n",), lambda n: {"value_at_0": "1", "value_at_1": "0"}),
    "cantor-pair": (cantor_function_pair, ("m",), lambda m: {"range": ["-1", "1"], "variation_per_side": "2", "derivative_sum_at_most": "2"}),
}


def _coerce_params(name: str, params) -> list:
    fn, names, _ = GENERATORS[name]
    if len(params) != len(names):
        raise ValueError(f"{name} takes parameters {', '.join(names)}")
    out = []
    for pname, raw in zip(names, params):
        if pname in ("a", "b"):
            out.append(to_fraction(raw))
        else:
            val = to_fraction(raw)
            if val.denominator != 1:
                raise ValueError(f"{pname} must be an integer")
            out.append(int(val))
    return out


def build(name: str, params):
    """Instantiate generator ``name`` from string or numeric parameters."""
    if name not in GENERATORS:
        raise KeyError(f"unknown generator {name!r}")
    return GENERATORS[name][0](*_coerce_params(name, params))


def manifest(name: str, params) -> dict:
    if name not in GENERATORS:
        raise KeyError(f"unknown generator {name!r}")
    args = _coerce_params(name, params)
    _, names, expected = GENERATORS[name]
    return {
        "generator": name,
        "params": {k: (format_rational(v) if isinstance(v, Fraction) else v) for k, v in zip(names, args)},
        "expected": expected(*args),
    }
