"""Piecewise linear-fractional profiles and their exact calculus.

A profile is a sorted list of :class:`Segment` objects covering a domain.
Each segment carries ``x -> (a + b*x) / (c + d*x)`` with a denominator of
fixed sign on the segment, so every segment is monotone.  Endpoints are
Fractions, quadratic surds, or infinities; coefficients are rational
(or floats for float-provenance profiles).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath

from .arith import (
    INF,
    QuadSurd,
    exact_abs_diff,
    exact_diff,
    exact_sum,
    format_decimal,
    format_rational,
    quadratic_roots,
    rational_between,
    to_mpf,
)
from .funcspace import Interval

__all__ = [
    "Segment",
    "MaximalProfile",
    "max_merge",
    "profile_variation",
    "profile_sup_derivative",
    "profile_l1_derivative",
    "profile_l1_norm",
    "profile_derivative_l2_squared",
    "profile_to_dict",
    "profile_csv",
]


def _is_inf(x) -> bool:
    return isinstance(x, float) and math.isinf(x)


@dataclass(frozen=True)
class Segment:
    """One linear-fractional piece on the open interval (lo, hi).

    ``witness`` names the optimizing interval family: ``('right', w)`` for
    windows ``[x, w]``, ``('left', w)`` for ``[w, x]``, ``('cap', R)`` for a
    length-capped window and ``('grid', None)`` for float chords.
    """

    lo: object
    hi: object
    coeffs: tuple
    witness: tuple = ("none", None)

    def value(self, x):
        a, b, c, d = self.coeffs
        if _is_inf(x):
            if d != 0:
                return b / d
            if b == 0:
                return a / c
            return INF if (b / c > 0) == (x > 0) else -INF
        return (a + b * x) / (c + d * x)

    def derivative(self, x):
        a, b, c, d = self.coeffs
        if _is_inf(x):
            if d != 0:
                return Fraction(0) if not isinstance(a, float) else 0.0
            return b / c
        den = c + d * x
        return (b * c - a * d) / (den * den)

    @property
    def left_value(self):
        return self.value(self.lo)

    @property
    def right_value(self):
        return self.value(self.hi)

    @property
    def is_constant(self) -> bool:
        a, b, c, d = self.coeffs
        return b * c - a * d == 0

    def same_function(self, other: "Segment") -> bool:
        a1, b1, c1, d1 = self.coeffs
        a2, b2, c2, d2 = other.coeffs
        return b1 * d2 == b2 * d1 and a1 * d2 + b1 * c2 == a2 * d1 + b2 * c1 and a1 * c2 == a2 * c1

    def with_bounds(self, lo, hi) -> "Segment":
        return Segment(lo, hi, self.coeffs, self.witness)

    def reflected(self) -> "Segment":
        """Segment of x -> p(-x)."""
        a, b, c, d = self.coeffs
        side, w = self.witness
        side = {"left": "right", "right": "left"}.get(side, side)
        if w is not None and side in ("left", "right"):
            w = -w
        return Segment(-self.hi, -self.lo, (a, -b, c, -d), (side, w))


@dataclass(frozen=True)
class MaximalProfile:
    """Explicit piecewise linear-fractional representation of a maximal function.

    ``kind`` is ``'two-sided'``, ``'left'`` or ``'right'``.  One-sided
    profiles may jump; the value taken at a discontinuous join is stored in
    ``join_values``.  ``provenance`` is ``'exact'`` (rational breakpoints),
    ``'algebraic'`` (some quadratic-surd breakpoints) or ``'float'``.
    """

    domain: Interval
    segments: tuple
    provenance: str = "exact"
    kind: str = "two-sided"
    radius: Optional[Fraction] = None
    join_values: tuple = field(default=())

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs:
            raise ValueError("profile needs at least one segment")

    @property
    def breakpoints(self) -> list:
        return [s.hi for s in self.segments[:-1]]

    def _jump_lookup(self, x):
        for t, v in self.join_values:
            if t == x:
                return v
        return None

    def segment_index(self, x) -> int:
        """Index of the segment whose closure contains x (leftmost on ties)."""
        lo, hi = 0, len(self.segments) - 1
        while lo < hi:
            mid = (lo + hi) // 2
            if self.segments[mid].hi < x:
                lo = mid + 1
            else:
                hi = mid
        return lo

    def __call__(self, x):
        if not self.domain.contains(x):
            raise ValueError(f"{x} outside domain {self.domain}")
        k = self.segment_index(x)
        seg = self.segments[k]
        if k + 1 < len(self.segments) and seg.hi == x:
            jv = self._jump_lookup(x)
            if jv is not None:
                return jv
        return seg.value(x)

    def continuity_flags(self) -> list:
        """For each interior join, whether the two adjacent segments agree."""
        out = []
        for s, t in zip(self.segments, self.segments[1:]):
            if self.provenance == "float":
                out.append(abs(s.right_value - t.left_value) <= 1e-9 * max(1.0, abs(s.right_value)))
            else:
                out.append(exact_abs_diff(s.right_value, t.left_value) == 0)
        return out

    @property
    def is_continuous(self) -> bool:
        return all(self.continuity_flags())

    def values_float(self, xs) -> list:
        """Float values at float points."""
        if self.provenance == "float":
            return [float(self(x)) for x in xs]
        return [float(self(Fraction(x))) for x in xs]


# ---------------------------------------------------------------------------
# pointwise maximum of two profiles on the same range


def _crossings(s1: Segment, s2: Segment) -> list:
    a1, b1, c1, d1 = s1.coeffs
    a2, b2, c2, d2 = s2.coeffs
    A = b1 * d2 - b2 * d1
    B = a1 * d2 + b1 * c2 - a2 * d1 - b2 * c1
    C = a1 * c2 - a2 * c1
    if A == 0 and B == 0:
        return []
    return [r for r in quadratic_roots(A, B, C) if s1.lo < r < s1.hi]


def _append(out: list, seg: Segment) -> None:
    if not seg.lo < seg.hi:
        return
    if out:
        prev = out[-1]
        if prev.same_function(seg) and (prev.witness == seg.witness or prev.is_constant):
            out[-1] = prev.with_bounds(prev.lo, seg.hi)
            return
    out.append(seg)


def max_merge(first: list, second: list) -> list:
    """Pointwise max of two segment lists covering the same interval.

    Ties go to ``first``.  Crossings are located exactly.
    """
    out: list = []
    i = j = 0
    lo = first[0].lo
    while i < len(first) and j < len(second):
        s1, s2 = first[i], second[j]
        hi = s1.hi if s1.hi <= s2.hi else s2.hi
        p1, p2 = s1.with_bounds(lo, hi), s2.with_bounds(lo, hi)
        cuts = [lo, *_crossings(p1, p2), hi]
        for u, w in zip(cuts, cuts[1:]):
            z = rational_between(u, w)
            win = p1 if p1.value(z) >= p2.value(z) else p2
            _append(out, win.with_bounds(u, w))
        lo = hi
        if s1.hi == hi:
            i += 1
        if s2.hi == hi:
            j += 1
    return out


def concat_segments(parts: list) -> list:
    out: list = []
    for seg in parts:
        _append(out, seg)
    return out


# ---------------------------------------------------------------------------
# exact calculus


def _value_sequence(p: MaximalProfile) -> list:
    seq = []
    for k, s in enumerate(p.segments):
        seq.append(s.left_value)
        seq.append(s.right_value)
        if k + 1 < len(p.segments):
            jv = p._jump_lookup(s.hi)
            if jv is not None:
                seq.append(jv)
    return seq


def profile_variation(p: MaximalProfile):
    """Total variation: segments are monotone, so endpoint differences suffice."""
    seq = _value_sequence(p)
    if p.provenance == "float":
        return float(sum(abs(float(x) - float(y)) for x, y in zip(seq, seq[1:])))
    return exact_sum(exact_abs_diff(x, y) for x, y in zip(seq, seq[1:]))


def profile_l1_derivative(p: MaximalProfile):
    """Integral of |p'|, summed per segment (ignores jumps)."""
    if p.provenance == "float":
        return float(sum(abs(float(s.right_value) - float(s.left_value)) for s in p.segments))
    return exact_sum(exact_abs_diff(s.right_value, s.left_value) for s in p.segments)


def _max_exact(values):
    best = None
    for v in values:
        if best is None or v > best:
            best = v
    return best


def profile_sup_derivative(p: MaximalProfile):
    """sup |p'|; |p'| is monotone on each segment so endpoints suffice.

    Returns an exact number for exact/algebraic provenance.
    """
    mags = []
    for s in p.segments:
        if s.is_constant:
            continue
        for x in (s.lo, s.hi):
            mags.append(abs(s.derivative(x)))
    if not mags:
        return 0.0 if p.provenance == "float" else Fraction(0)
    if p.provenance == "float":
        return float(max(mags))
    return _max_exact(mags)


def _inv_cube(x):
    return 1 / (x * x * x)


def profile_derivative_l2_squared(p: MaximalProfile):
    """Exact integral of (p')**2 over the domain."""
    terms = []
    for s in p.segments:
        a, b, c, d = s.coeffs
        K = b * c - a * d
        if K == 0:
            continue
        if d == 0:
            terms.append((b / c) ** 2 * exact_diff(s.hi, s.lo))
            continue
        lo_term = Fraction(0) if _is_inf(s.lo) else _inv_cube(c + d * s.lo)
        hi_term = Fraction(0) if _is_inf(s.hi) else _inv_cube(c + d * s.hi)
        terms.append((K * K / (3 * d)) * exact_diff(lo_term, hi_term))
    if p.provenance == "float":
        return float(sum(float(t) for t in terms))
    return exact_sum(terms)


def profile_l1_norm(p: MaximalProfile, dps: int = 50):
    """Integral of |p| (p >= 0 for maximal profiles).

    Exact when every segment is polynomial (d = 0) with rational ends;
    otherwise an mpmath value at ``dps`` digits (logarithms appear).
    """
    if not p.domain.is_bounded:
        if any(s.value(s.lo) != 0 or s.value(s.hi) != 0 for s in (p.segments[0], p.segments[-1])):
            return INF
    exact = p.provenance == "exact" and all(s.coeffs[3] == 0 for s in p.segments)
    if exact:
        total = Fraction(0)
        for s in p.segments:
            a, b, c, _ = s.coeffs
            total += (a * (s.hi - s.lo) + b * (s.hi * s.hi - s.lo * s.lo) / 2) / c
        return total
    with mpmath.workdps(dps):
        total = mpmath.mpf(0)
        for s in p.segments:
            a, b, c, d = (to_mpf(v, dps) for v in s.coeffs)
            lo, hi = to_mpf(s.lo, dps), to_mpf(s.hi, dps)
            if d == 0:
                total += (a * (hi - lo) + b * (hi * hi - lo * lo) / 2) / c
            else:
                k = a - b * c / d
                total += (b / d) * (hi - lo) + (k / d) * (mpmath.log(abs(c + d * hi)) - mpmath.log(abs(c + d * lo)))
        return total


# ---------------------------------------------------------------------------
# serialization


def _endpoint_json(x):
    if isinstance(x, QuadSurd):
        return {"surd": [format_rational(x.a), format_rational(x.b), x.D], "approx": format_decimal(x)}
    if isinstance(x, float) and not math.isinf(x):
        return format_decimal(x)
    return format_rational(x)


def _coeff_json(c):
    return format_decimal(c) if isinstance(c, float) else format_rational(c)


def profile_to_dict(p: MaximalProfile) -> dict:
    return {
        "kind": p.kind,
        "domain": [format_rational(p.domain.left), format_rational(p.domain.right)],
        "provenance": p.provenance,
        "radius": None if p.radius is None else format_rational(p.radius),
        "segments": [
            {
                "lo": _endpoint_json(s.lo),
                "hi": _endpoint_json(s.hi),
                "coeffs": [_coeff_json(c) for c in s.coeffs],
                "witness": [s.witness[0], None if s.witness[1] is None else _endpoint_json(s.witness[1])],
            }
            for s in p.segments
        ],
        "join_values": [[_endpoint_json(t), _endpoint_json(v)] for t, v in p.join_values],
    }


def profile_json(p: MaximalProfile) -> str:
    return json.dumps(profile_to_dict(p), indent=2)


def profile_csv(p: MaximalProfile, xs, exact_rationals: bool = False) -> str:
    """CSV rows ``x,value`` at the given points."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for x in xs:
        v = p(x)
        if exact_rationals and isinstance(v, Fraction):
            writer.writerow([format_rational(x), format_rational(v)])
        else:
            writer.writerow([format_decimal(x), format_decimal(v)])
    return buf.getvalue()
