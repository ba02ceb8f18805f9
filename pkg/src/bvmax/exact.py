"""Exact maximal functions of step functions.

The right one-sided maximal function on a piece ``(p, q)`` with value ``v``
is a tangent query from the moving point ``(x, F(x))`` to the upper
concave hull of the primitive's nodes to the right of ``q``.  Sweeping the
pieces from right to left keeps that hull on a stack.  The left side comes
from reflecting ``x -> -x`` and the two-sided function is their pointwise
maximum, merged at exact crossing points.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .arith import INF, QuadSurd, to_fraction
from .funcspace import StepFunction, absolute_value, canonical_representative
from .profile import MaximalProfile, Segment, concat_segments, max_merge

__all__ = [
    "ArgmaxWitness",
    "NegativeValuesError",
    "one_sided_maximal",
    "maximal",
    "local_maximal",
    "maximal_at",
    "argmax_witness",
    "Primitive",
]


class NegativeValuesError(ValueError):
    """A one-sided engine received a function with negative values."""


class Primitive:
    """Exact primitive ``F`` of a step function, zero at the first node."""

    def __init__(self, f: StepFunction):
        self.f = f
        self.nodes = f.nodes
        self.values = f.primitive_at_nodes()
        # piece index to the right of node i
        shift = 1 if f.domain.left == -INF else 0
        self._right_piece = [i + shift for i in range(len(self.nodes))]

    def slope_after(self, i: int) -> Fraction:
        k = self._right_piece[i]
        return self.f.piece_values[k] if k < len(self.f.piece_values) else Fraction(0)

    def __call__(self, t) -> Fraction:
        if not self.nodes:
            return Fraction(0)
        i = bisect.bisect_right(self.nodes, t) - 1
        if i < 0:
            return Fraction(0)  # zero left tail
        return self.values[i] + self.slope_after(i) * (t - self.nodes[i])

    def average(self, a, b) -> Fraction:
        return (self(b) - self(a)) / (b - a)


@dataclass(frozen=True)
class ArgmaxWitness:
    """Optimizing interval for the maximal function at ``x``.

    ``degenerate`` marks points where the lateral limit already attains the
    supremum (shrinking intervals); ``side`` names that limit.  ``interval``
    is the longest candidate interval attaining the same value, if any.
    """

    x: Fraction
    value: Fraction
    interval: Optional[tuple]
    degenerate: bool
    side: Optional[str]

    @property
    def length(self):
        if self.interval is None:
            return Fraction(0)
        return self.interval[1] - self.interval[0]


def _prepare(f: StepFunction, require_nonnegative: bool) -> StepFunction:
    if not isinstance(f, StepFunction):
        raise TypeError("the exact engine takes a StepFunction")
    if require_nonnegative and any(v < 0 for v in f.piece_values):
        raise NegativeValuesError("negative values present; pass |f|, f+ or f-")
    return canonical_representative(absolute_value(f)).simplified()


def _slope(p, q) -> Fraction:
    return (q[1] - p[1]) / (q[0] - p[0])


def _push(hull: list, pt) -> None:
    """Push ``pt`` (left of everything on the stack) keeping an upper hull."""
    while len(hull) >= 2 and _slope(pt, hull[-1]) <= _slope(hull[-1], hull[-2]):
        hull.pop()
    hull.append(pt)


def _tangent_segments(verts: list, v: Fraction, lo, hi) -> list:
    """Right-window profile on (lo, hi) for a piece of value ``v`` ending at verts[0].

    ``verts`` is the upper hull, ascending, starting at ``(q, F(q))``.
    """
    q, Fq = verts[0]
    sig = [None] + [_slope(verts[i - 1], verts[i]) for i in range(1, len(verts))]
    J = 0
    while J + 1 < len(verts) and sig[J + 1] > v:
        J += 1
    if J == 0:
        return [Segment(lo, hi, (v, Fraction(0), Fraction(1), Fraction(0)), ("right", q))]
    out = []
    x_prev = q
    for i in range(1, J + 1):
        w, Fw = verts[i]
        D = Fw - Fq - v * (w - q)
        x_i = w - D / (sig[i + 1] - v) if i < J else -INF
        a, b = max(x_i, lo), min(x_prev, hi)
        if a < b:
            out.append(Segment(a, b, (v * w + D, -v, w, Fraction(-1)), ("right", w)))
        if x_i <= lo:
            break
        x_prev = x_i
    out.reverse()
    return out


def _join_values(segs: list, right_continuous: bool) -> tuple:
    out = []
    for s, t in zip(segs, segs[1:]):
        lv, rv = s.right_value, t.left_value
        if lv != rv:
            out.append((s.hi, rv if right_continuous else lv))
    return tuple(out)


def _provenance(segs: list) -> str:
    return "algebraic" if any(isinstance(s.lo, QuadSurd) or isinstance(s.hi, QuadSurd) for s in segs) else "exact"


def _right_segments_global(f: StepFunction) -> list:
    F = Primitive(f)
    pieces = f.pieces()
    hull: list = []
    per_piece = []
    for p, q, v in reversed(pieces):
        if q == INF:
            per_piece.append([Segment(p, q, (v, Fraction(0), Fraction(1), Fraction(0)), ("right", None))])
            continue
        _push(hull, (q, F(q)))
        verts = hull[::-1]
        per_piece.append(_tangent_segments(verts, v, p, q))
    return concat_segments([s for segs in reversed(per_piece) for s in segs])


def _upper_hull(points: list) -> list:
    hull: list = []
    for pt in reversed(points):
        _push(hull, pt)
    return hull[::-1]


def _right_segments_local(f: StepFunction, R: Fraction) -> list:
    F = Primitive(f)
    nodes = F.nodes
    right_end = f.domain.right
    out = []
    for k, (p, q, v) in enumerate(f.pieces()):
        const = (v, Fraction(0), Fraction(1), Fraction(0))
        if q == INF:
            out.append(Segment(p, q, const, ("right", None)))
            continue
        qi = nodes.index(q)
        cuts = sorted({t - R for t in nodes[qi:] if p < t - R < q})
        bounds = [p, *cuts, q]
        for lo, hi in zip(bounds, bounds[1:]):
            reach = lo + R  # nodes up to here are admissible on (lo, hi)
            adm = [t for t in nodes[qi:] if t <= reach]
            if not adm:
                out.append(Segment(lo, hi, const, ("cap", R)))
                continue
            verts = _upper_hull([(t, F(t)) for t in adm])
            segs = _tangent_segments(verts, v, lo, hi)
            if right_end == INF or hi + R <= right_end:
                j = len(adm) - 1 + qi
                t2 = nodes[j]
                v2 = F.slope_after(j)
                a = F(t2) + v2 * (R - t2) - F(q) + v * q
                cap = Segment(lo, hi, (a, v2 - v, R, Fraction(0)), ("cap", R))
                segs = max_merge(segs, [cap])
            out.extend(segs)
    return concat_segments(out)


def _one_sided(f: StepFunction, direction: str, R: Optional[Fraction]) -> MaximalProfile:
    if direction == "right":
        segs = _right_segments_global(f) if R is None else _right_segments_local(f, R)
        joins = _join_values(segs, right_continuous=True)
        return MaximalProfile(f.domain, tuple(segs), _provenance(segs), "right", R, joins)
    if direction == "left":
        mirror = _one_sided(f.reflect(), "right", R)
        segs = [s.reflected() for s in reversed(mirror.segments)]
        joins = tuple((-t, val) for t, val in reversed(mirror.join_values))
        return MaximalProfile(f.domain, tuple(segs), mirror.provenance, "left", R, joins)
    raise ValueError(f"direction must be 'left' or 'right', not {direction!r}")


def one_sided_maximal(f: StepFunction, direction: str, R=None) -> MaximalProfile:
    """Supremum of averages over windows with ``x`` as fixed left/right endpoint.

    ``direction='right'`` uses windows ``[x, w]``; ``'left'`` uses ``[w, x]``.
    The right profile is right-continuous, the left one left-continuous.
    """
    g = _prepare(f, require_nonnegative=True)
    return _one_sided(g, direction, None if R is None else _check_radius(R))


def _check_radius(R) -> Fraction:
    R = to_fraction(R)
    if R <= 0:
        raise ValueError("R must be positive")
    return R


def _two_sided(g: StepFunction, R: Optional[Fraction]) -> MaximalProfile:
    left = _one_sided(g, "left", R)
    right = _one_sided(g, "right", R)
    segs = max_merge(list(left.segments), list(right.segments))
    prov = "algebraic" if "algebraic" in (left.provenance, right.provenance) else _provenance(segs)
    return MaximalProfile(g.domain, tuple(segs), prov, "two-sided", R)


def maximal(f: StepFunction) -> MaximalProfile:
    """Exact profile of Mf (computed for |f|)."""
    return _two_sided(_prepare(f, require_nonnegative=False), None)


def local_maximal(f: StepFunction, R) -> MaximalProfile:
    """Exact profile of M_R f: windows of length at most ``R``."""
    R = _check_radius(R)
    return _two_sided(_prepare(f, require_nonnegative=False), R)


# ---------------------------------------------------------------------------
# brute-force pointwise oracle, independent of the one-sided split


def _endpoint_candidates(f: StepFunction, x, R) -> tuple:
    nodes = f.nodes
    lefts = set(nodes) | {x}
    rights = set(nodes) | {x}
    if R is not None:
        lefts |= {x - R} | {t - R for t in nodes}
        rights |= {x + R} | {t + R for t in nodes}
    dom = f.domain
    lefts = sorted(a for a in lefts if dom.left <= a <= x)
    rights = sorted(b for b in rights if x <= b <= dom.right)
    return lefts, rights


def _candidate_intervals(f: StepFunction, x, R):
    F = Primitive(f)
    lefts, rights = _endpoint_candidates(f, x, R)
    for a in lefts:
        for b in rights:
            if b > a and (R is None or b - a <= R):
                yield a, b, F.average(a, b)


def maximal_at(f: StepFunction, x, R=None) -> Fraction:
    """Mf(x) (or M_R f(x)) by enumerating every candidate window."""
    x = to_fraction(x)
    g = _prepare(f, require_nonnegative=False)
    if not g.domain.contains(x):
        raise ValueError(f"{x} outside domain {g.domain}")
    R = None if R is None else _check_radius(R)
    best = g.canonical_value(x)
    for _, _, avg in _candidate_intervals(g, x, R):
        if avg > best:
            best = avg
    return best


def argmax_witness(f: StepFunction, x, R=None) -> ArgmaxWitness:
    """Optimal window at ``x`` among the finite candidate set."""
    x = to_fraction(x)
    g = _prepare(f, require_nonnegative=False)
    if not g.domain.contains(x):
        raise ValueError(f"{x} outside domain {g.domain}")
    R = None if R is None else _check_radius(R)
    best, best_iv = None, None
    for a, b, avg in _candidate_intervals(g, x, R):
        key = (avg, b - a, -a)
        if best is None or key > best:
            best, best_iv = key, (a, b)
    lateral = g.canonical_value(x)
    if best is None or lateral >= best[0]:
        side = "right" if g.right_limit(x) >= g.left_limit(x) else "left"
        iv = best_iv if best is not None and best[0] == lateral else None
        return ArgmaxWitness(x, lateral, iv, True, side)
    return ArgmaxWitness(x, best[0], best_iv, False, None)
