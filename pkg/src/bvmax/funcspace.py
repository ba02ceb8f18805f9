"""Exact one-dimensional piecewise functions and their variation functionals.

Two function classes are supported:

* :class:`StepFunction` -- piecewise constant with rational breakpoints.
* :class:`PiecewiseLinearFunction` -- piecewise linear, jumps allowed at knots.

All arithmetic is in :class:`fractions.Fraction`.  Point values at
breakpoints default to the canonical (upper semicontinuous) choice, the
larger of the two lateral limits.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

from .arith import INF, format_rational, parse_extended, to_fraction

__all__ = [
    "Interval",
    "StepFunction",
    "PiecewiseLinearFunction",
    "DerivativeMeasure",
    "FunctionSchemaError",
    "canonical_representative",
    "total_variation",
    "derivative_measure",
    "positive_part",
    "negative_part",
    "absolute_value",
    "extend_by_zero",
    "sup_norm",
    "l1_norm",
    "l2_norm_squared",
    "lipschitz_constant",
    "function_to_dict",
    "function_from_dict",
    "load_function",
    "dump_function",
]


class FunctionSchemaError(ValueError):
    """Raised for malformed function JSON or violated type invariants."""


@dataclass(frozen=True)
class Interval:
    """A nondegenerate interval with rational or infinite endpoints."""

    left: Union[Fraction, float]
    right: Union[Fraction, float]

    def __post_init__(self):
        left = parse_extended(self.left)
        right = parse_extended(self.right)
        if left == INF or right == -INF:
            raise ValueError("interval endpoints out of order")
        if not left < right:
            raise ValueError(f"degenerate interval [{left}, {right}]")
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    @classmethod
    def real_line(cls) -> "Interval":
        return cls(-INF, INF)

    @property
    def is_bounded(self) -> bool:
        return self.left != -INF and self.right != INF

    @property
    def length(self):
        if not self.is_bounded:
            return INF
        return self.right - self.left

    def contains(self, x) -> bool:
        return self.left <= x <= self.right

    def contains_interval(self, other: "Interval") -> bool:
        return self.left <= other.left and other.right <= self.right

    def reflect(self) -> "Interval":
        return Interval(-self.right, -self.left)

    def __str__(self):
        return f"[{format_rational(self.left)}, {format_rational(self.right)}]"


def _fractions(values) -> tuple:
    return tuple(to_fraction(v) for v in values)


@dataclass(frozen=True)
class StepFunction:
    """Piecewise constant function.

    ``piece_values[k]`` holds on the open piece between ``breakpoints[k-1]``
    and ``breakpoints[k]`` (domain endpoints closing off the two ends).
    ``point_values`` is either ``None`` or a tuple aligned with
    ``breakpoints`` whose ``None`` entries mean "canonical".
    """

    domain: Interval
    breakpoints: tuple
    piece_values: tuple
    point_values: Optional[tuple] = None

    def __post_init__(self):
        bps = _fractions(self.breakpoints)
        vals = _fractions(self.piece_values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "piece_values", vals)
        if len(vals) != len(bps) + 1:
            raise FunctionSchemaError("need exactly one piece value per piece")
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise FunctionSchemaError("breakpoints must be strictly increasing")
        for t in bps:
            if not self.domain.left < t < self.domain.right:
                raise FunctionSchemaError(f"breakpoint {t} not interior to {self.domain}")
        if self.domain.left == -INF and vals[0] != 0:
            raise FunctionSchemaError("infinite left end requires zero boundary piece")
        if self.domain.right == INF and vals[-1] != 0:
            raise FunctionSchemaError("infinite right end requires zero boundary piece")
        if self.point_values is not None:
            pv = tuple(None if v is None else to_fraction(v) for v in self.point_values)
            if len(pv) != len(bps):
                raise FunctionSchemaError("point_values must align with breakpoints")
            if all(v is None for v in pv):
                pv = None
            object.__setattr__(self, "point_values", pv)

    # construction helpers ------------------------------------------------
    @classmethod
    def constant(cls, value, domain: Interval) -> "StepFunction":
        return cls(domain, (), (to_fraction(value),))

    # structure -----------------------------------------------------------
    @property
    def nodes(self) -> list:
        """Finite domain endpoints together with the breakpoints, sorted."""
        out = []
        if self.domain.left != -INF:
            out.append(self.domain.left)
        out.extend(self.breakpoints)
        if self.domain.right != INF:
            out.append(self.domain.right)
        return out

    def pieces(self) -> list:
        """List of ``(lo, hi, value)`` for the open pieces, left to right."""
        ends = [self.domain.left, *self.breakpoints, self.domain.right]
        return [(ends[k], ends[k + 1], self.piece_values[k]) for k in range(len(self.piece_values))]

    def limits_at(self, k: int) -> tuple:
        return self.piece_values[k], self.piece_values[k + 1]

    def point_value(self, k: int) -> Fraction:
        """Value at breakpoint ``k`` (declared, else canonical)."""
        if self.point_values is not None and self.point_values[k] is not None:
            return self.point_values[k]
        return max(self.piece_values[k], self.piece_values[k + 1])

    def _locate(self, x):
        """Return ('piece', k) or ('break', k) for x in the domain."""
        if not self.domain.contains(x):
            raise ValueError(f"{x} outside domain {self.domain}")
        lo, hi = 0, len(self.breakpoints)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.breakpoints[mid] < x:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(self.breakpoints) and self.breakpoints[lo] == x:
            return "break", lo
        return "piece", lo

    def __call__(self, x) -> Fraction:
        kind, k = self._locate(x)
        if kind == "break":
            return self.point_value(k)
        return self.piece_values[k]

    def left_limit(self, x) -> Fraction:
        kind, k = self._locate(x)
        if x == self.domain.left:
            return self.piece_values[0]
        return self.piece_values[k]

    def right_limit(self, x) -> Fraction:
        kind, k = self._locate(x)
        if x == self.domain.right:
            return self.piece_values[-1]
        return self.piece_values[k + 1] if kind == "break" else self.piece_values[k]

    def canonical_value(self, x) -> Fraction:
        return max(self.left_limit(x), self.right_limit(x))

    def map_values(self, fn) -> "StepFunction":
        pv = None
        if self.point_values is not None:
            pv = tuple(None if v is None else fn(v) for v in self.point_values)
        return StepFunction(self.domain, self.breakpoints, tuple(fn(v) for v in self.piece_values), pv)

    def scale(self, c) -> "StepFunction":
        c = to_fraction(c)
        return self.map_values(lambda v: c * v)

    def translate(self, h) -> "StepFunction":
        h = to_fraction(h)
        dom = Interval(self.domain.left + h, self.domain.right + h)
        return StepFunction(dom, tuple(t + h for t in self.breakpoints), self.piece_values, self.point_values)

    def reflect(self) -> "StepFunction":
        """x -> -x."""
        pv = None if self.point_values is None else tuple(reversed(self.point_values))
        return StepFunction(
            self.domain.reflect(),
            tuple(-t for t in reversed(self.breakpoints)),
            tuple(reversed(self.piece_values)),
            pv,
        )

    def simplified(self) -> "StepFunction":
        """Drop breakpoints where the function is continuous with canonical value."""
        bps, vals, pvs = [], [self.piece_values[0]], []
        for k, t in enumerate(self.breakpoints):
            declared = None if self.point_values is None else self.point_values[k]
            nxt = self.piece_values[k + 1]
            if nxt == vals[-1] and (declared is None or declared == nxt):
                continue
            bps.append(t)
            vals.append(nxt)
            pvs.append(declared)
        return StepFunction(self.domain, tuple(bps), tuple(vals), tuple(pvs) if pvs else None)

    def primitive_at_nodes(self) -> list:
        """Cumulative integral at :attr:`nodes`, starting from 0 at the first node."""
        nodes = self.nodes
        if not nodes:
            return []
        out = [Fraction(0)]
        # with a finite left end, node i closes piece i - 1; otherwise piece i
        offset = 0 if self.domain.left == -INF else 1
        for i in range(1, len(nodes)):
            k = i - offset
            out.append(out[-1] + self.piece_values[k] * (nodes[i] - nodes[i - 1]))
        return out


@dataclass(frozen=True)
class PiecewiseLinearFunction:
    """Piecewise linear function, linear between consecutive knots.

    ``knot_values[i] = (left_value, right_value)`` at ``knots[i]``; a jump
    when they differ.  Finite domain endpoints must be knots.  Beyond the
    outermost knot of an infinite domain the function is constant.
    """

    domain: Interval
    knots: tuple
    knot_values: tuple

    def __post_init__(self):
        knots = _fractions(self.knots)
        vals = tuple((to_fraction(a), to_fraction(b)) for a, b in self.knot_values)
        object.__setattr__(self, "knots", knots)
        if len(knots) < 2 and self.domain.is_bounded:
            raise FunctionSchemaError("need at least two knots on a bounded domain")
        if len(vals) != len(knots):
            raise FunctionSchemaError("knot_values must align with knots")
        for a, b in zip(knots, knots[1:]):
            if not a < b:
                raise FunctionSchemaError("knots must be strictly increasing")
        if not knots:
            raise FunctionSchemaError("need at least one knot")
        if self.domain.left != -INF and knots[0] != self.domain.left:
            raise FunctionSchemaError("finite left endpoint must be the first knot")
        if self.domain.right != INF and knots[-1] != self.domain.right:
            raise FunctionSchemaError("finite right endpoint must be the last knot")
        for t in knots:
            if not self.domain.contains(t):
                raise FunctionSchemaError(f"knot {t} outside domain")
        vals = list(vals)
        # the one-sided value outside a finite domain is meaningless; mirror it
        if self.domain.left != -INF:
            vals[0] = (vals[0][1], vals[0][1])
        if self.domain.right != INF:
            vals[-1] = (vals[-1][0], vals[-1][0])
        object.__setattr__(self, "knot_values", tuple(vals))

    @classmethod
    def continuous(cls, domain: Interval, knots, values) -> "PiecewiseLinearFunction":
        return cls(domain, tuple(knots), tuple((v, v) for v in values))

    @property
    def left_tail(self) -> Fraction:
        return self.knot_values[0][0]

    @property
    def right_tail(self) -> Fraction:
        return self.knot_values[-1][1]

    def segments(self) -> list:
        """``(x0, x1, y0, y1)`` for each finite linear piece."""
        out = []
        for i in range(len(self.knots) - 1):
            out.append((self.knots[i], self.knots[i + 1], self.knot_values[i][1], self.knot_values[i + 1][0]))
        return out

    def slopes(self) -> list:
        return [(y1 - y0) / (x1 - x0) for x0, x1, y0, y1 in self.segments()]

    @property
    def has_jumps(self) -> bool:
        return any(a != b for a, b in self.knot_values)

    def __call__(self, x) -> Fraction:
        if not self.domain.contains(x):
            raise ValueError(f"{x} outside domain {self.domain}")
        if x <= self.knots[0]:
            if x == self.knots[0]:
                return max(self.knot_values[0])
            return self.left_tail
        if x >= self.knots[-1]:
            if x == self.knots[-1]:
                return max(self.knot_values[-1])
            return self.right_tail
        for i, (x0, x1, y0, y1) in enumerate(self.segments()):
            if x == x0:
                return max(self.knot_values[i])
            if x0 < x < x1:
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        raise AssertionError("unreachable")

    def reflect(self) -> "PiecewiseLinearFunction":
        return PiecewiseLinearFunction(
            self.domain.reflect(),
            tuple(-t for t in reversed(self.knots)),
            tuple((b, a) for a, b in reversed(self.knot_values)),
        )

    def translate(self, h) -> "PiecewiseLinearFunction":
        h = to_fraction(h)
        return PiecewiseLinearFunction(
            Interval(self.domain.left + h, self.domain.right + h), tuple(t + h for t in self.knots), self.knot_values
        )

    def map_values(self, fn) -> "PiecewiseLinearFunction":
        return PiecewiseLinearFunction(self.domain, self.knots, tuple((fn(a), fn(b)) for a, b in self.knot_values))

    def split_at_zeros(self) -> "PiecewiseLinearFunction":
        """Insert knots where a linear piece crosses zero (exact)."""
        knots = [self.knots[0]]
        vals = [self.knot_values[0]]
        for i, (x0, x1, y0, y1) in enumerate(self.segments()):
            if (y0 < 0 < y1) or (y1 < 0 < y0):
                z = x0 + (x1 - x0) * (-y0) / (y1 - y0)
                knots.append(z)
                vals.append((Fraction(0), Fraction(0)))
            knots.append(x1)
            vals.append(self.knot_values[i + 1])
        return PiecewiseLinearFunction(self.domain, tuple(knots), tuple(vals))


Function = Union[StepFunction, PiecewiseLinearFunction]


@dataclass(frozen=True)
class DerivativeMeasure:
    """Jump part plus absolutely continuous density of a distributional derivative."""

    jump_part: tuple
    density_part: StepFunction
    total_variation_mass: Fraction = field(default=Fraction(0))


# ---------------------------------------------------------------------------
# operations


def canonical_representative(f: Function) -> Function:
    """Point values replaced by the maximum of the lateral limits."""
    if isinstance(f, StepFunction):
        return StepFunction(f.domain, f.breakpoints, f.piece_values, None)
    return f  # knot point values are always canonical for this class


def total_variation(f: Function) -> Fraction:
    """Exact supremum of V(f, P) over partitions of the domain."""
    if isinstance(f, StepFunction):
        total = Fraction(0)
        for k in range(len(f.breakpoints)):
            left, right = f.limits_at(k)
            p = f.point_value(k)
            total += abs(left - p) + abs(p - right)
        return total
    total = Fraction(0)
    for a, b in f.knot_values:
        p = max(a, b)
        total += abs(a - p) + abs(p - b)
    for x0, x1, y0, y1 in f.segments():
        total += abs(y1 - y0)
    return total


def derivative_measure(f: Function) -> DerivativeMeasure:
    if isinstance(f, StepFunction):
        jumps = tuple((t, f.piece_values[k + 1] - f.piece_values[k]) for k, t in enumerate(f.breakpoints)
                      if f.piece_values[k + 1] != f.piece_values[k])
        density = StepFunction.constant(0, f.domain)
        mass = sum((abs(h) for _, h in jumps), Fraction(0))
        return DerivativeMeasure(jumps, density, mass)
    jumps = tuple((t, b - a) for t, (a, b) in zip(f.knots, f.knot_values) if a != b)
    slopes = f.slopes()
    interior = f.knots[1:-1] if f.domain.is_bounded else f.knots
    if f.domain.left == -INF and f.domain.right == INF:
        values = (Fraction(0), *slopes, Fraction(0))
    elif f.domain.left == -INF:
        values = (Fraction(0), *slopes)
        interior = f.knots[:-1]
    elif f.domain.right == INF:
        values = (*slopes, Fraction(0))
        interior = f.knots[1:]
    else:
        values = tuple(slopes)
    density = StepFunction(f.domain, tuple(interior), values)
    mass = sum((abs(h) for _, h in jumps), Fraction(0))
    mass += sum((abs(s) * (x1 - x0) for s, (x0, x1, _, _) in zip(slopes, f.segments())), Fraction(0))
    return DerivativeMeasure(jumps, density.simplified(), mass)


def positive_part(f: Function) -> Function:
    if isinstance(f, PiecewiseLinearFunction):
        f = f.split_at_zeros()
    return f.map_values(lambda v: max(v, Fraction(0)))


def negative_part(f: Function) -> Function:
    if isinstance(f, PiecewiseLinearFunction):
        f = f.split_at_zeros()
    return f.map_values(lambda v: max(-v, Fraction(0)))


def absolute_value(f: Function) -> Function:
    if isinstance(f, PiecewiseLinearFunction):
        f = f.split_at_zeros()
    return f.map_values(abs)


def extend_by_zero(f: Function, to: Interval) -> Function:
    """Extend ``f`` by zero from its domain to the larger interval ``to``."""
    if not to.contains_interval(f.domain):
        raise ValueError(f"target {to} does not contain {f.domain}")
    left_new = to.left < f.domain.left
    right_new = f.domain.right < to.right
    if isinstance(f, StepFunction):
        bps = list(f.breakpoints)
        vals = list(f.piece_values)
        pvs = list(f.point_values) if f.point_values is not None else [None] * len(bps)
        if left_new:
            bps.insert(0, f.domain.left)
            vals.insert(0, Fraction(0))
            pvs.insert(0, None)
        if right_new:
            bps.append(f.domain.right)
            vals.append(Fraction(0))
            pvs.append(None)
        return StepFunction(to, tuple(bps), tuple(vals), tuple(pvs))
    knots = list(f.knots)
    vals = [list(v) for v in f.knot_values]
    if left_new:
        vals[0][0] = Fraction(0)
        if to.left != -INF:
            knots.insert(0, to.left)
            vals.insert(0, [Fraction(0), Fraction(0)])
    if right_new:
        vals[-1][1] = Fraction(0)
        if to.right != INF:
            knots.append(to.right)
            vals.append([Fraction(0), Fraction(0)])
    return PiecewiseLinearFunction(to, tuple(knots), tuple(tuple(v) for v in vals))


def sup_norm(f: Function) -> Fraction:
    if isinstance(f, StepFunction):
        vals = [abs(v) for v in f.piece_values]
        if f.point_values is not None:
            vals.extend(abs(v) for v in f.point_values if v is not None)
        return max(vals)
    return max(max(abs(a), abs(b)) for a, b in f.knot_values)


def _abs_linear_integral(h, y0, y1) -> Fraction:
    if (y0 >= 0 and y1 >= 0) or (y0 <= 0 and y1 <= 0):
        return abs(y0 + y1) * h / 2
    return (y0 * y0 + y1 * y1) * h / (2 * (abs(y0) + abs(y1)))


def l1_norm(f: Function) -> Fraction:
    if isinstance(f, StepFunction):
        total = Fraction(0)
        for lo, hi, v in f.pieces():
            if v != 0:
                total += abs(v) * (hi - lo)
        return total
    if (f.domain.left == -INF and f.left_tail != 0) or (f.domain.right == INF and f.right_tail != 0):
        return INF
    return sum((_abs_linear_integral(x1 - x0, y0, y1) for x0, x1, y0, y1 in f.segments()), Fraction(0))


def l2_norm_squared(f: Function) -> Fraction:
    """Exact integral of f**2."""
    if isinstance(f, StepFunction):
        return sum((v * v * (hi - lo) for lo, hi, v in f.pieces() if v != 0), Fraction(0))
    if (f.domain.left == -INF and f.left_tail != 0) or (f.domain.right == INF and f.right_tail != 0):
        return INF
    return sum(((x1 - x0) * (y0 * y0 + y0 * y1 + y1 * y1) / 3 for x0, x1, y0, y1 in f.segments()), Fraction(0))


def lipschitz_constant(f: PiecewiseLinearFunction) -> Fraction:
    if not isinstance(f, PiecewiseLinearFunction):
        raise TypeError("Lipschitz constant is defined here for piecewise-linear input")
    if f.has_jumps:
        raise ValueError("function has jumps; it is not Lipschitz")
    slopes = f.slopes()
    return max((abs(s) for s in slopes), default=Fraction(0))


# ---------------------------------------------------------------------------
# JSON schema: rationals as "p/q" strings, infinities as "-inf"/"inf"


def function_to_dict(f: Function) -> dict:
    dom = [format_rational(f.domain.left), format_rational(f.domain.right)]
    if isinstance(f, StepFunction):
        out = {
            "kind": "step",
            "domain": dom,
            "breakpoints": [format_rational(t) for t in f.breakpoints],
            "piece_values": [format_rational(v) for v in f.piece_values],
        }
        if f.point_values is not None:
            out["point_values"] = [None if v is None else format_rational(v) for v in f.point_values]
        return out
    return {
        "kind": "pwl",
        "domain": dom,
        "knots": [format_rational(t) for t in f.knots],
        "knot_values": [[format_rational(a), format_rational(b)] for a, b in f.knot_values],
    }


def function_from_dict(data: dict) -> Function:
    try:
        kind = data["kind"]
        domain = Interval(*data["domain"])
        if kind == "step":
            return StepFunction(
                domain,
                tuple(data.get("breakpoints", [])),
                tuple(data["piece_values"]),
                tuple(data["point_values"]) if data.get("point_values") is not None else None,
            )
        if kind == "pwl":
            return PiecewiseLinearFunction(domain, tuple(data["knots"]), tuple(tuple(v) for v in data["knot_values"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise FunctionSchemaError(f"malformed function description: {exc}") from exc
    raise FunctionSchemaError(f"unknown function kind {data.get('kind')!r}")


def load_function(path) -> Function:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FunctionSchemaError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise FunctionSchemaError("top-level JSON value must be an object")
    return function_from_dict(data)


def dump_function(f: Function, path) -> None:
    Path(path).write_text(json.dumps(function_to_dict(f), indent=2) + "\n")
