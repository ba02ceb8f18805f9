"""Float maximal functions of piecewise-linear inputs.

For a right window ``[x, b]`` the average is maximized at a knot, at the
domain end, in the shrinking limit ``g(x+)``, or at an interior critical
point of a linear piece where ``g(b) * (b - x) = G(b) - G(x)``.  On a piece
of slope ``beta`` starting at ``t`` that condition reads
``(b - x)**2 = (t - x)**2 - 2 * h(t) / beta`` with
``h(t) = g(t+) * (t - x) - (G(t) - G(x))``.  Roots get one Newton step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import INF
from .funcspace import PiecewiseLinearFunction, absolute_value
from .profile import MaximalProfile, Segment

__all__ = ["maximal_pwl", "pwl_maximal_values", "pwl_derivative_sup", "PwlEvaluation"]


@dataclass(frozen=True)
class PwlEvaluation:
    """Maximal values on a grid with envelope derivatives of the optimal branch."""

    x: np.ndarray
    value: np.ndarray
    derivative: np.ndarray  # nan where the shrinking limit wins strictly


class _FloatPwl:
    def __init__(self, f: PiecewiseLinearFunction):
        self.t = np.array([float(k) for k in f.knots])
        self.gl = np.array([float(a) for a, _ in f.knot_values])
        self.gr = np.array([float(b) for _, b in f.knot_values])
        self.left_inf = f.domain.left == -INF
        self.right_inf = f.domain.right == INF
        self.tail_left = float(f.left_tail)
        self.tail_right = float(f.right_tail)
        h = np.diff(self.t)
        self.y0 = self.gr[:-1]
        self.y1 = self.gl[1:]
        self.beta = (self.y1 - self.y0) / h if len(h) else np.zeros(0)
        G = np.zeros(len(self.t))
        if len(h):
            G[1:] = np.cumsum((self.y0 + self.y1) / 2 * h)
        self.G = G

    def _piece_value(self, k: np.ndarray, x: np.ndarray) -> np.ndarray:
        """Value of piece ``k`` at ``x``; k = -1 and k = len(t) - 1 are the tails."""
        last = len(self.t) - 1
        inner = (k >= 0) & (k < last)
        kk = np.where(inner, k, 0)
        if last > 0:
            lin = self.y0[kk] + self.beta[kk] * (x - self.t[kk])
        else:
            lin = np.zeros_like(x)
        return np.where(inner, lin, np.where(k < 0, self.tail_left, self.tail_right))

    def integral(self, x: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Integral over [x, b] for x <= b, summed piece-locally.

        Short windows never difference the global primitive, so their
        averages keep full relative precision.
        """
        t, G = self.t, self.G
        kx = np.searchsorted(t, x, side="right") - 1
        kb = np.searchsorted(t, b, side="right") - 1
        same = kx == kb
        whole = (b - x) * self._piece_value(kx, (x + b) / 2)
        nxt = np.clip(kx + 1, 0, len(t) - 1)
        kbc = np.clip(kb, 0, len(t) - 1)
        head = (t[nxt] - x) * self._piece_value(kx, (x + t[nxt]) / 2)
        tail = (b - t[kbc]) * self._piece_value(kb, (t[kbc] + b) / 2)
        return np.where(same, whole, head + (G[kbc] - G[nxt]) + tail)

    def right_value(self, x: np.ndarray) -> np.ndarray:
        """g(x+)."""
        t = self.t
        k = np.searchsorted(t, x, side="right") - 1
        out = np.empty_like(x)
        below = k < 0
        above = k >= len(t) - 1
        inside = ~(below | above)
        kk = k[inside]
        out[inside] = self.y0[kk] + self.beta[kk] * (x[inside] - t[kk])
        out[below] = self.tail_left
        out[above] = self.tail_right
        # exactly at the last knot use its right value
        at_last = x == t[-1]
        out[at_last] = self.tail_right if self.right_inf else self.gl[-1]
        return out


def _right_side(fp: _FloatPwl, x: np.ndarray, R=None):
    """sup over right windows, the optimizing endpoint and envelope slope.

    With ``R`` the windows are capped at length ``R`` and the cap end
    ``x + R`` joins the candidates.
    """
    gx = fp.right_value(x)
    best = gx.copy()
    best_b = np.full_like(x, np.nan)
    t = fp.t

    def consider(b, mask, is_cap=False):
        with np.errstate(divide="ignore", invalid="ignore"):
            bb = np.where(mask, b, x + 1.0)
            avg = fp.integral(x, bb) / (bb - x)
        if R is not None and not is_cap:
            mask = mask & (b - x <= R)
        upd = mask & (avg > best)
        best[upd] = avg[upd]
        best_b[upd] = b[upd]

    for j in range(len(t)):
        b = np.full_like(x, t[j])
        consider(b, t[j] > x)
    for k in range(len(t) - 1):
        beta = fp.beta[k]
        if beta == 0:
            continue
        tk, tk1 = t[k], t[k + 1]
        ok = x < tk
        hk = fp.y0[k] * (tk - x) - fp.integral(np.where(ok, x, tk), np.full_like(x, tk))
        disc = (tk - x) ** 2 - 2 * hk / beta
        ok &= disc >= 0
        b = x + np.sqrt(np.where(ok, disc, 0.0))
        # one Newton step on h(b) = g(b)(b - x) - integral over [x, b]
        gb = fp.y0[k] + beta * (b - tk)
        hb = gb * (b - x) - fp.integral(np.where(ok, x, b), b)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(ok & (b > x), hb / (beta * (b - x)), 0.0)
        b = b - np.nan_to_num(step)
        consider(b, ok & (b > tk) & (b < tk1))
    if R is not None:
        cap = x + R
        consider(cap, fp.right_inf | (cap <= t[-1]), is_cap=True)
    elif fp.right_inf:
        lim = np.full_like(x, fp.tail_right)
        upd = lim > best
        best[upd] = lim[upd]
        best_b[upd] = np.inf
    with np.errstate(divide="ignore", invalid="ignore"):
        deriv = np.where(np.isfinite(best_b), (best - gx) / (best_b - x), np.nan)
    deriv[np.isinf(best_b)] = 0.0
    return best, deriv


def pwl_maximal_values(f: PiecewiseLinearFunction, xs, R=None) -> PwlEvaluation:
    """Mf (or M_R f) at float points, with the derivative of the optimal branch.

    The envelope derivative ignores the cap's own motion, so with ``R`` it
    is only indicative; capped callers use grid chords instead.
    """
    g = absolute_value(f)
    xs = np.asarray(xs, dtype=float)
    R = None if R is None else float(R)
    r_val, r_der = _right_side(_FloatPwl(g), xs, R)
    l_val, l_der = _right_side(_FloatPwl(g.reflect()), -xs, R)
    l_der = -l_der
    value = np.maximum(l_val, r_val)
    deriv = np.where(l_val >= r_val, l_der, r_der)
    return PwlEvaluation(xs, value, deriv)


def _grid(f: PiecewiseLinearFunction, resolution: int) -> np.ndarray:
    knots = np.array([float(k) for k in f.knots])
    lo, hi = knots[0], knots[-1]
    span = max(hi - lo, 1.0)
    if f.domain.left == -INF:
        lo -= 2 * span
    if f.domain.right == INF:
        hi += 2 * span
    return np.unique(np.concatenate([knots, np.linspace(lo, hi, resolution)]))


def maximal_pwl(f: PiecewiseLinearFunction, mode: str = "float", resolution: int = 2049) -> MaximalProfile:
    """Float-precision profile of Mf: chords through exact-formula grid values.

    Beyond the grid on an infinite domain the profile continues as
    ``A / (x - a)`` fitted to the last two grid values.
    """
    if mode != "float":
        raise ValueError("piecewise-linear input is only supported in float mode")
    if not isinstance(f, PiecewiseLinearFunction):
        raise TypeError("maximal_pwl takes a PiecewiseLinearFunction")
    xs = _grid(f, resolution)
    ev = pwl_maximal_values(f, xs)
    vals = ev.value
    segs = []
    if f.domain.left == -INF:
        segs.append(_tail_segment(-INF, xs[0], xs[0], vals[0], xs[1], vals[1]))
    for i in range(len(xs) - 1):
        slope = (vals[i + 1] - vals[i]) / (xs[i + 1] - xs[i])
        segs.append(Segment(float(xs[i]), float(xs[i + 1]), (float(vals[i] - slope * xs[i]), float(slope), 1.0, 0.0), ("grid", None)))
    if f.domain.right == INF:
        segs.append(_tail_segment(xs[-1], INF, xs[-1], vals[-1], xs[-2], vals[-2]))
    return MaximalProfile(f.domain, tuple(segs), "float", "two-sided", None)


def _tail_segment(lo, hi, x0, v0, x1, v1) -> Segment:
    """A / (x - a) through (x0, v0) and (x1, v1); constant if degenerate."""
    if v0 > 0 and v1 > 0 and v0 != v1:
        a = (v0 * x0 - v1 * x1) / (v0 - v1)
        A = v0 * (x0 - a)
        if (lo == -INF and a > x0) or (hi == INF and a < x0):
            return Segment(float(lo), float(hi), (float(A), 0.0, float(-a), 1.0), ("grid", None))
    return Segment(float(lo), float(hi), (float(v0), 0.0, 1.0, 0.0), ("grid", None))


def pwl_derivative_sup(f: PiecewiseLinearFunction, resolution: int = 4097) -> float:
    """Grid estimate of sup |DMf|: max of chord slopes and envelope derivatives.

    Every term is a genuine (one-sided) derivative or difference quotient of
    Mf, so the estimate never exceeds the true supremum beyond rounding.
    """
    xs = _grid(f, resolution)
    ev = pwl_maximal_values(f, xs)
    chords = np.abs(np.diff(ev.value) / np.diff(xs))
    env = np.abs(ev.derivative[np.isfinite(ev.derivative)])
    best = 0.0
    if chords.size:
        best = max(best, float(chords.max()))
    if env.size:
        best = max(best, float(env.max()))
    return best if math.isfinite(best) else 0.0
