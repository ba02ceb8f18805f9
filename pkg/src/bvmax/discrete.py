"""Discrete maximal averages on uniformly sampled signals.

Windows are runs of consecutive samples; the value at ``i`` is the largest
mean of ``|s|`` over a run containing ``i``.  Means are differences of
compensated prefix sums, and the oracle shares that exact formula so the
two paths round identically.
"""

from __future__ import annotations

import csv
import math
import struct
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import _kernels
from .arith import to_fraction
from .funcspace import Interval, StepFunction
from .profile import MaximalProfile

__all__ = [
    "SampledSignal",
    "KernelStats",
    "discrete_maximal",
    "discrete_maximal_stats",
    "discrete_local_maximal",
    "brute_force_maximal",
    "sample_step",
    "sample_profile",
    "read_csv",
    "write_csv",
    "read_binary",
    "write_binary",
    "warm_up",
]


@dataclass(frozen=True)
class SampledSignal:
    """Float samples at ``origin + (k + 1/2) * spacing`` (cell midpoints)."""

    samples: np.ndarray
    spacing: float = 1.0
    origin: float = 0.0

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.samples, dtype=np.float64))
        if arr.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ValueError("samples must be finite")
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise ValueError("spacing must be positive")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self) -> int:
        return self.samples.shape[0]

    @property
    def positions(self) -> np.ndarray:
        return self.origin + (np.arange(len(self)) + 0.5) * self.spacing

    def with_samples(self, samples) -> "SampledSignal":
        return SampledSignal(samples, self.spacing, self.origin)


@dataclass(frozen=True)
class KernelStats:
    """Operation counters of one kernel run.

    ``hull_ops`` counts pushes and pops while building the two hulls;
    ``replay_ops`` counts restoring the suffix hull from its pop log;
    ``bridge_steps`` counts alternating tangent rounds.
    """

    n: int
    hull_ops: int
    replay_ops: int
    bridge_steps: int


def _nonempty(s: SampledSignal) -> np.ndarray:
    if len(s) == 0:
        raise ValueError("empty signal")
    return s.samples


def discrete_maximal_stats(s: SampledSignal) -> tuple:
    out, hull, replay, steps = _kernels.maximal_kernel(_nonempty(s))
    return s.with_samples(out), KernelStats(len(s), int(hull), int(replay), int(steps))


def discrete_maximal(s: SampledSignal) -> SampledSignal:
    """Largest mean of |s| over index windows containing each sample."""
    return discrete_maximal_stats(s)[0]


def discrete_local_maximal(s: SampledSignal, W: int) -> SampledSignal:
    """As :func:`discrete_maximal` with windows of at most ``W`` samples.

    Sliding maxima per window length, O(n * W); W >= n delegates to the
    unconstrained kernel.
    """
    x = _nonempty(s)
    if int(W) != W or W < 1:
        raise ValueError("W must be a positive integer")
    if W >= len(x):
        return discrete_maximal(s)
    return s.with_samples(_kernels.local_kernel(x, int(W)))


def brute_force_maximal(s: SampledSignal, W: Optional[int] = None) -> SampledSignal:
    """O(n^2) enumeration of every window (the definition)."""
    x = _nonempty(s)
    W = len(x) if W is None else int(W)
    if W < 1:
        raise ValueError("W must be a positive integer")
    return s.with_samples(_kernels.brute_kernel(x, W))


def warm_up() -> None:
    """Compile the kernels (cached on disk after the first run)."""
    s = SampledSignal(np.array([1.0, 0.0, 2.0]))  # read-only, as in real use
    discrete_maximal(s)
    _kernels.local_kernel(s.samples, 2)
    brute_force_maximal(s)


# ---------------------------------------------------------------------------
# bridges to the exact world


def _window(domain: Interval, window) -> tuple:
    if window is not None:
        lo, hi = (to_fraction(w) for w in window)
    else:
        if not domain.is_bounded:
            raise ValueError("infinite domain needs an explicit truncation window")
        lo, hi = domain.left, domain.right
    if not lo < hi:
        raise ValueError("empty sampling window")
    return lo, hi


def sample_step(f: StepFunction, n: int, window=None) -> SampledSignal:
    """Midpoint samples of ``f`` on ``n`` equal cells (exact cell lookup)."""
    if n < 2:
        raise ValueError("need n >= 2")
    lo, hi = _window(f.domain, window)
    h = (hi - lo) / n
    out = np.empty(n)
    # midpoint k sits at lo + (k + 1/2) h; count midpoints strictly left of t
    bounds = []
    exact_hits = []
    for k, t in enumerate(f.breakpoints):
        pos = (t - lo) / h - Fraction(1, 2)
        cnt = min(max(math.ceil(pos), 0), n)
        bounds.append(cnt)
        if pos.denominator == 1 and 0 <= pos < n:
            exact_hits.append((int(pos), f.point_value(k)))
    edges = [0, *bounds, n]
    for k, v in enumerate(f.piece_values):
        a, b = edges[k], edges[k + 1]
        if a < b:
            out[a:b] = float(v)
    for idx, v in exact_hits:
        out[idx] = float(v)
    return SampledSignal(out, float(h), float(lo))


def sample_profile(p: MaximalProfile, n: int, window=None, exact: bool = True) -> SampledSignal:
    """Midpoint samples of a profile.

    Exact profiles are evaluated in rational arithmetic and rounded once;
    ``exact=False`` uses vectorized float evaluation per segment.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    lo, hi = _window(p.domain, window)
    h = (hi - lo) / n
    if exact and p.provenance != "float":
        vals = [float(p(lo + (2 * k + 1) * h / 2)) for k in range(n)]
        return SampledSignal(np.array(vals), float(h), float(lo))
    xs = float(lo) + (np.arange(n) + 0.5) * float(h)
    out = np.empty(n)
    for seg in p.segments:
        a, b, c, d = (float(v) for v in seg.coeffs)
        m = (xs >= float(seg.lo)) & (xs <= float(seg.hi))
        out[m] = (a + b * xs[m]) / (c + d * xs[m])
    return SampledSignal(out, float(h), float(lo))


# ---------------------------------------------------------------------------
# file formats


def write_csv(s: SampledSignal, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for v in s.samples:
            w.writerow([repr(float(v))])


def read_csv(path, spacing: float = 1.0, origin: float = 0.0) -> SampledSignal:
    vals = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if row and row[0].strip():
                vals.append(float(row[0]))
    return SampledSignal(np.array(vals), spacing, origin)


def write_binary(s: SampledSignal, path) -> None:
    """8-byte little-endian count header, then little-endian float64 samples."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<Q", len(s)))
        fh.write(s.samples.astype("<f8").tobytes())


def read_binary(path, spacing: float = 1.0, origin: float = 0.0) -> SampledSignal:
    data = Path(path).read_bytes()
    if len(data) < 8:
        raise ValueError("missing count header")
    (count,) = struct.unpack("<Q", data[:8])
    if len(data) != 8 + 8 * count:
        raise ValueError(f"header says {count} samples, file holds {(len(data) - 8) / 8}")
    return SampledSignal(np.frombuffer(data[8:], dtype="<f8").astype(np.float64), spacing, origin)
