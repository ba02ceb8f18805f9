"""Numba kernels for discrete maximal averages.

With prefix points ``(p, P[p])``, ``p = 0..n``, the best window containing
sample ``i`` is the steepest chord ``(a, c)`` with ``a <= i < c``.  The
sweep keeps the optimal chord while ``i`` advances; when its right end
leaves the admissible set the optimum is recomputed as the bridge between
the lower hull of ``{0..i}`` and the upper hull of ``{i+1..n}`` by
alternating tangent searches.  Prefix sums are double-double.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def prefix_double_double(x):
    """Compensated prefix sums of |x|, interleaved: P[2k] = hi, P[2k+1] = lo."""
    n = x.shape[0]
    pp = np.zeros(2 * (n + 1))
    s = 0.0
    c = 0.0
    for k in range(n):
        v = abs(x[k])
        t = s + v
        # TwoSum error term
        bp = t - s
        err = (s - (t - bp)) + (v - bp)
        s = t
        c += err
        pp[2 * k + 2] = s
        pp[2 * k + 3] = c
    return pp


@njit(cache=True, inline="always")
def _slope(pp, a, c):
    return ((pp[2 * c] - pp[2 * a]) + (pp[2 * c + 1] - pp[2 * a + 1])) / (c - a)


@njit(cache=True, inline="always")
def _rise(pp, a, c):
    return (pp[2 * c] - pp[2 * a]) + (pp[2 * c + 1] - pp[2 * a + 1])


@njit(cache=True, inline="always")
def _less(pp, a, b, c, d):
    """slope(a, b) < slope(c, d) without division (a < b, c < d)."""
    return _rise(pp, a, b) * (d - c) < _rise(pp, c, d) * (b - a)


@njit(cache=True)
def _build_suffix_hull(pp, n):
    """Backward pass: upper hulls of {p..n}, logging what each insertion popped.

    Returns first-edge targets ``e``, the pop log with per-point bounds,
    the final stack and the operation count.
    """
    stack = np.empty(n + 1, dtype=np.int32)
    top = -1
    e = np.full(n + 1, -1, dtype=np.int32)
    log = np.empty(n + 1, dtype=np.int32)
    log_lo = np.zeros(n + 1, dtype=np.int32)
    log_hi = np.zeros(n + 1, dtype=np.int32)
    nlog = 0
    ops = 0
    for p in range(n, -1, -1):
        log_lo[p] = nlog
        # drop vertices strictly below the chord from p; collinear ones stay
        while top >= 1 and _less(pp, p, stack[top], stack[top], stack[top - 1]):
            log[nlog] = stack[top]
            nlog += 1
            top -= 1
            ops += 1
        log_hi[p] = nlog
        if top >= 0:
            e[p] = stack[top]
        top += 1
        stack[top] = p
        ops += 1
    return e, log, log_lo, log_hi, stack, top, ops


@njit(cache=True)
def _tangent_to_upper(pp, a, uh, top):
    """Best c on the upper hull stack uh[0..top] (uh[top] leftmost) for fixed a.

    Position j counts vertices from the left (j -> uh[top - j]); the answer
    is the first j whose outgoing edge is no steeper than the chord from a.
    Galloping from the left keeps nearby answers cheap.
    """
    prev = -1
    j = 0
    step = 1
    while j < top:
        vj = uh[top - j]
        if not _less(pp, a, vj, vj, uh[top - j - 1]):
            break
        prev = j
        j += step
        step *= 2
    if j > top:
        j = top
    lo = prev + 1
    hi = j
    while lo < hi:
        mid = (lo + hi) // 2
        vj = uh[top - mid]
        if not _less(pp, a, vj, vj, uh[top - mid - 1]):
            hi = mid
        else:
            lo = mid + 1
    return uh[top - lo]


@njit(cache=True)
def _tangent_to_lower(pp, c, lh, m):
    """Best a on the lower hull lh[0..m-1] (ascending) for fixed c.

    The answer is the first k whose outgoing edge is steeper than the chord
    to c (ties move right, toward shorter windows).  Gallops from the right.
    """
    hi = m - 1
    k = m - 2
    step = 1
    while k >= 0:
        if not _less(pp, lh[k], c, lh[k], lh[k + 1]):
            break
        hi = k
        k -= step
        step *= 2
    lo = k + 1 if k >= 0 else 0
    while lo < hi:
        mid = (lo + hi) // 2
        if _less(pp, lh[mid], c, lh[mid], lh[mid + 1]):
            hi = mid
        else:
            lo = mid + 1
    return lh[lo]


@njit(cache=True)
def maximal_kernel(x):
    """Two-sided discrete maximal averages of |x|.

    Returns (out, hull_ops, replay_ops, search_steps).
    """
    n = x.shape[0]
    pp = prefix_double_double(x)
    e, log, log_lo, log_hi, uh, top, hull_ops = _build_suffix_hull(pp, n)
    out = np.empty(n)
    lh = np.empty(n + 1, dtype=np.int32)
    m = 0
    replay = 0
    steps = 0
    a_opt = 0
    c_opt = 0
    best = 0.0
    for i in range(n):
        # undo the insertion of i: uh now holds the hull of {i+1..n}
        top -= 1
        replay += 1
        for k in range(log_hi[i] - 1, log_lo[i] - 1, -1):
            top += 1
            uh[top] = log[k]
            replay += 1
        # lower hull of {0..i}
        while m >= 2:
            a0 = lh[m - 2]
            a1 = lh[m - 1]
            if not _less(pp, a0, a1, a1, i):
                m -= 1
                hull_ops += 1
            else:
                break
        lh[m] = i
        m += 1
        hull_ops += 1
        cand = _slope(pp, i, e[i])
        if i == 0:
            a_opt, c_opt, best = 0, e[0], cand
        elif c_opt != i:
            if cand > best:
                a_opt, c_opt, best = i, e[i], cand
        else:
            a = i
            c = e[i]
            val = cand
            while True:
                steps += 1
                a2 = _tangent_to_lower(pp, c, lh, m)
                c2 = _tangent_to_upper(pp, a2, uh, top)
                v2 = _slope(pp, a2, c2)
                if v2 > val:
                    same = c2 == c
                    a, c, val = a2, c2, v2
                    if same:
                        break  # mutual best responses: the bridge is found
                else:
                    break
            a_opt, c_opt, best = a, c, val
        out[i] = best
    return out, hull_ops, replay, steps


@njit(cache=True)
def local_kernel(x, W):
    """Windows of length <= W: sliding maxima of each length's means, O(nW)."""
    n = x.shape[0]
    pp = prefix_double_double(x)
    out = np.full(n, -np.inf)
    dq = np.empty(n, dtype=np.int32)
    means = np.empty(n)
    for L in range(1, min(W, n) + 1):
        cnt = n - L + 1
        for a in range(cnt):
            means[a] = _slope(pp, a, a + L)
        # out[i] = max(means[a]) over a in [i-L+1, i] intersected with [0, cnt-1]
        head = 0
        tail = 0
        nxt = 0
        for i in range(n):
            if nxt <= i and nxt < cnt:
                while tail > head and means[dq[tail - 1]] <= means[nxt]:
                    tail -= 1
                dq[tail] = nxt
                tail += 1
                nxt += 1
            while dq[head] < i - L + 1:
                head += 1
            if means[dq[head]] > out[i]:
                out[i] = means[dq[head]]
    return out


@njit(cache=True)
def brute_kernel(x, W):
    """O(n^2) enumeration of every window of length <= W."""
    n = x.shape[0]
    pp = prefix_double_double(x)
    out = np.full(n, -np.inf)
    for a in range(n):
        run = -np.inf
        cmax = min(n, a + W)
        for c in range(cmax, a, -1):
            v = _slope(pp, a, c)
            if v > run:
                run = v
            # run = best window from a that still contains c - 1
            if run > out[c - 1]:
                out[c - 1] = run
    return out
