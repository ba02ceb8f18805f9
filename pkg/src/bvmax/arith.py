"""Exact scalar helpers: rational parsing/formatting and quadratic surds.

Breakpoints of local maximal profiles can be irrational roots of quadratics
with rational coefficients.  They are carried exactly as ``a + b*sqrt(D)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

import mpmath

INF = math.inf

_SMALL_PRIMES = [p for p in range(2, 200) if all(p % q for q in range(2, int(p**0.5) + 1))]


def to_fraction(value) -> Fraction:
    """Coerce int, str ("p/q" or decimal) or Fraction to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"cannot convert {value} to a rational")
        return Fraction(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


def parse_extended(value):
    """Parse an extended-real endpoint: '-inf', 'inf', or a rational."""
    if isinstance(value, float) and math.isinf(value):
        return value
    if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity", "-inf", "-infinity"):
        return -INF if value.strip().startswith("-") else INF
    return to_fraction(value)


def format_rational(value) -> str:
    if isinstance(value, float):
        if math.isinf(value):
            return "-inf" if value < 0 else "inf"
        return repr(value)
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def format_decimal(value, digits: int = 17) -> str:
    """Decimal string with ``digits`` significant digits (lossless for floats)."""
    if isinstance(value, float) and math.isinf(value):
        return "-inf" if value < 0 else "inf"
    if isinstance(value, QuadSurd):
        value = value.to_mpf(digits + 10)
        return mpmath.nstr(value, digits, strip_zeros=True)
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        with mpmath.workdps(digits + 10):
            return mpmath.nstr(mpmath.mpf(value.numerator) / value.denominator, digits, strip_zeros=True)
    return format(float(value), f".{digits}g")


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (k, m) with n = k**2 * m, pulling out small square factors."""
    k = 1
    r = math.isqrt(n)
    if r * r == n:
        return r, 1
    for p in _SMALL_PRIMES:
        pp = p * p
        if pp > n:
            break
        while n % pp == 0:
            n //= pp
            k *= p
    return k, n


class QuadSurd:
    """The real number ``a + b*sqrt(D)`` with rational a, b and integer D > 1.

    D is never a perfect square; construct through :func:`surd` which
    collapses rational results to Fraction.
    """

    __slots__ = ("a", "b", "D")

    def __init__(self, a: Fraction, b: Fraction, D: int):
        self.a = a
        self.b = b
        self.D = D

    # -- conversion -------------------------------------------------------
    def __float__(self) -> float:
        return float(self.to_mpf(30))

    def to_mpf(self, dps: int = 50):
        with mpmath.workdps(dps):
            return mpmath.mpf(self.a.numerator) / self.a.denominator + (
                mpmath.mpf(self.b.numerator) / self.b.denominator
            ) * mpmath.sqrt(self.D)

    def __repr__(self) -> str:
        return f"QuadSurd({self.a}, {self.b}, {self.D})"

    def __str__(self) -> str:
        return str(SurdSum.of(self))

    def __hash__(self):
        return hash((self.a, self.b, self.D))

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QuadSurd):
            if other.D == self.D:
                return other
            prod = self.D * other.D
            r = math.isqrt(prod)
            if r * r == prod:
                # sqrt(D2) = r / D1 * sqrt(D1)
                return QuadSurd(other.a, other.b * Fraction(r, self.D), self.D)
            return None
        if isinstance(other, (int, Fraction)):
            return QuadSurd(Fraction(other), Fraction(0), self.D)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return surd(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.a, -self.b, self.D)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return surd(self.a - o.a, self.b - o.b, self.D)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return surd(self.a * o.a + self.b * o.b * self.D, self.a * o.b + self.b * o.a, self.D)

    __rmul__ = __mul__

    def _inverse(self):
        norm = self.a * self.a - self.b * self.b * self.D
        return surd(self.a / norm, -self.b / norm, self.D)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.b == 0:
            return surd(self.a / o.a, self.b / o.a, self.D)
        return self * o._inverse()

    def __rtruediv__(self, other):
        return self._inverse() * other

    # -- ordering ---------------------------------------------------------
    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 D
        lhs = self.a * self.a
        rhs = self.b * self.b * self.D
        return sa if lhs > rhs else sb

    def _cmp(self, other) -> int:
        if isinstance(other, float):
            if math.isinf(other):
                return -1 if other > 0 else 1
            other = Fraction(other)
        o = self._coerce(other)
        if o is not None:
            return exact_sign(self - o)
        # incompatible radicands: distinct reals, refine until separated
        dps = 40
        while True:
            diff = self.to_mpf(dps) - other.to_mpf(dps)
            if abs(diff) > mpmath.mpf(10) ** (-(dps - 10)):
                return 1 if diff > 0 else -1
            dps *= 2
            if dps > 5000:
                return 0

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (QuadSurd, int, Fraction, float)):
            return self._cmp(other) == 0
        return NotImplemented

    def __abs__(self):
        return -self if self.sign() < 0 else self


Number = Union[Fraction, QuadSurd]


def surd(a: Fraction, b: Fraction, D: int):
    if b == 0:
        return Fraction(a)
    return QuadSurd(Fraction(a), Fraction(b), D)


def sqrt_rational(q: Fraction):
    """Exact sqrt of a nonnegative rational as Fraction or QuadSurd."""
    if q < 0:
        raise ValueError("negative radicand")
    p, d = q.numerator, q.denominator
    n = p * d  # sqrt(p/d) = sqrt(p*d)/d
    k, m = _squarefree_split(n)
    if m == 1:
        return Fraction(k, d)
    return QuadSurd(Fraction(0), Fraction(k, d), m)


def quadratic_roots(A: Fraction, B: Fraction, C: Fraction) -> list:
    """Real roots of A x^2 + B x + C (A may be 0), sorted ascending, exact."""
    if A == 0:
        if B == 0:
            return []
        return [-C / B]
    disc = B * B - 4 * A * C
    if disc < 0:
        return []
    if disc == 0:
        return [-B / (2 * A)]
    root = sqrt_rational(disc)
    r1 = (-B - root) / (2 * A) if not isinstance(root, QuadSurd) else surd(-B / (2 * A), -root.b / (2 * A), root.D)
    r2 = (-B + root) / (2 * A) if not isinstance(root, QuadSurd) else surd(-B / (2 * A), root.b / (2 * A), root.D)
    return sorted([r1, r2], key=lambda r: _key(r))


def _key(r):
    return float(r) if isinstance(r, QuadSurd) else r


def to_float(x) -> float:
    if isinstance(x, float):
        return x
    return float(x)


def to_mpf(x, dps: int = 50):
    if isinstance(x, QuadSurd):
        return x.to_mpf(dps)
    if isinstance(x, float):
        return mpmath.mpf(x)
    x = Fraction(x)
    with mpmath.workdps(dps):
        return mpmath.mpf(x.numerator) / x.denominator


def rational_between(lo, hi) -> Fraction:
    """A rational strictly inside (lo, hi); endpoints may be infinite or surds."""
    if lo == -INF and hi == INF:
        return Fraction(0)
    if lo == -INF:
        return Fraction(math.floor(_approx(hi))) - 1
    if hi == INF:
        return Fraction(math.ceil(_approx(lo))) + 1
    if isinstance(lo, Fraction) and isinstance(hi, Fraction):
        return (lo + hi) / 2
    dps = 30
    while True:
        mid = (to_mpf(lo, dps) + to_mpf(hi, dps)) / 2
        cand = _mpf_to_fraction(mid)
        if lo < cand < hi:
            return cand
        dps *= 2
        if dps > 4000:
            raise ArithmeticError("could not separate endpoints")


def _approx(x) -> float:
    return float(x)


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    val = Fraction(int(man)) * (Fraction(2) ** int(exp))
    return -val if sign else val


def exact_sign(x) -> int:
    if isinstance(x, QuadSurd):
        return x.sign()
    return (x > 0) - (x < 0)


class SurdSum:
    """Exact sum ``r + sum_D c_D * sqrt(D)`` over distinct squarefree D.

    Square roots of distinct squarefree integers are linearly independent
    over the rationals, so the sign of a nonzero sum can always be
    settled numerically by raising precision.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict):
        self.terms = {k: v for k, v in terms.items() if v != 0}

    @classmethod
    def of(cls, x) -> "SurdSum":
        if isinstance(x, SurdSum):
            return x
        if isinstance(x, QuadSurd):
            return cls({1: x.a, x.D: x.b})
        return cls({1: Fraction(x)})

    def simplify(self):
        """Collapse to Fraction or QuadSurd when possible."""
        keys = [k for k in self.terms if k != 1]
        if not keys:
            return self.terms.get(1, Fraction(0))
        if len(keys) == 1:
            return QuadSurd(self.terms.get(1, Fraction(0)), self.terms[keys[0]], keys[0])
        return self

    def __add__(self, other):
        other = SurdSum.of(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return SurdSum(out)

    __radd__ = __add__

    def __neg__(self):
        return SurdSum({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-SurdSum.of(other))

    def __rsub__(self, other):
        return SurdSum.of(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SurdSum({k: v * other for k, v in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def to_mpf(self, dps: int = 50):
        with mpmath.workdps(dps):
            total = mpmath.mpf(0)
            for k, v in self.terms.items():
                total += (mpmath.mpf(v.numerator) / v.denominator) * mpmath.sqrt(k)
            return total

    def __float__(self):
        return float(self.to_mpf(30))

    def sign(self) -> int:
        if not self.terms:
            return 0
        dps = 30
        while True:
            val = self.to_mpf(dps)
            if abs(val) > mpmath.mpf(10) ** (-(dps - 8)):
                return 1 if val > 0 else -1
            dps *= 2

    def __repr__(self):
        return f"SurdSum({self.terms})"

    def __str__(self):
        out = ""
        for k in sorted(self.terms):
            v = self.terms[k]
            term = format_rational(abs(v)) + ("" if k == 1 else f"*sqrt({k})")
            if not out:
                out = ("-" if v < 0 else "") + term
            else:
                out += (" - " if v < 0 else " + ") + term
        return out or "0"


def exact_sum(values):
    """Exact sum of Fractions/QuadSurds, simplified to the smallest type."""
    acc = SurdSum({})
    for v in values:
        acc = acc + v
    return acc.simplify()


def exact_diff(x, y):
    """x - y exactly, for Fractions and QuadSurds of any radicands."""
    return (SurdSum.of(x) - SurdSum.of(y)).simplify()


def exact_abs_diff(x, y):
    """|x - y| exactly, for Fractions and QuadSurds of any radicands."""
    d = SurdSum.of(x) - SurdSum.of(y)
    return (d if d.sign() >= 0 else -d).simplify()
