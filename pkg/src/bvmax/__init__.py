"""Maximal functions of one-dimensional functions of bounded variation.

Exact profiles for step functions, float profiles for piecewise-linear
functions, a linear-time discrete kernel for sampled signals, and checks
of the variation, Lipschitz, Landau and Poincare type inequalities.
"""

from .arith import INF, QuadSurd
from .discrete import (
    SampledSignal,
    brute_force_maximal,
    discrete_local_maximal,
    discrete_maximal,
    sample_profile,
    sample_step,
)
from .exact import argmax_witness, local_maximal, maximal, maximal_at, one_sided_maximal
from .funcspace import (
    DerivativeMeasure,
    Interval,
    PiecewiseLinearFunction,
    StepFunction,
    canonical_representative,
    derivative_measure,
    extend_by_zero,
    l1_norm,
    lipschitz_constant,
    negative_part,
    positive_part,
    sup_norm,
    total_variation,
)
from .profile import MaximalProfile, profile_l1_derivative, profile_sup_derivative, profile_variation
from .pwl import maximal_pwl
from .theorems import VerificationReport

__version__ = "0.1.0"
