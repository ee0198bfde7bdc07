"""Plug-in Wald and Wilson intervals for a Laplace-noised proportion.

Both substitute the noisy proportion (clamped to [0, 1]) into the classical
formula and inflate the variance by the Laplace noise variance
``2/(n*epsilon)**2``. Nothing keeps the raw bounds inside [0, 1]; they are
clipped afterwards and the excursion is recorded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (IntervalEstimate, Mechanism, Method, UnsupportedMechanismError,
                   z_quantile)


def _require_laplace(release):
    if release.spec.mechanism is not Mechanism.LAPLACE:
        raise UnsupportedMechanismError(
            "plug-in intervals are defined only for the Laplace mechanism")


def plugin_wald(release, alpha=0.05) -> IntervalEstimate:
    _require_laplace(release)
    n, eps = release.n, release.spec.epsilon
    p = release.phat_clamped
    half = z_quantile(alpha) * math.sqrt(p * (1.0 - p) / n + 2.0 / (n * eps) ** 2)
    return IntervalEstimate.from_raw(p - half, p + half, 1.0 - alpha, Method.WALD_PLUGIN)


@dataclass(frozen=True)
class WilsonQuadratic:
    """Coefficients of ``A p^2 + B p + C <= 0`` and its discriminant."""

    A: float
    B: float
    C: float
    D: float

    @property
    def roots(self):
        # B < 0 always, so -B + sqrt(D) has no cancellation; the other root
        # follows from the product of the roots, C/A.
        big = (-self.B + math.sqrt(self.D)) / 2.0
        return self.C / big, big / self.A


def wilson_quadratic_analysis(phat_star, n, epsilon, alpha=0.05) -> WilsonQuadratic:
    """Coefficients of the plug-in Wilson inequality at the clamped release.

    B^2 - 4AC cancels badly when D is small next to B^2 (large n, p near 0
    or 1, large epsilon), so it is evaluated in exact rational arithmetic.
    """
    p = Fraction(min(max(phat_star, 0.0), 1.0))
    z2 = Fraction(z_quantile(alpha)) ** 2
    n = Fraction(n)
    a = n + z2
    b = -(2 * n * p + z2)
    c = n * p * p - 2 * z2 / (n * Fraction(epsilon) ** 2)
    return WilsonQuadratic(float(a), float(b), float(c), float(b * b - 4 * a * c))


def expanded_discriminant(phat_star, n, epsilon, alpha=0.05) -> float:
    """Discriminant written as a sum of nonnegative terms (positive for every input)."""
    p = min(max(phat_star, 0.0), 1.0)
    z2 = z_quantile(alpha) ** 2
    return 4.0 * n * z2 * p * (1.0 - p) + z2 * z2 + 8.0 * z2 * (n + z2) / (n * epsilon ** 2)


def plugin_wilson(release, alpha=0.05) -> IntervalEstimate:
    _require_laplace(release)
    quad = wilson_quadratic_analysis(release.phat_star, release.n, release.spec.epsilon, alpha)
    if not quad.D >= 0.0:
        raise ArithmeticError(f"plug-in Wilson quadratic has no real roots (D={quad.D})")
    lo, hi = quad.roots
    return IntervalEstimate.from_raw(lo, hi, 1.0 - alpha, Method.WILSON_PLUGIN)
