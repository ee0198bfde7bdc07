"""Nonprivate Wald and Wilson intervals for a binomial proportion."""

import math

import numpy as np

from .core import z_quantile


def wald(phat, n, alpha=0.05):
    """Unclipped Wald bounds ``phat -/+ z*sqrt(phat(1-phat)/n)``."""
    if not 0.0 <= phat <= 1.0:
        raise ValueError(f"phat must lie in [0, 1], got {phat}")
    half = z_quantile(alpha) * math.sqrt(phat * (1.0 - phat) / n)
    return phat - half, phat + half


def wilson(phat, n, alpha=0.05):
    """Wilson score bounds; always inside [0, 1].

    ``phat`` may be an array, in which case arrays of bounds are returned.
    """
    p = np.asarray(phat, dtype=float)
    if np.any((p < 0.0) | (p > 1.0)):
        raise ValueError("phat must lie in [0, 1]")
    z = z_quantile(alpha)
    z2 = z * z
    centre = p + z2 / (2.0 * n)
    half = z * np.sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n))
    scale = 1.0 / (1.0 + z2 / n)
    lower = np.maximum(scale * (centre - half), 0.0)
    upper = np.minimum(scale * (centre + half), 1.0)
    if p.ndim == 0:
        return float(lower), float(upper)
    return lower, upper
