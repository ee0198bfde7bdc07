"""Two-step interval: impute plausible sample proportions, then aggregate Wilson bounds.

Plausible values of the sample proportion are drawn from the Laplace noise
likelihood alone (a flat prior over the grid), each draw is pushed through
the classical Wilson interval, and the interval is the alpha/2 quantile of
the lower bounds and the 1 - alpha/2 quantile of the upper bounds.
"""

from __future__ import annotations

import numpy as np

from .bayes_intervals import laplace_log_likelihood
from .classical_intervals import wilson
from .core import (ConfigError, GridDistribution, IntervalEstimate, Mechanism, Method,
                   UnsupportedMechanismError, interp_quantile)

DEFAULT_T = 5000


def qhat_posterior_weights(phat_star, n, epsilon, literal=False) -> GridDistribution:
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    grid = np.arange(n + 1) / n
    return GridDistribution.from_log_weights(
        laplace_log_likelihood(phat_star, grid, n, epsilon, literal))


def draw_qhat_indices(rng, dist, size):
    """``size`` categorical draws, one uniform each, by cumulative scan."""
    cum = np.cumsum(dist.probs)
    idx = np.searchsorted(cum, rng.random(size) * cum[-1], side="right")
    return np.minimum(idx, dist.n)


def twostep_interval(release, T=DEFAULT_T, alpha=0.05, rng=None, literal=False,
                     indices=None) -> IntervalEstimate:
    """Two-step interval for a Laplace release.

    Wilson bounds are evaluated once per grid point and gathered by the drawn
    indices, which is exactly equivalent to evaluating them per draw.
    ``indices`` injects pre-drawn grid indices instead of sampling.
    """
    if release.spec.mechanism is not Mechanism.LAPLACE:
        raise UnsupportedMechanismError("the two-step interval is defined for Laplace releases")
    if T < 100:
        raise ConfigError(f"T must be at least 100, got {T}")
    n = release.n
    if indices is None:
        dist = qhat_posterior_weights(release.phat_star, n, release.spec.epsilon, literal)
        indices = draw_qhat_indices(rng, dist, T)
    lower_tab, upper_tab = wilson(np.arange(n + 1) / n, n, alpha)
    lo = interp_quantile(lower_tab[indices], alpha / 2.0)
    hi = interp_quantile(upper_tab[indices], 1.0 - alpha / 2.0)
    return IntervalEstimate.from_raw(lo, hi, 1.0 - alpha, Method.TWO_STEP)
