"""Clopper-Pearson-style interval obtained by inverting simulated tail probabilities.

For a candidate p, the sampling distribution of the noisy proportion is
simulated S times. The lower bound is where the upper tail probability
P(phat* >= observed) climbs past alpha/2; the upper bound is where the lower
tail probability P(phat* <= observed) drops to alpha/2.

The S uniforms driving the binomial draws and the S Laplace noise draws are
shared across all candidates (common random numbers). Both tail counts are
then monotone step functions of p and Brent's method brackets their jump
points deterministically. ``grid=True`` instead scans a fixed grid of
candidates with fresh simulations for each one.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np

from . import kernels
from .core import IntervalEstimate, Mechanism, Method, UnsupportedMechanismError
from .randkit import binomial_cdf, binomial_from_uniform, laplace_from_uniform, open_uniform

DEFAULT_S = 5000
DEFAULT_J = 1000
ROOT_TOL = 1e-4

_EPS = sys.float_info.epsilon


class NoBracketError(ValueError):
    """The function does not change sign over the supplied interval."""


def brent_root(f, lo, hi, tol=1e-12, maxiter=500):
    """Zero of ``f`` on [lo, hi] by Brent's method.

    Inverse quadratic interpolation and secant steps, falling back to
    bisection whenever they would not shrink the bracket fast enough. The
    bracket always contains a sign change, so step functions are handled:
    the returned point lies inside a sign-change bracket of width <= tol.
    """
    a, b = float(lo), float(hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise NoBracketError(f"f({a})={fa} and f({b})={fb} share a sign")
    c, fc = a, fa
    d = e = b - a
    for _ in range(maxiter):
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * _EPS * abs(b) + 0.5 * tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            else:
                p = -p
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = xm
        else:
            d = e = xm
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = f(b)
    raise RuntimeError("Brent's method did not converge")


@dataclass(frozen=True)
class TailSimulator:
    """Common random numbers for one exact-interval computation."""

    n: int
    epsilon: float
    S: int
    common_uniforms: np.ndarray
    common_noise: np.ndarray

    @classmethod
    def build(cls, n, epsilon, S, rng):
        u = open_uniform(rng, S)
        noise = laplace_from_uniform(open_uniform(rng, S), 1.0 / (n * epsilon))
        return cls(n, epsilon, S, u, np.ascontiguousarray(noise))

    def tail_counts(self, p, obs):
        """``(#{sim >= obs}, #{sim <= obs})`` at candidate ``p``."""
        cdf = binomial_cdf(self.n, min(max(p, 0.0), 1.0))
        return kernels.tail_counts(cdf, self.common_uniforms, self.common_noise, float(obs))


def simulate_tail_probs(sim, p_candidate, phat_star_obs):
    """``(upper_tail, lower_tail)`` simulated tail fractions at ``p_candidate``."""
    n_ge, n_le = sim.tail_counts(p_candidate, phat_star_obs)
    return n_ge / sim.S, n_le / sim.S


def _bounds_crn(sim, obs, alpha, tol):
    # Offsets by half a count so neither function is ever exactly zero and
    # each root is the jump where the count crosses alpha/2 * S.
    cut = math.floor(alpha / 2.0 * sim.S) + 0.5

    def upper_excess(p):
        return sim.tail_counts(p, obs)[0] - cut

    def lower_excess(p):
        return sim.tail_counts(p, obs)[1] - cut

    if upper_excess(0.0) > 0:
        p_lo = 0.0
    elif upper_excess(1.0) < 0:
        p_lo = 1.0
    else:
        p_lo = brent_root(upper_excess, 0.0, 1.0, tol)

    if lower_excess(1.0) > 0:
        p_hi = 1.0
    elif lower_excess(0.0) < 0:
        p_hi = 0.0
    else:
        p_hi = brent_root(lower_excess, 0.0, 1.0, tol)
    return p_lo, p_hi


def _bounds_grid(n, epsilon, obs, alpha, S, J, rng):
    candidates = np.linspace(0.0, 1.0, J)
    upper = np.empty(J)
    lower = np.empty(J)
    b = 1.0 / (n * epsilon)
    for j, p in enumerate(candidates):
        k = binomial_from_uniform(open_uniform(rng, S), n, p)
        x = k / n + laplace_from_uniform(open_uniform(rng, S), b)
        upper[j] = np.count_nonzero(x >= obs) / S
        lower[j] = np.count_nonzero(x <= obs) / S
    keep_lo = np.flatnonzero(upper > alpha / 2.0)
    keep_hi = np.flatnonzero(lower > alpha / 2.0)
    p_lo = candidates[keep_lo[0]] if keep_lo.size else 1.0
    p_hi = candidates[keep_hi[-1]] if keep_hi.size else 0.0
    return float(p_lo), float(p_hi)


def exact_interval(release, S=DEFAULT_S, alpha=0.05, rng=None, grid=False, J=DEFAULT_J,
                   tol=ROOT_TOL, simulator=None) -> IntervalEstimate:
    if release.spec.mechanism is not Mechanism.LAPLACE:
        raise UnsupportedMechanismError("the exact interval is implemented for Laplace releases")
    n, eps, obs = release.n, release.spec.epsilon, release.phat_star
    if grid:
        p_lo, p_hi = _bounds_grid(n, eps, obs, alpha, S, J, rng)
    else:
        sim = simulator if simulator is not None else TailSimulator.build(n, eps, S, rng)
        p_lo, p_hi = _bounds_crn(sim, obs, alpha, tol)
    # Both roots are located only to within tol and may cross when the set is tiny.
    lo, hi = min(p_lo, p_hi), max(p_lo, p_hi)
    return IntervalEstimate.from_raw(lo, hi, 1.0 - alpha, Method.EXACT)
