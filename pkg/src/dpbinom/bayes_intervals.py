"""Bayesian credible intervals for p given a noisy proportion.

The unobserved sample proportion ``qhat = k/n`` is treated as missing data.
A two-block Gibbs sampler alternates

* ``q | k`` ~ Beta(k + a, n - k + b) (a = b = 1 for the uniform prior,
  a = b = 1/2 for Jeffreys), and
* ``k | q, phat*`` on the grid k = 0..n, with log-weights
  ``noise_loglik(phat*, k) + log C(n, k) + k log q + (n - k) log(1 - q)``.

``noise_loglik`` is the Laplace density with scale ``1/(n*epsilon)`` or the
discrete Gaussian kernel ``-(n*phat* - k)^2 / (2 sigma2)``.
:func:`posterior_quadrature` evaluates the same posterior deterministically
and serves as the reference for the sampler.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp, xlog1py, xlogy

from . import kernels
from .core import (ConfigError, GridDistribution, IntervalEstimate, Mechanism,
                   Method, interp_quantile)
from .randkit import make_rng, sample_beta, sample_categorical


class Prior(str, enum.Enum):
    UNIFORM = "uniform"
    JEFFREYS = "jeffreys"

    @property
    def beta_params(self):
        return (1.0, 1.0) if self is Prior.UNIFORM else (0.5, 0.5)

    @property
    def method(self):
        return Method.BAYES_UNIFORM if self is Prior.UNIFORM else Method.BAYES_JEFFREYS


@dataclass(frozen=True)
class GibbsConfig:
    draws: int = 5000
    burn_in: int = 500
    prior: Prior = Prior.UNIFORM
    seed: int | None = None
    # Keep every ``thin``-th sweep after burn-in; 1 keeps them all.
    thin: int = 1

    def __post_init__(self):
        object.__setattr__(self, "prior", Prior(self.prior))
        if self.draws < 100:
            raise ConfigError(f"need at least 100 retained draws, got {self.draws}")
        if self.burn_in < 0:
            raise ConfigError(f"burn_in must be nonnegative, got {self.burn_in}")
        if self.thin < 1:
            raise ConfigError(f"thin must be at least 1, got {self.thin}")


@dataclass(frozen=True)
class PosteriorSample:
    q_draws: np.ndarray
    qhat_draws: np.ndarray


def laplace_scale(n, epsilon, literal=False):
    """Scale of the Laplace likelihood.

    ``literal=True`` swaps in scale ``n*epsilon`` in place of the mechanism's
    ``1/(n*epsilon)``; kept only for side-by-side comparison.
    """
    return n * epsilon if literal else 1.0 / (n * epsilon)


def laplace_log_likelihood(phat_star, qhat, n, epsilon, literal=False):
    b = laplace_scale(n, epsilon, literal)
    return -np.abs(phat_star - np.asarray(qhat, dtype=float)) / b - math.log(2.0 * b)


def discrete_gaussian_log_likelihood(phat_star, qhat, n, sigma2):
    """Unnormalized: the normalizer does not depend on ``qhat``."""
    k = n * np.asarray(qhat, dtype=float)
    return -((n * phat_star - k) ** 2) / (2.0 * sigma2)


def noise_log_likelihood(release, literal=False):
    """Noise log-likelihood of the release at every grid point k/n."""
    n = release.n
    grid = np.arange(n + 1) / n
    spec = release.spec
    if spec.mechanism is Mechanism.LAPLACE:
        return laplace_log_likelihood(release.phat_star, grid, n, spec.epsilon, literal)
    return discrete_gaussian_log_likelihood(release.phat_star, grid, n, spec.sigma2)


def log_binom_coeffs(n):
    k = np.arange(n + 1)
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def gibbs_step_q(k, n, prior, rng):
    a, b = Prior(prior).beta_params
    return sample_beta(rng, k + a, n - k + b)


def qhat_full_conditional(q, noise_loglik) -> GridDistribution:
    """Grid distribution of k given q; ``noise_loglik`` is indexed by k."""
    noise_loglik = np.asarray(noise_loglik, dtype=float)
    n = len(noise_loglik) - 1
    k = np.arange(n + 1)
    logw = noise_loglik + log_binom_coeffs(n) + k * math.log(q) + (n - k) * math.log1p(-q)
    return GridDistribution.from_log_weights(logw)


def gibbs_step_qhat(q, release, rng, literal=False):
    dist = qhat_full_conditional(q, noise_log_likelihood(release, literal))
    return sample_categorical(rng, dist) / release.n


def _initial_k(release):
    return int(round(release.n * release.phat_clamped))


def run_gibbs(release, config, rng=None, literal=False) -> PosteriorSample:
    if rng is None:
        rng = make_rng(config.seed if config.seed is not None else 0)
    n = release.n
    base = noise_log_likelihood(release, literal) + log_binom_coeffs(n)
    if not np.all(np.isfinite(base)):
        raise ValueError("non-finite grid log-weights; check phat_star")
    a, b = config.prior.beta_params
    q, k = kernels.gibbs_chain(rng, np.ascontiguousarray(base), a, b,
                               _initial_k(release), config.burn_in, config.draws, config.thin)
    return PosteriorSample(q, k / n)


def bayes_interval(release, config=GibbsConfig(), alpha=0.05, rng=None, literal=False):
    """Equal-tailed credible interval from retained Gibbs draws of q.

    Returns ``(IntervalEstimate, PosteriorSample)``.
    """
    post = run_gibbs(release, config, rng, literal)
    lo = interp_quantile(post.q_draws, alpha / 2.0)
    hi = interp_quantile(post.q_draws, 1.0 - alpha / 2.0)
    return IntervalEstimate.from_raw(lo, hi, 1.0 - alpha, config.prior.method), post


def posterior_cdf(release, prior=Prior.UNIFORM, grid_size=10001, literal=False):
    """Posterior CDF of q tabulated on a grid, by trapezoid quadrature.

    The uniform prior uses an even grid in q. For Jeffreys the grid is even in
    theta with q = sin^2(theta): the prior then becomes flat in theta and the
    endpoint singularities disappear. Returns ``(q_grid, cdf)``.
    """
    if grid_size < 101:
        raise ConfigError(f"grid_size must be at least 101, got {grid_size}")
    prior = Prior(prior)
    n = release.n
    k = np.arange(n + 1)
    base = noise_log_likelihood(release, literal) + log_binom_coeffs(n)
    if prior is Prior.UNIFORM:
        x = np.linspace(0.0, 1.0, grid_size)
        q = x
    else:
        x = np.linspace(0.0, math.pi / 2.0, grid_size)
        q = np.sin(x) ** 2
        q[-1] = 1.0
    logdens = np.empty(grid_size)
    for start in range(0, grid_size, 512):
        qs = q[start:start + 512, None]
        terms = base[None, :] + xlogy(k[None, :], qs) + xlog1py(n - k[None, :], -qs)
        logdens[start:start + 512] = logsumexp(terms, axis=1)
    dens = np.exp(logdens - logdens.max())
    cells = 0.5 * (dens[1:] + dens[:-1]) * np.diff(x)
    cdf = np.concatenate(([0.0], np.cumsum(cells)))
    return q, cdf / cdf[-1]


def posterior_quadrature(release, prior=Prior.UNIFORM, alpha=0.05, grid_size=10001,
                         literal=False):
    """Equal-tailed posterior interval ``(lower, upper)`` by quadrature."""
    q, cdf = posterior_cdf(release, prior, grid_size, literal)
    return (float(np.interp(alpha / 2.0, cdf, q)),
            float(np.interp(1.0 - alpha / 2.0, cdf, q)))
