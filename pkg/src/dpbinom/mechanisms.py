"""Agency-side noisy release of a sample proportion.

Neighbouring databases differ by replacing one record, so ``n`` is public and
travels with every release. Releases are never clipped; ``NoisyRelease``
offers a clamped view for display only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Mechanism, NoisyRelease, ParameterError, PrivacySpec
from .randkit import sample_discrete_gaussian, sample_laplace


@dataclass(frozen=True)
class ConfidentialSample:
    k: int
    n: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.k <= self.n:
            raise ParameterError(f"need 0 <= k <= n and n >= 1, got k={self.k}, n={self.n}")

    @property
    def phat(self) -> float:
        return self.k / self.n


def release_laplace(sample, epsilon, rng, noise=None) -> NoisyRelease:
    """Release ``k/n + eta`` with ``eta ~ Laplace(0, 1/(n*epsilon))``.

    ``noise`` overrides the draw of ``eta`` (used to pin tests).
    """
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    spec = PrivacySpec.laplace(sample.n, epsilon)
    eta = sample_laplace(rng, spec.laplace_scale) if noise is None else noise
    return NoisyRelease(sample.k / sample.n + eta, sample.n, spec)


def release_discrete_gaussian(sample, spec, rng, noise=None) -> NoisyRelease:
    """Release ``(k + g)/n`` with integer noise ``g ~ DiscreteGaussian(0, sigma2)``."""
    if spec.mechanism is not Mechanism.DISCRETE_GAUSSIAN:
        raise ParameterError(f"expected a discrete Gaussian spec, got {spec.mechanism.value}")
    if spec.n != sample.n:
        raise ParameterError("spec.n does not match the sample size")
    g = sample_discrete_gaussian(rng, spec.sigma2) if noise is None else int(noise)
    return NoisyRelease((sample.k + g) / sample.n, sample.n, spec)


def release(sample, spec, rng) -> NoisyRelease:
    if spec.mechanism is Mechanism.LAPLACE:
        return release_laplace(sample, spec.epsilon, rng)
    return release_discrete_gaussian(sample, spec, rng)


def renyi_epsilon(sigma2, lam, sensitivity=1.0) -> float:
    """Renyi-DP epsilon at order ``lam`` of Gaussian-type noise with variance ``sigma2``."""
    if not lam > 1:
        raise ParameterError(f"Renyi order must exceed 1, got {lam}")
    if not sigma2 > 0:
        raise ParameterError(f"sigma2 must be positive, got {sigma2}")
    return lam * sensitivity ** 2 / (2.0 * sigma2)
