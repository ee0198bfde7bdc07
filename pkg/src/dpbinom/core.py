"""Shared value types: privacy parameters, releases, interval estimates."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from statistics import NormalDist

import numpy as np


class Mechanism(str, enum.Enum):
    LAPLACE = "laplace"
    DISCRETE_GAUSSIAN = "discrete-gaussian"


class Method(str, enum.Enum):
    WALD_PLUGIN = "wald-plugin"
    WILSON_PLUGIN = "wilson-plugin"
    BAYES_UNIFORM = "bayes-uniform"
    BAYES_JEFFREYS = "bayes-jeffreys"
    TWO_STEP = "two-step"
    EXACT = "exact"
    WALD_CLASSICAL = "wald"
    WILSON_CLASSICAL = "wilson"


# Methods whose bounds are constructed inside [0, 1] and never need clipping.
BOUNDED_METHODS = frozenset(
    {Method.BAYES_UNIFORM, Method.BAYES_JEFFREYS, Method.TWO_STEP, Method.EXACT}
)


class ParameterError(ValueError):
    """A distribution or mechanism parameter is outside its domain."""


class ConfigError(ValueError):
    """An estimator or scenario was configured inconsistently."""


class UnsupportedMechanismError(ConfigError):
    """The estimator is not defined for the release's mechanism."""


@dataclass(frozen=True)
class PrivacySpec:
    """Mechanism identity and the parameters an analyst is told about.

    ``sigma2`` is on the count scale and defaults to ``1/(n*epsilon)**2``.
    ``sensitivity`` defaults to ``1/n`` for the Laplace proportion release and
    to 1 for the discrete Gaussian count release.
    """

    mechanism: Mechanism
    epsilon: float
    n: int
    sigma2: float | None = None
    sensitivity: float | None = None

    def __post_init__(self):
        mech = Mechanism(self.mechanism)
        object.__setattr__(self, "mechanism", mech)
        if not self.epsilon > 0:
            raise ParameterError(f"epsilon must be positive, got {self.epsilon}")
        if int(self.n) != self.n or self.n < 1:
            raise ParameterError(f"n must be a positive integer, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if self.sigma2 is None:
            object.__setattr__(self, "sigma2", 1.0 / (self.n * self.epsilon) ** 2)
        elif not self.sigma2 > 0:
            raise ParameterError(f"sigma2 must be positive, got {self.sigma2}")
        if self.sensitivity is None:
            sens = 1.0 / self.n if mech is Mechanism.LAPLACE else 1.0
            object.__setattr__(self, "sensitivity", sens)
        elif not self.sensitivity > 0:
            raise ParameterError("sensitivity must be positive")

    @classmethod
    def laplace(cls, n, epsilon):
        return cls(Mechanism.LAPLACE, epsilon, n)

    @classmethod
    def discrete_gaussian(cls, n, epsilon, sigma2=None):
        return cls(Mechanism.DISCRETE_GAUSSIAN, epsilon, n, sigma2=sigma2)

    @property
    def laplace_scale(self) -> float:
        """Scale ``b = sensitivity / epsilon`` of the Laplace noise."""
        return self.sensitivity / self.epsilon


@dataclass(frozen=True)
class NoisyRelease:
    """A released noisy proportion. ``phat_star`` is never clipped."""

    phat_star: float
    n: int
    spec: PrivacySpec

    @property
    def phat_clamped(self) -> float:
        """Convenience view of the release clamped to [0, 1]."""
        return min(max(self.phat_star, 0.0), 1.0)


def clip_interval(lower_raw, upper_raw):
    """Clip a raw interval to [0, 1].

    Returns ``(lower, upper, out_of_bounds)``. A raw interval lying entirely
    outside [0, 1] collapses to the nearer boundary point.
    """
    if not lower_raw <= upper_raw:
        raise ValueError(f"lower_raw={lower_raw} exceeds upper_raw={upper_raw}")
    out_of_bounds = bool(lower_raw < 0.0 or upper_raw > 1.0)
    lower = max(float(lower_raw), 0.0)
    upper = min(float(upper_raw), 1.0)
    if upper < lower:
        lower = upper = 1.0 if lower_raw > 1.0 else 0.0
    return lower, upper, out_of_bounds


@dataclass(frozen=True)
class IntervalEstimate:
    lower: float
    upper: float
    lower_raw: float
    upper_raw: float
    level: float
    method: Method
    out_of_bounds: bool

    @classmethod
    def from_raw(cls, lower_raw, upper_raw, level, method):
        lower, upper, oob = clip_interval(lower_raw, upper_raw)
        return cls(lower, upper, float(lower_raw), float(upper_raw), level,
                   Method(method), oob)

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def contains(self, p) -> bool:
        return self.lower <= p <= self.upper


@dataclass(frozen=True)
class GridDistribution:
    """Normalized mass over the grid {0, 1/n, ..., 1}."""

    n: int
    log_weights: np.ndarray
    probs: np.ndarray = field(repr=False)

    @classmethod
    def from_log_weights(cls, log_weights):
        logw = np.asarray(log_weights, dtype=float)
        top = logw.max()
        if not math.isfinite(top):
            raise ValueError("degenerate grid distribution: no finite log-weight")
        w = np.exp(logw - top)
        probs = w / w.sum()
        return cls(len(logw) - 1, logw, probs)

    @property
    def grid(self) -> np.ndarray:
        return np.arange(self.n + 1) / self.n


def z_quantile(alpha) -> float:
    """Upper ``alpha/2`` standard normal quantile."""
    if not 0.0 < alpha < 1.0:
        raise ParameterError(f"alpha must lie in (0, 1), got {alpha}")
    # AS241 rational approximation, accurate to ~1e-16
    return NormalDist().inv_cdf(1.0 - alpha / 2.0)


def interp_quantile(values, prob) -> float:
    """Empirical quantile with linear interpolation between order statistics."""
    return float(np.quantile(np.asarray(values, dtype=float), prob, method="linear"))
