"""Confidence intervals for binomial proportions released under differential privacy."""

from .bayes_intervals import GibbsConfig, Prior, bayes_interval, posterior_quadrature
from .classical_intervals import wald, wilson
from .core import (ConfigError, GridDistribution, IntervalEstimate, Mechanism, Method,
                   NoisyRelease, ParameterError, PrivacySpec, UnsupportedMechanismError,
                   clip_interval)
from .exact_interval import exact_interval
from .kernels import BACKEND
from .mechanisms import (ConfidentialSample, release, release_discrete_gaussian,
                         release_laplace, renyi_epsilon)
from .plugin_intervals import plugin_wald, plugin_wilson, wilson_quadratic_analysis
from .randkit import RNG_VERSION, make_rng
from .sim_harness import RunMetrics, Scenario, run_grid, run_scenario
from .twostep_interval import twostep_interval

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "RNG_VERSION", "ConfidentialSample", "ConfigError", "GibbsConfig",
    "GridDistribution", "IntervalEstimate", "Mechanism", "Method", "NoisyRelease",
    "ParameterError", "Prior", "PrivacySpec", "RunMetrics", "Scenario",
    "UnsupportedMechanismError", "bayes_interval", "clip_interval", "exact_interval",
    "make_rng", "plugin_wald", "plugin_wilson", "posterior_quadrature", "release",
    "release_discrete_gaussian", "release_laplace", "renyi_epsilon", "run_grid",
    "run_scenario", "twostep_interval", "wald", "wilson", "wilson_quadratic_analysis",
]
