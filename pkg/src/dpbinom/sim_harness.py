"""Repeated-sampling experiments: coverage, average length, out-of-bound rate.

Every replication seeds its own generator from (master seed, scenario id,
replication index), so results do not depend on how replications are spread
over worker threads. Aggregation runs in replication order.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bayes_intervals import GibbsConfig, Prior, bayes_interval
from .core import ConfigError, Mechanism, Method, PrivacySpec
from .exact_interval import DEFAULT_J, exact_interval
from .mechanisms import ConfidentialSample, release
from .plugin_intervals import plugin_wald, plugin_wilson
from .randkit import derive_child_seed, make_rng, sample_binomial
from .twostep_interval import twostep_interval

DESIGN_NS = (100, 1000)
DESIGN_PS = (0.1, 0.2, 0.5, 0.8)
DESIGN_EPSILONS = (0.1, 0.3, 0.5, 5.0)
LAPLACE_METHODS = (Method.WALD_PLUGIN, Method.WILSON_PLUGIN, Method.BAYES_UNIFORM,
                   Method.BAYES_JEFFREYS, Method.TWO_STEP, Method.EXACT)
DISCRETE_GAUSSIAN_METHODS = (Method.BAYES_UNIFORM, Method.BAYES_JEFFREYS)


@dataclass(frozen=True)
class Scenario:
    method: Method
    mechanism: Mechanism
    n: int
    p_true: float
    epsilon: float
    alpha: float = 0.05
    runs: int = 1000
    seed: int = 0
    draws: int = 5000
    burn_in: int = 500
    T: int = 5000
    S: int = 5000
    sigma2: float | None = None
    scenario_id: int = 0
    literal_likelihood: bool = False
    grid_exact: bool = False

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "mechanism", Mechanism(self.mechanism))

    def validate(self):
        if self.runs < 1:
            raise ConfigError("runs must be at least 1")
        if not 0.0 < self.p_true < 1.0:
            raise ConfigError(f"p_true must lie in (0, 1), got {self.p_true}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must lie in (0, 1), got {self.alpha}")
        allowed = (LAPLACE_METHODS if self.mechanism is Mechanism.LAPLACE
                   else DISCRETE_GAUSSIAN_METHODS)
        if self.method not in allowed:
            raise ConfigError(f"method {self.method.value} is not available for the "
                              f"{self.mechanism.value} mechanism")
        self.privacy_spec()
        if self.method in (Method.BAYES_UNIFORM, Method.BAYES_JEFFREYS):
            self.gibbs_config()
        if self.method is Method.TWO_STEP and self.T < 100:
            raise ConfigError("T must be at least 100")
        if self.method is Method.EXACT and self.S < 1:
            raise ConfigError("S must be positive")

    def privacy_spec(self):
        if self.mechanism is Mechanism.LAPLACE:
            return PrivacySpec.laplace(self.n, self.epsilon)
        return PrivacySpec.discrete_gaussian(self.n, self.epsilon, self.sigma2)

    def gibbs_config(self):
        prior = Prior.UNIFORM if self.method is Method.BAYES_UNIFORM else Prior.JEFFREYS
        return GibbsConfig(draws=self.draws, burn_in=self.burn_in, prior=prior)


@dataclass(frozen=True)
class RunMetrics:
    coverage: float
    avg_length: float
    oob_rate: float
    runs_completed: int
    mean_lower: float
    mean_upper: float
    # Length before clipping; equals avg_length for methods that never clip.
    avg_raw_length: float = float("nan")


@dataclass(frozen=True)
class ScenarioResult:
    scenario: Scenario
    metrics: RunMetrics | None
    error: str | None = None


def estimate(method, rel, sc, rng):
    """Interval for ``rel`` under ``sc``'s method settings."""
    if method is Method.WALD_PLUGIN:
        return plugin_wald(rel, sc.alpha)
    if method is Method.WILSON_PLUGIN:
        return plugin_wilson(rel, sc.alpha)
    if method in (Method.BAYES_UNIFORM, Method.BAYES_JEFFREYS):
        est, _ = bayes_interval(rel, sc.gibbs_config(), sc.alpha, rng, sc.literal_likelihood)
        return est
    if method is Method.TWO_STEP:
        return twostep_interval(rel, sc.T, sc.alpha, rng, sc.literal_likelihood)
    if method is Method.EXACT:
        return exact_interval(rel, sc.S, sc.alpha, rng, grid=sc.grid_exact, J=DEFAULT_J)
    raise ConfigError(f"method {method.value} is not supported by the harness")


def run_replication(sc, r, spec=None):
    """One replication: returns ``(lower, upper, out_of_bounds, raw_length)``."""
    rng = make_rng(derive_child_seed(sc.seed, sc.scenario_id, r))
    k = sample_binomial(rng, sc.n, sc.p_true)
    rel = release(ConfidentialSample(k, sc.n), spec or sc.privacy_spec(), rng)
    est = estimate(sc.method, rel, sc, rng)
    return est.lower, est.upper, est.out_of_bounds, est.upper_raw - est.lower_raw


def _default_threads():
    return os.cpu_count() or 1


def run_scenario(sc, threads=None, progress=None) -> RunMetrics:
    """Run all replications of ``sc``.

    ``progress(done, total)`` is called as chunks of replications finish.
    """
    sc.validate()
    spec = sc.privacy_spec()
    threads = threads or _default_threads()
    lower = np.empty(sc.runs)
    upper = np.empty(sc.runs)
    oob = np.zeros(sc.runs, dtype=bool)
    raw_len = np.empty(sc.runs)

    def work(chunk):
        for r in chunk:
            lower[r], upper[r], oob[r], raw_len[r] = run_replication(sc, r, spec)
        return len(chunk)

    chunk_size = max(1, min(50, sc.runs // (4 * threads) or 1))
    chunks = [range(i, min(i + chunk_size, sc.runs)) for i in range(0, sc.runs, chunk_size)]
    done = 0
    if threads == 1:
        results = map(work, chunks)
        pool = None
    else:
        pool = ThreadPoolExecutor(max_workers=threads)
        results = pool.map(work, chunks)
    try:
        for count in results:
            done += count
            if progress is not None:
                progress(done, sc.runs)
    finally:
        if pool is not None:
            pool.shutdown()

    covered = int(np.count_nonzero((lower <= sc.p_true) & (sc.p_true <= upper)))
    n_oob = int(np.count_nonzero(oob))
    return RunMetrics(
        coverage=covered / sc.runs,
        avg_length=float(np.sum(upper - lower)) / sc.runs,
        oob_rate=n_oob / sc.runs,
        runs_completed=sc.runs,
        mean_lower=float(np.sum(lower)) / sc.runs,
        mean_upper=float(np.sum(upper)) / sc.runs,
        avg_raw_length=float(np.sum(raw_len)) / sc.runs,
    )


def run_grid(scenarios, threads=None, progress=None):
    """Run scenarios in order; a failing scenario is reported, not raised.

    ``progress(scenario_index, done, total)`` reports replication counts.
    """
    out = []
    for i, sc in enumerate(scenarios):
        cb = None if progress is None else (lambda d, t, i=i: progress(i, d, t))
        try:
            out.append(ScenarioResult(sc, run_scenario(sc, threads, cb)))
        except (ConfigError, ValueError, ArithmeticError) as exc:
            out.append(ScenarioResult(sc, None, f"{type(exc).__name__}: {exc}"))
    return out


def build_grid(methods, mechanisms, ns, ps, epsilons, alphas=(0.05,), **common):
    """Cross product of the listed settings, ids assigned in grid order."""
    scenarios = []
    combos = itertools.product(methods, mechanisms, ns, ps, epsilons, alphas)
    for i, (method, mech, n, p, eps, alpha) in enumerate(combos):
        scenarios.append(Scenario(method=method, mechanism=mech, n=n, p_true=p, epsilon=eps,
                                  alpha=alpha, scenario_id=i, **common))
    return scenarios


def pure_dp_design_grid(runs=5000, seed=0, **common):
    """The full pure-DP design: 6 methods x 2 n x 4 p x 4 epsilon."""
    return build_grid(LAPLACE_METHODS, [Mechanism.LAPLACE], DESIGN_NS, DESIGN_PS,
                      DESIGN_EPSILONS, runs=runs, seed=seed, **common)


def renyi_design_grid(runs=5000, seed=0, **common):
    """Discrete Gaussian design: uniform-prior Bayes over 2 n x 4 p x 4 epsilon."""
    return build_grid([Method.BAYES_UNIFORM], [Mechanism.DISCRETE_GAUSSIAN], DESIGN_NS,
                      DESIGN_PS, DESIGN_EPSILONS, runs=runs, seed=seed, **common)
