"""Pure-Python versions of the compiled kernels.

Each function consumes the Generator's stream in the same order as its
counterpart in ``_kernels.pyx`` and performs the same floating-point steps.
"""

import math

import numpy as np

from .randkit import sample_beta


def gibbs_chain(rng, base_logw, a_add, b_add, k0, burn_in, draws, thin=1):
    base_logw = np.asarray(base_logw, dtype=float)
    n = len(base_logw) - 1
    j = np.arange(n + 1, dtype=float)
    nj = n - j
    q_draws = np.empty(draws)
    k_draws = np.empty(draws, dtype=np.int64)
    k = int(k0)
    for it in range(burn_in + draws * thin):
        q = sample_beta(rng, k + a_add, (n - k) + b_add)
        lw = base_logw + j * math.log(q) + nj * math.log1p(-q)
        cum = np.cumsum(np.exp(lw - lw.max()))
        target = rng.random() * cum[-1]
        k = min(int(np.searchsorted(cum, target, side="right")), n)
        kept = it - burn_in
        if kept >= 0 and kept % thin == thin - 1:
            q_draws[kept // thin] = q
            k_draws[kept // thin] = k
    return q_draws, k_draws


def tail_counts(cdf, uniforms, noise, obs):
    n = len(cdf) - 1
    k = np.minimum(np.searchsorted(cdf, uniforms, side="left"), n)
    x = k / n + noise
    return int(np.count_nonzero(x >= obs)), int(np.count_nonzero(x <= obs))
