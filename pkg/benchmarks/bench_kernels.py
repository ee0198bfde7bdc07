"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5]

Both backends consume the same random stream, so the script also checks that
their outputs agree before reporting timings.
"""

import argparse
import time

import numpy as np

from dpbinom import kernels
from dpbinom.bayes_intervals import log_binom_coeffs, noise_log_likelihood
from dpbinom.core import NoisyRelease, PrivacySpec
from dpbinom.exact_interval import TailSimulator
from dpbinom.randkit import binomial_cdf, make_rng


def gibbs_case(n, draws):
    rel = NoisyRelease(0.31, n, PrivacySpec.laplace(n, 0.3))
    base = np.ascontiguousarray(noise_log_likelihood(rel) + log_binom_coeffs(n))

    def run(mod):
        return mod.gibbs_chain(make_rng(1), base, 1.0, 1.0, n // 3, 500, draws)
    return f"gibbs n={n} draws={draws}", run


def tail_case(n, S, evals):
    sim = TailSimulator.build(n, 0.3, S, make_rng(2))
    cdfs = [binomial_cdf(n, p) for p in np.linspace(0.05, 0.95, evals)]

    def run(mod):
        return [mod.tail_counts(c, sim.common_uniforms, sim.common_noise, 0.31) for c in cdfs]
    return f"tail_counts n={n} S={S} x{evals}", run


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    mods = kernels.backends()
    if "cython" not in mods:
        print("compiled kernels are not built; only the Python backend is available")
    cases = [gibbs_case(100, 5000), gibbs_case(1000, 2000), tail_case(100, 5000, 40)]
    header = f"{'case':34s}" + "".join(f"{name:>12s}" for name in mods) + f"{'speedup':>10s}"
    print(header)
    for label, run in cases:
        timings, outputs = {}, {}
        for name, mod in mods.items():
            timings[name], outputs[name] = best_of(lambda: run(mod), args.repeat)
        row = f"{label:34s}" + "".join(f"{timings[n] * 1e3:10.1f}ms" for n in mods)
        if "cython" in mods:
            a, b = outputs["python"], outputs["cython"]
            if isinstance(a, tuple):
                same = all(np.array_equal(x, y) for x, y in zip(a, b))
            else:
                same = a == b
            row += f"{timings['python'] / timings['cython']:9.1f}x"
            if not same:
                row += "  OUTPUTS DIFFER"
        print(row)


if __name__ == "__main__":
    main()
