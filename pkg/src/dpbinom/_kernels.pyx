# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops.

Draws come straight from the Generator's bit generator through numpy's own C
distribution routines, so for a given seed these kernels consume exactly the
same stream as the pure-Python versions in ``_kernels_py``.
"""

import numpy as np
cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid
from libc.math cimport exp, log, log1p
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport random_standard_gamma

cnp.import_array()

cdef double BETA_CLAMP = 1e-12


cdef bitgen_t *_bitgen(rng) except NULL:
    capsule = rng.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, "BitGenerator"):
        raise ValueError("invalid bit generator capsule")
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


cdef void _gibbs_loop(bitgen_t *bg, double[::1] base_logw, double a_add, double b_add,
                      Py_ssize_t k, Py_ssize_t burn_in, Py_ssize_t total, Py_ssize_t thin,
                      double[::1] lw, double[::1] cum,
                      double[::1] q_draws, long long[::1] k_draws) noexcept nogil:
    cdef Py_ssize_t n = base_logw.shape[0] - 1
    cdef Py_ssize_t it, j, kept
    cdef double ga, gb, q, lq, l1q, mx, c, target
    for it in range(total):
        ga = random_standard_gamma(bg, k + a_add)
        gb = random_standard_gamma(bg, (n - k) + b_add)
        q = ga / (ga + gb)
        if q < BETA_CLAMP:
            q = BETA_CLAMP
        elif q > 1.0 - BETA_CLAMP:
            q = 1.0 - BETA_CLAMP
        lq = log(q)
        l1q = log1p(-q)
        mx = -1e308
        for j in range(n + 1):
            lw[j] = base_logw[j] + j * lq + (n - j) * l1q
            if lw[j] > mx:
                mx = lw[j]
        c = 0.0
        for j in range(n + 1):
            c = c + exp(lw[j] - mx)
            cum[j] = c
        target = bg.next_double(bg.state) * c
        k = n
        for j in range(n + 1):
            if cum[j] > target:
                k = j
                break
        kept = it - burn_in
        if kept >= 0 and kept % thin == thin - 1:
            q_draws[kept // thin] = q
            k_draws[kept // thin] = k


def gibbs_chain(rng, double[::1] base_logw, double a_add, double b_add,
                Py_ssize_t k0, Py_ssize_t burn_in, Py_ssize_t draws, Py_ssize_t thin=1):
    cdef Py_ssize_t n = base_logw.shape[0] - 1
    cdef bitgen_t *bg = _bitgen(rng)
    q_out = np.empty(draws, dtype=np.float64)
    k_out = np.empty(draws, dtype=np.int64)
    cdef double[::1] lw = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] cum = np.empty(n + 1, dtype=np.float64)
    cdef double[::1] q_view = q_out
    cdef long long[::1] k_view = k_out
    with rng.bit_generator.lock:
        with nogil:
            _gibbs_loop(bg, base_logw, a_add, b_add, k0, burn_in, burn_in + draws * thin, thin,
                        lw, cum, q_view, k_view)
    return q_out, k_out


def tail_counts(double[::1] cdf, double[::1] uniforms, double[::1] noise, double obs):
    cdef Py_ssize_t n = cdf.shape[0] - 1
    cdef Py_ssize_t s, lo, hi, mid, S = uniforms.shape[0]
    cdef long long n_ge = 0, n_le = 0
    cdef double u, x
    with nogil:
        for s in range(S):
            u = uniforms[s]
            lo = 0
            hi = n + 1
            while lo < hi:
                mid = (lo + hi) // 2
                if cdf[mid] < u:
                    lo = mid + 1
                else:
                    hi = mid
            if lo > n:
                lo = n
            x = (<double> lo) / n + noise[s]
            if x >= obs:
                n_ge += 1
            if x <= obs:
                n_le += 1
    return n_ge, n_le
