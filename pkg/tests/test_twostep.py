import math

import numpy as np
import pytest

from dpbinom.classical_intervals import wilson
from dpbinom.core import (ConfigError, Method, NoisyRelease, PrivacySpec,
                          UnsupportedMechanismError, interp_quantile)
from dpbinom.randkit import make_rng
from dpbinom.twostep_interval import draw_qhat_indices, qhat_posterior_weights, twostep_interval


def lap(x, n, eps):
    return NoisyRelease(x, n, PrivacySpec.laplace(n, eps))


class TestWeights:
    def test_normalized(self):
        d = qhat_posterior_weights(0.23, 100, 0.3)
        assert abs(d.probs.sum() - 1) < 1e-12

    def test_noise_free_concentrates(self):
        d = qhat_posterior_weights(0.37, 100, 1e9)
        assert d.probs[37] >= 1 - 1e-9

    def test_five_cells_by_hand(self):
        d = qhat_posterior_weights(0.5, 4, 0.5)
        w = np.array([math.exp(-abs(0.5 - k / 4) * 4 * 0.5) for k in range(5)])
        np.testing.assert_allclose(d.probs, w / w.sum(), atol=1e-14)

    def test_no_binomial_term(self):
        # flat prior: weights symmetric around the release even near the edge
        d = qhat_posterior_weights(0.1, 10, 1.0)
        assert d.probs[0] == pytest.approx(d.probs[2])

    def test_bad_epsilon(self):
        with pytest.raises(ValueError):
            qhat_posterior_weights(0.5, 10, 0.0)


class TestInterval:
    def test_noise_free_is_wilson(self):
        est = twostep_interval(lap(0.37, 100, 1e9), 5000, 0.05, make_rng(1))
        assert (est.lower, est.upper) == pytest.approx(wilson(0.37, 100), abs=1e-9)

    def test_table_lookup_matches_naive(self):
        r = lap(0.42, 50, 0.4)
        idx = draw_qhat_indices(make_rng(2), qhat_posterior_weights(0.42, 50, 0.4), 3000)
        est = twostep_interval(r, 3000, 0.05, indices=idx)
        bounds = [wilson(k / 50, 50, 0.05) for k in idx]
        assert est.lower == interp_quantile([b[0] for b in bounds], 0.025)
        assert est.upper == interp_quantile([b[1] for b in bounds], 0.975)

    def test_contains_modal_wilson(self):
        r = lap(0.3, 100, 0.5)
        est = twostep_interval(r, 2000, 0.05, make_rng(3))
        mode = np.argmax(qhat_posterior_weights(0.3, 100, 0.5).probs)
        lo, hi = wilson(mode / 100, 100)
        assert est.lower <= lo and hi <= est.upper
        assert est.method is Method.TWO_STEP and not est.out_of_bounds

    def test_t_validated(self):
        with pytest.raises(ConfigError):
            twostep_interval(lap(0.5, 10, 1.0), 99, 0.05, make_rng(0))

    def test_rejects_discrete_gaussian(self):
        r = NoisyRelease(0.5, 10, PrivacySpec.discrete_gaussian(10, 1.0))
        with pytest.raises(UnsupportedMechanismError):
            twostep_interval(r, 1000, 0.05, make_rng(0))
