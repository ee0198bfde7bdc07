import numpy as np
import pytest

from dpbinom.core import Mechanism, ParameterError, PrivacySpec
from dpbinom.mechanisms import (ConfidentialSample, release, release_discrete_gaussian,
                                release_laplace, renyi_epsilon)
from dpbinom.randkit import laplace_from_uniform, make_rng


def test_confidential_sample_bounds():
    assert ConfidentialSample(3, 10).phat == 0.3
    with pytest.raises(ParameterError):
        ConfidentialSample(11, 10)
    with pytest.raises(ParameterError):
        ConfidentialSample(0, 0)


class TestLaplaceRelease:
    def test_zero_noise(self, rng):
        rel = release_laplace(ConfidentialSample(20, 100), 1.0, rng,
                              noise=laplace_from_uniform(0.5, 0.01))
        assert rel.phat_star == 0.2
        assert rel.spec.mechanism is Mechanism.LAPLACE
        assert rel.spec.sensitivity == pytest.approx(0.01)

    def test_variance(self):
        rng = make_rng(8)
        s = ConfidentialSample(30, 100)
        x = np.array([release_laplace(s, 0.5, rng).phat_star for _ in range(10 ** 6)]) - 0.3
        assert x.var() == pytest.approx(2 / (100 * 0.5) ** 2, rel=0.02)

    def test_may_be_negative(self):
        rng = make_rng(9)
        s = ConfidentialSample(0, 100)
        x = np.array([release_laplace(s, 0.1, rng).phat_star for _ in range(10 ** 5)])
        assert np.mean(x < 0) == pytest.approx(0.5, abs=0.01)

    def test_unbiased(self):
        rng = make_rng(10)
        s = ConfidentialSample(7, 10)
        x = np.array([release_laplace(s, 0.3, rng).phat_star for _ in range(10 ** 5)])
        se = np.sqrt(2) / (10 * 0.3) / np.sqrt(x.size)
        assert abs(x.mean() - 0.7) < 3 * se

    def test_bad_epsilon(self, rng):
        with pytest.raises(ParameterError):
            release_laplace(ConfidentialSample(1, 2), 0.0, rng)


class TestDiscreteGaussianRelease:
    def test_zero_noise(self, rng):
        spec = PrivacySpec.discrete_gaussian(100, 1.0)
        assert release_discrete_gaussian(ConfidentialSample(50, 100), spec, rng, noise=0).phat_star == 0.5

    def test_mostly_exact(self):
        rng = make_rng(11)
        spec = PrivacySpec.discrete_gaussian(100, 0.3)
        s = ConfidentialSample(40, 100)
        x = np.array([release(s, spec, rng).phat_star for _ in range(10 ** 4)])
        assert np.mean(x == 0.4) >= 0.999

    def test_grid_valued_and_unbiased(self):
        rng = make_rng(12)
        spec = PrivacySpec.discrete_gaussian(20, 1.0, sigma2=4.0)
        s = ConfidentialSample(10, 20)
        x = np.array([release(s, spec, rng).phat_star for _ in range(10 ** 5)])
        counts = x * 20
        np.testing.assert_allclose(counts, np.round(counts), atol=1e-9)
        assert abs(x.mean() - 0.5) < 3 * (2.0 / 20) / np.sqrt(x.size)

    def test_wrong_mechanism(self, rng):
        with pytest.raises(ParameterError):
            release_discrete_gaussian(ConfidentialSample(1, 10), PrivacySpec.laplace(10, 1.0), rng)

    def test_n_mismatch(self, rng):
        with pytest.raises(ParameterError):
            release_discrete_gaussian(ConfidentialSample(1, 10),
                                      PrivacySpec.discrete_gaussian(11, 1.0), rng)


class TestRenyi:
    def test_values(self):
        assert renyi_epsilon(1.0, 2.0) == 1.0
        assert renyi_epsilon(0.01, 2.0) == pytest.approx(100.0)

    def test_scaling(self):
        assert renyi_epsilon(2.0, 3.0) == pytest.approx(renyi_epsilon(1.0, 3.0) / 2)

    def test_bad_order(self):
        with pytest.raises(ParameterError):
            renyi_epsilon(1.0, 1.0)
