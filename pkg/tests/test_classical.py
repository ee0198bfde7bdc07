import numpy as np
import pytest

from dpbinom.classical_intervals import wald, wilson

Z = 1.959964


def test_wald_zero_is_degenerate():
    assert wald(0.0, 37) == (0.0, 0.0)


@pytest.mark.parametrize("phat,expected", [(0.5, (0.40200, 0.59800)), (0.1, (0.04120, 0.15880))])
def test_wald_hand_values(phat, expected):
    np.testing.assert_allclose(wald(phat, 100, 0.05), expected, atol=1e-4)


def test_wald_unclipped():
    lo, hi = wald(0.02, 10)
    assert lo < 0


def test_wilson_zero():
    lo, hi = wilson(0.0, 100, 0.05)
    assert lo == 0.0
    assert hi == pytest.approx(Z ** 2 / (100 + Z ** 2), abs=1e-4)
    assert hi == pytest.approx(0.03700, abs=1e-4)


def test_wilson_half():
    lo, hi = wilson(0.5, 100, 0.05)
    assert (lo, hi) == pytest.approx((0.40383, 0.59617), abs=1e-4)
    assert lo + hi == pytest.approx(1.0, abs=1e-15)


def test_wilson_vectorized_matches_scalar():
    grid = np.linspace(0, 1, 11)
    lo, hi = wilson(grid, 10, 0.1)
    for i, p in enumerate(grid):
        assert (lo[i], hi[i]) == pytest.approx(wilson(float(p), 10, 0.1), abs=1e-15)


def test_converge_at_large_n():
    np.testing.assert_allclose(wald(0.5, 10 ** 6), wilson(0.5, 10 ** 6), atol=1e-5)
