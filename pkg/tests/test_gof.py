import numpy as np
import pytest
from scipy import stats

from btbm import gof, kernel
from btbm.errors import InvalidArgumentError
from btbm.processes import ProcessVariant, sample_terminal


def test_too_few_samples():
    with pytest.raises(InvalidArgumentError):
        gof.ks_test(np.zeros(99), stats.norm.cdf)


def test_bad_weights():
    x = np.random.default_rng(0).standard_normal(200)
    with pytest.raises(InvalidArgumentError):
        gof.ks_test(x, stats.norm.cdf, -np.ones(200))
    with pytest.raises(InvalidArgumentError):
        gof.ks_test(x, stats.norm.cdf, np.ones(100))
    with pytest.raises(InvalidArgumentError):
        gof.ks_test(x, stats.norm.cdf, np.zeros(200))


def test_statistic_matches_scipy():
    x = np.random.default_rng(1).standard_normal(500)
    assert gof.ks_statistic(x, stats.norm.cdf) == pytest.approx(stats.kstest(x, "norm").statistic, abs=1e-14)


def test_unit_weights_equal_unweighted_statistic():
    x = np.random.default_rng(2).standard_normal(400)
    assert gof.ks_statistic(x, stats.norm.cdf, np.full(400, 3.0)) == pytest.approx(gof.ks_statistic(x, stats.norm.cdf))


def test_null_calibration_against_kernel_cdf():
    F = kernel.cdf_function(1.0)
    p = np.array([gof.ks_test(sample_terminal(ProcessVariant.simple(), 1.0, 10_000, s)[0], F).pvalue
                  for s in range(200)])
    # p-values are roughly uniform
    assert stats.kstest(p, "uniform").pvalue > 0.001
    assert np.mean(p < 0.01) < 0.04


def test_power_against_gaussian():
    x = np.random.default_rng(3).standard_normal(10_000)
    assert gof.ks_test(x, kernel.cdf_function(1.0)).pvalue < 1e-3


def test_power_against_shift():
    x, _ = sample_terminal(ProcessVariant.simple(), 1.0, 10_000, 4)
    assert gof.ks_test(x + 0.1, kernel.cdf_function(1.0)).pvalue < 1e-3


def test_weighted_null_calibration():
    # importance weights for N(0.3, 1) from N(0, 1) draws: exact lognormal weights
    rejections = 0
    for s in range(100):
        z = np.random.default_rng(100 + s).standard_normal(5000)
        w = np.exp(0.3 * z - 0.045)
        rejections += gof.ks_test(z, stats.norm(0.3).cdf, w, n_boot=199, seed=s).pvalue < 0.05
    assert rejections <= 12


def test_weighted_power():
    z = np.random.default_rng(5).standard_normal(5000)
    w = np.exp(0.3 * z - 0.045)
    assert gof.ks_test(z, stats.norm(0.0).cdf, w, n_boot=199).pvalue < 0.01


def test_weighted_deterministic_for_seed():
    z = np.random.default_rng(6).standard_normal(1000)
    w = np.exp(0.5 * z)
    a = gof.ks_test(z, stats.norm(0.5).cdf, w, n_boot=99, seed=3)
    b = gof.ks_test(z, stats.norm(0.5).cdf, w, n_boot=99, seed=3)
    assert a == b


def test_kish():
    assert gof.kish_ess(np.ones(10)) == pytest.approx(10)
    assert gof.kish_ess([1.0, 0.0, 0.0]) == pytest.approx(1)


def test_two_sample():
    g = np.random.default_rng(7)
    assert gof.two_sample_test(g.standard_normal(1000), g.standard_normal(1000)).pvalue > 0.001
    assert gof.two_sample_test(g.standard_normal(1000), 0.5 + g.standard_normal(1000)).pvalue < 1e-6
    with pytest.raises(InvalidArgumentError):
        gof.two_sample_test(np.zeros(10), np.zeros(1000))
