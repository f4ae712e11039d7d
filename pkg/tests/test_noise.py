"""Noise samplers against analytic moments and hand-computed cases."""

import numpy as np
import pytest

from uqdbench import noise
from uqdbench.errors import ConfigurationError, UsageError
from uqdbench.rng import RngStream


def stream(i=0):
    return RngStream(1234, i)


def draws_scalar(dist, n, sid=0):
    return np.array([noise.sample_scalar(dist, stream(sid).derive(k))
                     for k in range(n)])


def test_degenerate_bimodal_is_gaussian():
    # alpha = 1: every draw comes from mode 1 ~ N(0, sigma1^2)
    d = noise.bimodal(1.0, 0.0, 0.05, -1.0, 0.05)
    vals = np.array([noise.sample_scalar(d, stream(0).derive(k)) for k in range(2000)])
    assert np.all(vals > -0.5)  # the -1 mode never fires
    assert abs(vals.mean()) < 3 * 0.05 / np.sqrt(2000)
    assert abs(vals.std() - 0.05) < 0.05 * 0.1


def test_bimodal_mixture_mean():
    # analytic mixture mean (1 - alpha) * (-1) = -0.05
    d = noise.bimodal(0.95, 0.0, 0.05, -1.0, 0.05)
    rng = stream(7)
    vals = np.array([noise.sample_scalar(d, rng) for _ in range(200_000)])
    mean, var = noise.analytic_expectation(d)
    assert abs(mean[0] - (-0.05)) < 1e-15
    se = np.sqrt(var[0] / len(vals))
    assert abs(vals.mean() - mean[0]) < 3 * se


def test_gaussian_std_within_1pct():
    d = noise.gaussian(0.0, 0.7)
    rng = stream(3)
    vals = np.array([noise.sample_scalar(d, rng) for _ in range(200_000)])
    assert abs(vals.std() - 0.7) < 0.007


def test_vector_components_uncorrelated():
    d = noise.gaussian((0.0, 0.0), 1.0)
    rng = stream(4)
    vals = np.stack([noise.sample_vector2(d, rng) for _ in range(100_000)])
    corr = np.corrcoef(vals[:, 0], vals[:, 1])[0, 1]
    assert abs(corr) < 0.01


def test_bimodal_vector_mode_fraction():
    # both components > 0.5 <=> the (1,1) mode at sigma = 0.01
    d = noise.bimodal(0.95, (0.0, 0.0), 0.01, (1.0, 1.0), 0.01)
    rng = stream(5)
    n = 100_000
    vals = np.stack([noise.sample_vector2(d, rng) for _ in range(n)])
    frac = np.mean((vals[:, 0] > 0.5) & (vals[:, 1] > 0.5))
    assert abs(frac - 0.05) < 3 * np.sqrt(0.05 * 0.95 / n)


def test_tiny_sigma_mode1_draws_vanish():
    d = noise.bimodal(1.0, (0.0, 0.0), 1e-15, (1.0, 1.0), 1e-15)
    rng = stream(6)
    vals = np.stack([noise.sample_vector2(d, rng) for _ in range(100)])
    assert np.all(np.abs(vals) < 1e-12)


def test_two_sigma_positive_angles_low_branch():
    d = noise.two_sigma(0.001, 0.05)
    g = np.full(8, 0.5)
    rng = stream(8)
    vals = np.stack([noise.sample_conditional(d, g, rng) for _ in range(20_000)])
    assert abs(vals.std() - 0.001) < 0.001 * 0.05


def test_two_sigma_negative_product_high_branch():
    d = noise.two_sigma(0.001, 0.05)
    g = np.full(8, 0.5)
    g[0] = -0.5  # odd number of negatives
    rng = stream(9)
    vals = np.stack([noise.sample_conditional(d, g, rng) for _ in range(20_000)])
    assert abs(vals.std() - 0.05) < 0.05 * 0.05


def test_sign_zero_counts_as_nonneg():
    d = noise.two_sigma(0.001, 0.05)
    g = np.full(8, -0.5)
    g[0] = 0.0  # product is 0 -> low-variance branch
    assert noise.conditional_sigmas(d, g[None, :])[0] == 0.001


def test_continuous_equal_angles_degenerate():
    d = noise.continuous_sigma(0.02)
    g = np.full(8, 1.1)
    rng = stream(10)
    for _ in range(50):
        assert np.array_equal(noise.sample_conditional(d, g, rng), np.zeros(2))


def test_continuous_hand_computed_sigma():
    # V(1, 1, -1, -1) = 1, so std = eta
    d = noise.continuous_sigma(0.02)
    g = np.array([1.0, 1.0, -1.0, -1.0])
    rng = stream(11)
    vals = np.stack([noise.sample_conditional(d, g, rng) for _ in range(100_000)])
    assert abs(vals.std() - 0.02) < 0.02 * 0.02


def test_analytic_expectation_gaussian():
    mean, var = noise.analytic_expectation(noise.gaussian(0.0, 0.5))
    assert mean[0] == 0.0 and var[0] == 0.25


def test_analytic_expectation_bimodal():
    mean, var = noise.analytic_expectation(
        noise.bimodal(0.95, 0.0, 0.05, -1.0, 0.05))
    assert abs(mean[0] - (-0.05)) < 1e-15
    # mixture variance: E[sigma^2] + spread of the means
    want = 0.0025 + 0.95 * 0.05 * 1.0
    assert abs(var[0] - want) < 1e-15


def test_analytic_expectation_conditional_absent():
    assert noise.analytic_expectation(noise.continuous_sigma(0.02)) is None
    assert noise.analytic_expectation(noise.two_sigma(0.01, 0.5)) is None


def test_sampler_determinism():
    d = noise.bimodal(0.9, 0.0, 0.1, 3.0, 0.2)
    a = [noise.sample_scalar(d, stream(12)) for _ in range(1)]
    b = [noise.sample_scalar(d, stream(12)) for _ in range(1)]
    assert a == b
    rng1, rng2 = stream(13), stream(13)
    va = [noise.sample_scalar(d, rng1) for _ in range(50)]
    vb = [noise.sample_scalar(d, rng2) for _ in range(50)]
    assert va == vb


def test_usage_errors():
    with pytest.raises(UsageError):
        noise.sample_scalar(noise.two_sigma(0.01, 0.5), stream())
    with pytest.raises(UsageError):
        noise.sample_vector2(noise.continuous_sigma(1.0), stream())
    with pytest.raises(UsageError):
        noise.sample_conditional(noise.gaussian(0.0, 1.0), np.zeros(8), stream())
    with pytest.raises(UsageError):
        noise.sample_scalar(noise.no_noise(), stream())


def test_validation_errors():
    with pytest.raises(ConfigurationError):
        noise.gaussian(0.0, 0.0)
    with pytest.raises(ConfigurationError):
        noise.bimodal(0.0, 0.0, 0.1, 1.0, 0.1)
    with pytest.raises(ConfigurationError):
        noise.bimodal(1.5, 0.0, 0.1, 1.0, 0.1)
    with pytest.raises(ConfigurationError):
        noise.two_sigma(0.01, 0.05)  # sigma2 < 10 * sigma1
    with pytest.raises(ConfigurationError):
        noise.continuous_sigma(0.0)


def test_scalar_matches_block_path():
    # the scalar samplers and the batched block path must agree exactly
    from uqdbench import _backend
    d = noise.bimodal(0.8, 0.0, 0.2, 5.0, 0.3)
    sids = np.arange(100, dtype=np.uint64)
    blocks = _backend.philox_many(1234, sids, 1)
    batch = noise.sample_scalar_from_blocks(d, blocks)
    single = np.array([noise.sample_scalar(d, RngStream(1234, int(s))) for s in sids])
    assert np.array_equal(batch, single)
