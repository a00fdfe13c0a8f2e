"""Unit tests for the empirical CDF, KS distance and Beta CDF helpers."""

import numpy as np
import pytest

from mixedurn.errors import ParameterError
from mixedurn.rng import RngStream
from mixedurn.stats import Ecdf, beta_cdf, ks_statistic, uniform_cdf


@pytest.mark.parametrize("x", [0.0, 0.25, 1.0])
def test_beta_one_one_is_uniform(x: float):
    assert beta_cdf(1, 1, x) == pytest.approx(x, abs=1e-15)


@pytest.mark.parametrize("a", [0.5, 1, 3.7, 40, 100])
def test_beta_cdf_symmetric_at_one_half(a: float):
    assert beta_cdf(a, a, 0.5) == pytest.approx(0.5, abs=1e-12)


def test_beta_cdf_reflection_identity():
    rng = np.random.default_rng(2024)
    grid = np.linspace(0, 1, 100)
    for a, b in rng.uniform(0.1, 100, size=(20, 2)):
        forward = beta_cdf(a, b, grid)
        reflected = 1 - beta_cdf(b, a, 1 - grid)
        np.testing.assert_allclose(forward, reflected, atol=1e-10)


def test_beta_cdf_is_monotone_with_exact_endpoints():
    values = beta_cdf(2.5, 0.7, np.linspace(0, 1, 1001))

    assert values[0] == 0.0
    assert values[-1] == 1.0
    assert np.all(np.diff(values) >= -1e-15)


@pytest.mark.parametrize("a, b, x", [(0, 1, 0.5), (1, -2, 0.5), (1, 1, 1.5), (1, 1, -0.1)])
def test_beta_cdf_domain_errors(a, b, x):
    with pytest.raises(ParameterError):
        beta_cdf(a, b, x)


def test_ks_hand_computed_example():
    samples = Ecdf.from_samples(np.array([0.75, 0.25, 0.5]))

    assert ks_statistic(samples, uniform_cdf) == pytest.approx(0.25)


def test_ks_single_sample():
    assert ks_statistic(Ecdf.from_samples(np.array([0.5])), uniform_cdf) == 0.5


@pytest.mark.parametrize("n", [1, 9, 250])
def test_ks_of_uniform_quantiles_matches_brute_force(n: int):
    samples = Ecdf.from_samples(np.arange(1, n + 1) / (n + 1))
    grid = np.linspace(0, 1, 100_001)
    # sup is attained at a jump, so check both one-sided limits there too
    right = np.abs(samples.cdf(grid) - grid).max()
    left_limits = np.arange(n) / n
    at_jumps = np.maximum(
        np.abs(samples.cdf(samples.samples) - samples.samples),
        np.abs(left_limits - samples.samples),
    ).max()
    brute_force = max(right, at_jumps)

    distance = ks_statistic(samples, uniform_cdf)

    assert distance == pytest.approx(1 / (n + 1), abs=1e-12)
    assert distance == pytest.approx(brute_force, abs=1e-6)


def test_ks_of_uniform_stream_is_small():
    xs = RngStream(42).uniforms(100_000)

    distance = ks_statistic(Ecdf.from_samples(xs), uniform_cdf)

    assert distance < 1.95 / np.sqrt(xs.size)


def test_ks_against_own_ecdf_is_one_over_n():
    # F(x_i) = i/n, so the (i-1)/n side of every jump is 1/n away
    samples = Ecdf.from_samples(np.array([0.1, 0.4, 0.7, 0.9]))

    assert ks_statistic(samples, samples.cdf) == pytest.approx(1 / samples.n)


def test_distance_between_identical_samples_is_zero():
    samples = Ecdf.from_samples(RngStream(3).uniforms(500))

    assert samples.distance(samples) == 0.0


def test_distance_between_shifted_samples():
    low = Ecdf.from_samples(np.array([0.1, 0.2]))
    high = Ecdf.from_samples(np.array([0.8, 0.9]))

    assert low.distance(high) == 1.0


def test_ecdf_sorts_and_steps():
    ecdf = Ecdf.from_samples(np.array([0.5, 0.1, 0.3]))

    assert list(ecdf.samples) == [0.1, 0.3, 0.5]
    assert ecdf.n == 3
    assert list(ecdf.cdf(np.array([0.0, 0.1, 0.2, 0.5, 1.0]))) == pytest.approx(
        [0, 1 / 3, 1 / 3, 1, 1]
    )


@pytest.mark.parametrize("samples", [[], [0.5, 1.5], [-0.1]])
def test_ecdf_rejects_bad_samples(samples):
    with pytest.raises(ParameterError):
        Ecdf.from_samples(np.array(samples))
