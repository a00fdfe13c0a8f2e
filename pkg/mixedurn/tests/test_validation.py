"""Tests for the validate checks: oracle, backends, Polya limits and theory sweep."""

import numpy as np
import pytest

from mixedurn.engine import sample_proportions
from mixedurn.errors import ParameterError
from mixedurn.model import UrnParams
from mixedurn.stats import Ecdf, ks_statistic, uniform_cdf
from mixedurn.urn import kernel_branches
from mixedurn.validation import (
    SKEWED_POLYA,
    UNIFORM_POLYA,
    backend_agreement,
    corrupted_kernel,
    oracle_checks,
    polya_exact_uniform,
    polya_limit_ks,
    random_theorem_params,
    run_validation,
    theory_sweep,
)


@pytest.fixture
def figure_params() -> UrnParams:
    return UrnParams(y0=1, b0=1, alpha=1, beta=1, gamma=1, p=0.05)


def test_corrupted_kernel_is_normalized_but_wrong(figure_params: UrnParams):
    honest = dict(kernel_branches(1, 1, figure_params))
    broken = dict(corrupted_kernel(1, 1, figure_params))

    assert sum(broken.values()) == pytest.approx(1.0)
    # same targets, shifted probabilities
    assert broken.keys() == honest.keys()
    assert broken[(2, 1)] == pytest.approx(0.95 * 2 / 3)
    assert honest[(2, 1)] == pytest.approx(0.95 / 2)


def test_oracle_catches_corrupted_kernel(figure_params: UrnParams):
    checks = oracle_checks(figure_params, 5_000, 42, max_steps=2, kernel=corrupted_kernel)

    assert not checks[0].passed
    assert checks[0].statistic > 10


def test_oracle_passes_for_honest_kernel(figure_params: UrnParams):
    checks = oracle_checks(figure_params, 20_000, 42, max_steps=4)

    assert [check.name for check in checks] == [f"oracle_n{n}" for n in range(1, 5)]
    assert all(check.passed for check in checks)


def test_backend_agreement(figure_params: UrnParams):
    check = backend_agreement(figure_params)

    assert check.passed
    assert check.statistic <= 1e-10


def test_polya_exact_uniform():
    check = polya_exact_uniform()

    assert check.passed
    assert "21 atoms" in check.detail


@pytest.mark.parametrize("params", [UNIFORM_POLYA, SKEWED_POLYA])
def test_polya_limit_ks_matches_beta_limit(params: UrnParams):
    check = polya_limit_ks("limit", params, 42, steps=2_000, replicates=20_000)

    assert check.passed, check.detail
    assert check.name == "limit"


def test_skewed_polya_is_not_uniform():
    xs = sample_proportions(SKEWED_POLYA, 2_000, 20_000, 42, [2_000])[:, 0]

    assert "Beta(1, 3)" in polya_limit_ks("limit", SKEWED_POLYA, 42, 200, 100).detail
    # sup |1 - (1-x)^3 - x| is about 0.5
    assert ks_statistic(Ecdf.from_samples(xs), uniform_cdf) > 0.4


def test_polya_limit_ks_needs_a_pure_polya_urn(figure_params: UrnParams):
    with pytest.raises(ParameterError):
        polya_limit_ks("limit", figure_params, 42, steps=10, replicates=10)


def test_random_theorem_params_are_in_regime():
    rng = np.random.default_rng(0)
    for _ in range(100):
        params = random_theorem_params(rng)
        assert params.within_theorem
        assert params.p_ratio is not None


def test_theory_sweep_passes():
    check = theory_sweep(42, count=300)

    assert check.passed, check.detail
    assert check.statistic <= 1e-12


def test_run_validation_small(figure_params: UrnParams):
    report = run_validation(
        figure_params, 20_000, 42, ks_steps=2_000, ks_replicates=20_000
    )

    assert report.passed, [check for check in report.checks if not check.passed]
    names = [check.name for check in report.checks]
    assert names[:8] == [f"oracle_n{n}" for n in range(1, 9)]
    assert names[8:] == [
        "float_vs_rational",
        "polya_exact_uniform",
        "polya_uniform_ks",
        "polya_beta_ks",
        "theory_sweep",
    ]


def test_run_validation_fails_with_corrupted_kernel(figure_params: UrnParams):
    report = run_validation(
        figure_params,
        5_000,
        42,
        kernel=corrupted_kernel,
        ks_steps=100,
        ks_replicates=2_000,
    )

    assert not report.passed


@pytest.mark.slow
def test_theory_sweep_at_acceptance_scale():
    assert theory_sweep(42, count=10_000).passed


@pytest.mark.slow
def test_default_validation_passes(figure_params: UrnParams):
    assert run_validation(figure_params, 1_000_000, 42).passed
