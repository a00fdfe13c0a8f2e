"""Unit tests for the affine map, its envelopes and the case split."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mixedurn.errors import InvariantViolation, TheoryDomainError
from mixedurn.exact import exact_distribution, moment
from mixedurn.model import TheoryCase, UrnParams
from mixedurn.theory import (
    analyze,
    case3_p,
    classify_case,
    denom,
    ell,
    ell_blue,
    ell_exact,
    envelope,
    envelope_band,
    iterate_ell,
    iterate_paired,
    limit_cdf,
    paired_envelope,
    polya_limit_params,
    slope,
    theta,
)


@pytest.fixture
def figure_params() -> UrnParams:
    return UrnParams(y0=1, b0=1, alpha=1, beta=1, gamma=1, p=0.05)


def urn(alpha: int, beta: int, gamma: int, p, y0: int = 1, b0: int = 1) -> UrnParams:
    return UrnParams(y0=y0, b0=b0, alpha=alpha, beta=beta, gamma=gamma, p=p)


theorem_params = st.builds(
    urn,
    alpha=st.integers(1, 20),
    beta=st.integers(1, 20),
    gamma=st.integers(1, 20),
    p=st.fractions(min_value=0, max_value=1, max_denominator=1000).filter(
        lambda f: f > 0
    ),
    y0=st.integers(1, 20),
    b0=st.integers(1, 20),
)


def test_theta_denom_slope(figure_params: UrnParams):
    assert theta(figure_params) == pytest.approx(0.95)
    assert denom(figure_params) == pytest.approx(1.05)
    assert slope(figure_params) == pytest.approx(19 / 21)
    assert classify_case(figure_params) is TheoryCase.CASE1


def test_symmetric_friedman_has_zero_slope():
    params = urn(3, 3, 1, 1)

    report = analyze(params)

    assert report.theta == 0
    assert report.slope == 0
    assert report.fixed_point == 0.5
    assert report.case is TheoryCase.CASE3


def test_ell_examples(figure_params: UrnParams):
    assert ell(figure_params, 0.5) == pytest.approx(0.5)
    assert ell(figure_params, 1.0) == pytest.approx(20 / 21)
    assert ell_exact(urn(1, 1, 1, "1/20"), Fraction(1)) == Fraction(20, 21)


def test_ell_blue_is_one_minus_ell(figure_params: UrnParams):
    for x in np.linspace(0, 1, 11):
        assert ell_blue(figure_params, x) == pytest.approx(1 - ell(figure_params, x))


def test_ell_is_undefined_when_nothing_is_added():
    params = urn(0, 0, 1, 1)

    with pytest.raises(TheoryDomainError):
        slope(params)
    with pytest.raises(TheoryDomainError):
        ell(params, 0.5)


def test_envelope_examples(figure_params: UrnParams):
    assert envelope(figure_params, 0) == 1.0
    assert envelope(figure_params, 1) == pytest.approx(20 / 21)
    assert envelope(figure_params, 500) == pytest.approx(0.5, abs=1e-10)


def test_envelope_outside_theorem_is_an_error():
    with pytest.raises(TheoryDomainError):
        envelope(urn(1, 1, 1, 0), 3)
    with pytest.raises(TheoryDomainError):
        paired_envelope(urn(1, 0, 1, 0.5), 3)


def test_envelope_rejects_negative_n(figure_params: UrnParams):
    with pytest.raises(TheoryDomainError):
        envelope(figure_params, -1)


@pytest.mark.parametrize(
    "alpha, beta, gamma, p, expected",
    [
        (1, 1, 1, 0.05, TheoryCase.CASE1),
        (1, 5, 1, 0.9, TheoryCase.CASE2),
        (1, 2, 1, 0.5, TheoryCase.CASE3),
        (1, 2, 1, "1/2", TheoryCase.CASE3),
    ],
)
def test_classify_case(alpha, beta, gamma, p, expected):
    assert classify_case(urn(alpha, beta, gamma, p)) is expected


def test_classify_case_is_exact_for_fractions():
    assert classify_case(urn(1, 4, 1, "1/4")) is TheoryCase.CASE3
    assert classify_case(urn(1, 4, 1, "1001/4000")) is TheoryCase.CASE2


@pytest.mark.parametrize(
    "alpha, beta, gamma, expected",
    [(1, 2, 1, Fraction(1, 2)), (1, 1, 1, Fraction(1)), (5, 1, 1, None)],
)
def test_case3_p(alpha, beta, gamma, expected):
    assert case3_p(alpha, beta, gamma) == expected


def test_polya_limit_params():
    assert polya_limit_params(urn(1, 1, 1, 0)) == (1, 1)
    assert polya_limit_params(urn(1, 1, 2, 0, y0=2, b0=6)) == (1, 3)
    assert polya_limit_params(urn(1, 1, 1, 0.05)) is None


def test_limit_cdf():
    uniform = limit_cdf(urn(1, 1, 1, 0))
    point_mass = limit_cdf(urn(1, 1, 1, 0.05))

    assert uniform(0.25) == pytest.approx(0.25)
    assert list(point_mass(np.array([0.4, 0.5, 0.6]))) == [0.0, 1.0, 1.0]
    assert limit_cdf(urn(1, 0, 1, 0.5)) is None


def test_analyze_flags_a_broken_fixed_point(figure_params: UrnParams, monkeypatch):
    monkeypatch.setattr("mixedurn.theory.ell_exact", lambda params, x: Fraction(0))

    with pytest.raises(InvariantViolation, match="fixed point"):
        analyze(figure_params)


def test_analyze_reports_polya_limit_and_no_fixed_point():
    report = analyze(urn(1, 1, 1, 0, y0=2, b0=6))

    assert report.polya_limit == (2, 6)
    assert report.fixed_point is None
    assert not report.within_theorem


def test_paired_envelope_matches_paired_iteration_in_case_two():
    params = urn(1, 5, 1, 0.9)
    assert classify_case(params) is TheoryCase.CASE2

    for n in range(0, 40):
        assert paired_envelope(params, n) == pytest.approx(
            iterate_paired(params, n), abs=1e-12
        )


def test_paired_iteration_oscillates_in_case_one(figure_params: UrnParams):
    s = slope(figure_params)

    assert iterate_paired(figure_params, 1) == pytest.approx(0.5 * (1 - s))
    assert iterate_paired(figure_params, 1) < 0.5
    assert iterate_paired(figure_params, 2) == pytest.approx(0.5 * (1 + s * s))
    assert paired_envelope(figure_params, 1) == pytest.approx(
        envelope(figure_params, 1)
    )


def test_paired_envelope_is_monotone_in_case_two():
    params = urn(1, 5, 1, 0.9)
    values = [paired_envelope(params, n) for n in range(50)]

    assert values == sorted(values, reverse=True)
    assert values[-1] >= 0.5


def test_envelope_band_is_symmetric(figure_params: UrnParams):
    lower, upper = envelope_band(figure_params, 10)

    assert lower + upper == pytest.approx(1.0)
    assert upper == pytest.approx(envelope(figure_params, 10))


def test_exact_mean_stays_inside_envelope_band():
    params = urn(1, 2, 3, "2/5", y0=2, b0=2)
    for n in range(0, 12):
        lower, upper = envelope_band(params, n)
        mean = moment(exact_distribution(params, n), 1)
        assert lower - 1e-12 <= mean <= upper + 1e-12


@given(params=theorem_params)
def test_one_half_is_the_fixed_point(params: UrnParams):
    assert ell_exact(params, Fraction(1, 2)) == Fraction(1, 2)


@given(params=theorem_params)
def test_slope_is_a_contraction(params: UrnParams):
    assert abs(slope(params)) < 1


@given(params=theorem_params, n=st.integers(0, 200))
def test_envelope_closed_form_matches_iteration(params: UrnParams, n: int):
    assert envelope(params, n) == pytest.approx(iterate_ell(params, 1.0, n), abs=1e-12)


@given(params=theorem_params, n=st.integers(0, 200))
def test_paired_envelope_bounds_envelope(params: UrnParams, n: int):
    assert envelope(params, n) <= paired_envelope(params, n) + 1e-15
    assert paired_envelope(params, n) >= 0.5


@given(alpha=st.integers(1, 30), beta=st.integers(1, 30), gamma=st.integers(1, 30))
def test_case3_p_zeroes_theta(alpha: int, beta: int, gamma: int):
    p = case3_p(alpha, beta, gamma)
    if p is None:
        denominator = beta + gamma - alpha
        assert denominator <= 0 or gamma > denominator
    else:
        assert 0 < p <= 1
        assert classify_case(urn(alpha, beta, gamma, p)) is TheoryCase.CASE3
