"""Deterministic side of the mixed urn.

Averaging one step of the recursion for Y_n and Y_n + B_n gives the
affine map

    ell(x) = (theta * x + beta * p) / D
    theta  = (alpha - beta) * p + gamma * (1 - p)
    D      = (alpha + beta) * p + gamma * (1 - p)

Whenever beta * p > 0 its slope theta / D lies in (-1, 1) and 1/2 is its
unique fixed point, because ell(x) - 1/2 = (theta / D) * (x - 1/2).
Iterating from x = 1 gives the envelope ell^(n)(1) = (1 + (theta/D)^n) / 2
that bounds limsup X_n when theta > 0. When theta < 0 the same bound comes
from iterating the blue map on the pair of colour proportions, which
yields (1 + |theta/D|^n) / 2.
"""

import logging
from collections.abc import Callable
from fractions import Fraction
from functools import partial
from typing import Optional

import numpy as np

from mixedurn.constants import THETA_ZERO_TOL
from mixedurn.errors import InvariantViolation, TheoryDomainError
from mixedurn.model import TheoryCase, TheoryReport, UrnParams
from mixedurn.stats import beta_cdf

logger = logging.getLogger(__name__)


def theta(params: UrnParams) -> float:
    p = params.p
    return (params.alpha - params.beta) * p + params.gamma * (1 - p)


def denom(params: UrnParams) -> float:
    p = params.p
    return (params.alpha + params.beta) * p + params.gamma * (1 - p)


def _exact_theta(params: UrnParams) -> Fraction:
    p = params.p_exact
    return (params.alpha - params.beta) * p + params.gamma * (1 - p)


def _exact_denom(params: UrnParams) -> Fraction:
    p = params.p_exact
    return (params.alpha + params.beta) * p + params.gamma * (1 - p)


def slope(params: UrnParams) -> float:
    d = denom(params)
    if d <= 0:
        raise TheoryDomainError(
            f"D = 0 for alpha={params.alpha}, beta={params.beta}, "
            f"gamma={params.gamma}, p={params.p}: no balls are ever added"
        )
    return theta(params) / d


def ell(params: UrnParams, x: float) -> float:
    return (theta(params) * x + params.beta * params.p) / _checked_denom(params)


def ell_exact(params: UrnParams, x: Fraction) -> Fraction:
    """ell evaluated in rational arithmetic."""
    d = _exact_denom(params)
    if d == 0:
        raise TheoryDomainError("D = 0: ell is undefined")
    return (_exact_theta(params) * x + params.beta * params.p_exact) / d


def ell_blue(params: UrnParams, x: float) -> float:
    """Blue-proportion map (-theta * x + alpha*p + gamma*(1-p)) / D, i.e. 1 - ell(x)."""
    p = params.p
    return (-theta(params) * x + params.alpha * p + params.gamma * (1 - p)) / (
        _checked_denom(params)
    )


def _checked_denom(params: UrnParams) -> float:
    d = denom(params)
    if d <= 0:
        raise TheoryDomainError("D = 0: ell is undefined")
    return d


def iterate_ell(params: UrnParams, x: float, n: int) -> float:
    for _ in range(n):
        x = ell(params, x)
    return x


def iterate_paired(params: UrnParams, n: int) -> float:
    """Iterate the (yellow, blue) upper bounds through the blue map from (1, 1).

    Both coordinates stay equal; the common value is returned. It equals
    (1 + |theta/D|^n) / 2 only for theta <= 0. For theta > 0 the blue map
    has negative slope, the iterate falls below 1/2 at odd n and `envelope`
    is the bound to use.
    """
    x = z = 1.0
    for _ in range(n):
        x, z = ell_blue(params, z), ell_blue(params, x)
    return max(x, z)


def _require_theorem(params: UrnParams) -> None:
    if not params.within_theorem:
        raise TheoryDomainError(
            "the envelope is only defined inside the theorem regime "
            "(alpha, beta, gamma >= 1 and p > 0)"
        )


def envelope(params: UrnParams, n: int) -> float:
    """ell^(n)(1) in closed form."""
    _require_theorem(params)
    if n < 0:
        raise TheoryDomainError(f"n must be non-negative, got {n}")
    return 0.5 * (1.0 + slope(params) ** n)


def paired_envelope(params: UrnParams, n: int) -> float:
    """Monotone upper bound (1 + |theta/D|^n) / 2, valid for every sign of theta.

    Equals `envelope` for theta >= 0 and `iterate_paired` for theta <= 0.
    """
    _require_theorem(params)
    if n < 0:
        raise TheoryDomainError(f"n must be non-negative, got {n}")
    return 0.5 * (1.0 + abs(slope(params)) ** n)


def envelope_band(params: UrnParams, n: int) -> tuple[float, float]:
    """(lower, upper) band around 1/2; the lower side comes from swapping colours."""
    upper = paired_envelope(params, n)
    return 1.0 - upper, upper


def classify_case(params: UrnParams) -> TheoryCase:
    """Sign of theta. Exact when p was given as a fraction."""
    if params.p_ratio is not None:
        t: float | Fraction = _exact_theta(params)
        zero = t == 0
    else:
        t = theta(params)
        zero = abs(t) < THETA_ZERO_TOL
    if zero:
        return TheoryCase.CASE3
    return TheoryCase.CASE1 if t > 0 else TheoryCase.CASE2


def case3_p(alpha: int, beta: int, gamma: int) -> Optional[Fraction]:
    """The p in (0, 1] making theta vanish, gamma / (beta + gamma - alpha), if any."""
    denominator = beta + gamma - alpha
    if denominator <= 0:
        return None
    p = Fraction(gamma, denominator)
    if 0 < p <= 1:
        return p
    return None


def polya_limit_params(params: UrnParams) -> Optional[tuple[float, float]]:
    """Beta(y0/gamma, b0/gamma) limit of the pure Polya urn (p = 0)."""
    if params.p == 0 and params.gamma >= 1:
        return params.y0 / params.gamma, params.b0 / params.gamma
    return None


def limit_cdf(params: UrnParams) -> Optional[Callable[[np.ndarray], np.ndarray]]:
    """CDF of lim X_n where it is known: Beta for p = 0, a step at 1/2 in the theorem."""
    beta_params = polya_limit_params(params)
    if beta_params is not None:
        return partial(beta_cdf, *beta_params)
    if params.within_theorem:
        return lambda x: np.where(np.asarray(x) >= 0.5, 1.0, 0.0)
    return None


def analyze(params: UrnParams) -> TheoryReport:
    t = theta(params)
    d = denom(params)
    has_fixed_point = d > 0 and params.beta * params.p > 0
    report = TheoryReport(
        theta=t,
        denom=d,
        slope=t / d if d > 0 else None,
        case=classify_case(params),
        fixed_point=0.5 if has_fixed_point else None,
        polya_limit=polya_limit_params(params),
        within_theorem=params.within_theorem,
    )
    if params.within_theorem:
        if not abs(report.slope) < 1:  # type: ignore[arg-type]
            raise InvariantViolation(f"slope {report.slope} is not a contraction")
        if ell_exact(params, Fraction(1, 2)) != Fraction(1, 2):
            raise InvariantViolation("1/2 is not a fixed point of ell")
    logger.debug(f"theory for {params}: {report}")
    return report
