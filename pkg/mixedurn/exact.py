"""Exact finite-n law of (Y_n, B_n).

Pushes the point mass at (y0, b0) forward one level at a time through the
four-branch kernel. The kernel only depends on (y, b), so states reached by
different histories are merged and the result is exact.

Two backends:
- float (default): vectorized with numpy, merged in sorted (y, b) order.
- rational: Fractions through `urn.kernel_branches`, for n <= 50.
"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Optional

import numpy as np

from mixedurn.config import Settings
from mixedurn.constants import NORMALIZATION_TOL, RATIONAL_MAX_STEPS
from mixedurn.errors import (
    FrontierLimitExceeded,
    InvariantViolation,
    ParameterError,
)
from mixedurn.model import UrnParams
from mixedurn.urn import Kernel, kernel_branches
from mixedurn.utils import reduced_ratio

logger = logging.getLogger(__name__)

settings = Settings()


@dataclass(frozen=True)
class ExactDistribution:
    n: int
    # (y, b) -> probability, in ascending (y, b) order
    support: dict[tuple[int, int], Any]
    exact: bool = False

    def total(self) -> Any:
        return sum(self.support.values())


def exact_distribution(
    params: UrnParams,
    n: int,
    frontier_limit: Optional[int] = None,
    exact: bool = False,
    kernel: Optional[Kernel] = None,
) -> ExactDistribution:
    """Exact law of (Y_n, B_n).

    Raises FrontierLimitExceeded as soon as a level holds more than
    `frontier_limit` states (default from settings). Passing `kernel`
    replaces the transition law, which is only useful to test the checks
    that are supposed to catch a broken one.
    """
    if n < 0:
        raise ParameterError(f"n must be non-negative, got {n}")
    if exact and n > RATIONAL_MAX_STEPS:
        raise ParameterError(
            f"rational backend is limited to n <= {RATIONAL_MAX_STEPS}, got {n}"
        )
    limit = frontier_limit if frontier_limit is not None else settings.frontier_limit

    if kernel is None and not exact:
        support = _float_levels(params, n, limit)
    else:
        support = _dict_levels(params, n, limit, exact, kernel or kernel_branches)

    dist = ExactDistribution(n=n, support=support, exact=exact)
    if not exact:
        total = dist.total()
        if abs(total - 1.0) > NORMALIZATION_TOL * max(1, n):
            raise InvariantViolation(f"exact law at n={n} sums to {total!r}")
    return dist


def _float_levels(
    params: UrnParams, n: int, limit: int
) -> dict[tuple[int, int], Any]:
    ys = np.array([params.y0], dtype=np.int64)
    bs = np.array([params.b0], dtype=np.int64)
    probs = np.array([1.0])
    a, be, g, p = params.alpha, params.beta, params.gamma, params.p
    for level in range(1, n + 1):
        x = ys / (ys + bs)
        next_y = np.concatenate([ys + a, ys + be, ys + g, ys])
        next_b = np.concatenate([bs + be, bs + a, bs, bs + g])
        next_p = np.concatenate(
            [
                probs * (p * x),
                probs * (p * (1 - x)),
                probs * ((1 - p) * x),
                probs * ((1 - p) * (1 - x)),
            ]
        )
        keep = next_p > 0
        keys = np.stack([next_y[keep], next_b[keep]], axis=1)
        states, inverse = np.unique(keys, axis=0, return_inverse=True)
        probs = np.bincount(
            inverse.ravel(), weights=next_p[keep], minlength=states.shape[0]
        )
        ys, bs = states[:, 0], states[:, 1]
        logger.debug(f"level {level}: {ys.size} states")
        if ys.size > limit:
            raise FrontierLimitExceeded(level, int(ys.size), limit)
    return dict(zip(zip(ys.tolist(), bs.tolist()), probs.tolist()))


def _dict_levels(
    params: UrnParams, n: int, limit: int, exact: bool, kernel: Kernel
) -> dict[tuple[int, int], Any]:
    frontier: dict[tuple[int, int], Any] = {
        (params.y0, params.b0): Fraction(1) if exact else 1.0
    }
    for level in range(1, n + 1):
        pushed: dict[tuple[int, int], Any] = {}
        for (y, b), mass in frontier.items():
            for target, prob in kernel(y, b, params, exact):
                pushed[target] = pushed.get(target, 0) + mass * prob
        frontier = {state: pushed[state] for state in sorted(pushed)}
        logger.debug(f"level {level}: {len(frontier)} states")
        if len(frontier) > limit:
            raise FrontierLimitExceeded(level, len(frontier), limit)
    return frontier


def x_law_fractions(dist: ExactDistribution) -> list[tuple[int, int, Any]]:
    """Law of X_n as (x_num, x_den, prob) with x = x_num/x_den reduced, sorted by x."""
    law: dict[tuple[int, int], Any] = {}
    for (y, b), prob in dist.support.items():
        key = reduced_ratio(y, b)
        law[key] = law.get(key, 0) + prob
    ordered = sorted(law, key=lambda key: Fraction(*key))
    return [(num, den, law[(num, den)]) for num, den in ordered]


def x_law(dist: ExactDistribution) -> list[tuple[Any, Any]]:
    """Law of X_n as (x, prob) sorted by x; x is a Fraction in rational mode."""
    return [
        (Fraction(num, den) if dist.exact else num / den, prob)
        for num, den, prob in x_law_fractions(dist)
    ]


def moment(dist: ExactDistribution, k: int) -> Any:
    """E[X_n ** k]."""
    if k < 1:
        raise ParameterError(f"moment order must be at least 1, got {k}")
    return sum(prob * x**k for x, prob in x_law(dist))


def mean_and_variance(dist: ExactDistribution) -> tuple[Any, Any]:
    mean = moment(dist, 1)
    return mean, moment(dist, 2) - mean * mean


def state_rows(dist: ExactDistribution) -> Iterator[tuple[int, int, int, Any]]:
    """(n, y, b, prob) rows for export."""
    for (y, b), prob in dist.support.items():
        yield dist.n, y, b, prob


def x_law_rows(dist: ExactDistribution) -> Iterator[tuple[int, int, int, Any]]:
    """(n, x_num, x_den, prob) rows for export."""
    for num, den, prob in x_law_fractions(dist):
        yield dist.n, num, den, prob
