"""Cross-checks between the Monte Carlo engine, the exact law and the theory.

Every check returns a CheckResult; `run_validation` collects them into a
report that passes only if all of them do.
"""

import logging
import math
from fractions import Fraction
from typing import Optional

import numpy as np

from mixedurn.constants import (
    BACKEND_AGREEMENT_TOL,
    KS_UNIFORM_THRESHOLD,
    ORACLE_MAX_STEPS,
    ORACLE_SIGMAS,
)
from mixedurn.engine import sample_proportions, sample_states
from mixedurn.errors import ParameterError
from mixedurn.exact import exact_distribution, x_law
from mixedurn.model import CheckResult, TheoryCase, UrnParams, ValidationReport
from mixedurn.stats import Ecdf, ks_statistic
from mixedurn.theory import (
    case3_p,
    classify_case,
    ell_exact,
    envelope,
    iterate_ell,
    iterate_paired,
    limit_cdf,
    paired_envelope,
    polya_limit_params,
    slope,
)
from mixedurn.urn import Branches, Kernel, kernel_branches

logger = logging.getLogger(__name__)

KS_STEPS = 10_000
KS_REPLICATES = 100_000
THEORY_SWEEP = 1_000
ORACLE_MIN_EXPECTED = 25
ENVELOPE_TOL = 1e-12

UNIFORM_POLYA = UrnParams(y0=1, b0=1, alpha=1, beta=1, gamma=1, p=0)
# lim X_n ~ Beta(1, 3)
SKEWED_POLYA = UrnParams(y0=2, b0=6, alpha=1, beta=1, gamma=2, p=0)


def corrupted_kernel(y: int, b: int, params: UrnParams, exact: bool = False) -> Branches:
    """Kernel that draws colours as if one extra yellow ball were in the urn.

    Still normalized, so only a comparison against simulation catches it.
    """
    return [
        ((ty - 1, tb), prob)
        for (ty, tb), prob in kernel_branches(y + 1, b, params, exact)
    ]


def _deviation(prob: float, count: int, replicates: int) -> float:
    """|frequency - prob| in binomial standard errors."""
    freq = count / replicates
    stderr = math.sqrt(prob * (1 - prob) / replicates)
    if stderr == 0:
        return 0.0 if math.isclose(freq, prob, abs_tol=1e-12) else math.inf
    return abs(freq - prob) / stderr


def oracle_checks(
    params: UrnParams,
    replicates: int,
    seed: int,
    max_steps: int = ORACLE_MAX_STEPS,
    workers: Optional[int] = None,
    kernel: Optional[Kernel] = None,
) -> list[CheckResult]:
    """Per-state Monte Carlo frequencies against the exact law, n = 1..max_steps."""
    checkpoints = list(range(1, max_steps + 1))
    ys, bs = sample_states(params, max_steps, replicates, seed, checkpoints, workers)
    results = []
    for j, n in enumerate(checkpoints):
        dist = exact_distribution(params, n, kernel=kernel)
        states, counts = np.unique(
            np.stack([ys[:, j], bs[:, j]], axis=1), axis=0, return_counts=True
        )
        observed = {
            (int(y), int(b)): int(count) for (y, b), count in zip(states, counts)
        }
        # cells expected to hold fewer than ORACLE_MIN_EXPECTED replicates are
        # pooled into one, so the normal approximation holds for every cell
        cells: list[tuple[float, int]] = []
        rare_prob, rare_count = 0.0, 0
        for state in set(dist.support) | set(observed):
            prob = dist.support.get(state, 0.0)
            count = observed.get(state, 0)
            if prob * replicates < ORACLE_MIN_EXPECTED:
                rare_prob += prob
                rare_count += count
            else:
                cells.append((prob, count))
        cells.append((rare_prob, rare_count))
        worst = max(_deviation(prob, count, replicates) for prob, count in cells)
        results.append(
            CheckResult(
                name=f"oracle_n{n}",
                passed=worst <= ORACLE_SIGMAS,
                statistic=worst,
                threshold=ORACLE_SIGMAS,
                detail=f"{len(dist.support)} exact states, {len(observed)} observed",
            )
        )
    return results


def backend_agreement(
    params: UrnParams, max_steps: int = ORACLE_MAX_STEPS, kernel: Optional[Kernel] = None
) -> CheckResult:
    """Largest gap between float and rational probabilities for n <= max_steps."""
    worst = 0.0
    for n in range(max_steps + 1):
        floats = exact_distribution(params, n, kernel=kernel).support
        rationals = exact_distribution(params, n, exact=True, kernel=kernel).support
        for state in set(floats) | set(rationals):
            gap = abs(floats.get(state, 0.0) - float(rationals.get(state, 0)))
            worst = max(worst, gap)
    return CheckResult(
        name="float_vs_rational",
        passed=worst <= BACKEND_AGREEMENT_TOL,
        statistic=worst,
        threshold=BACKEND_AGREEMENT_TOL,
    )


def polya_exact_uniform(n: int = 20) -> CheckResult:
    """With p = 0 and y0 = b0 = gamma = 1 the law of X_n is uniform on (k+1)/(n+2)."""
    law = x_law(exact_distribution(UNIFORM_POLYA, n))
    expected = {Fraction(k + 1, n + 2) for k in range(n + 1)}
    worst = max(abs(prob - 1 / (n + 1)) for _, prob in law)
    grid_ok = {Fraction(x).limit_denominator(n + 2) for x, _ in law} == expected
    return CheckResult(
        name="polya_exact_uniform",
        passed=grid_ok and worst <= BACKEND_AGREEMENT_TOL,
        statistic=worst,
        threshold=BACKEND_AGREEMENT_TOL,
        detail=f"n={n}, {len(law)} atoms",
    )


def polya_limit_ks(
    name: str,
    params: UrnParams,
    seed: int,
    steps: int = KS_STEPS,
    replicates: int = KS_REPLICATES,
    workers: Optional[int] = None,
) -> CheckResult:
    """KS distance between simulated X_n and the Beta(y0/gamma, b0/gamma) limit."""
    beta_params = polya_limit_params(params)
    cdf = limit_cdf(params)
    if beta_params is None or cdf is None:
        raise ParameterError(f"{params} is not a pure Polya urn")
    xs = sample_proportions(params, steps, replicates, seed, [steps], workers)
    distance = ks_statistic(Ecdf.from_samples(xs[:, 0]), cdf)
    a, b = beta_params
    return CheckResult(
        name=name,
        passed=distance < KS_UNIFORM_THRESHOLD,
        statistic=distance,
        threshold=KS_UNIFORM_THRESHOLD,
        detail=f"Beta({a:g}, {b:g}), {replicates} replicates at n={steps}",
    )


def random_theorem_params(rng: np.random.Generator, high: int = 10) -> UrnParams:
    y0, b0, alpha, beta, gamma = (int(v) for v in rng.integers(1, high + 1, size=5))
    # p as a fraction so exact checks stay exact
    den = int(rng.integers(1, 101))
    num = int(rng.integers(1, den + 1))
    return UrnParams(
        y0=y0, b0=b0, alpha=alpha, beta=beta, gamma=gamma, p=Fraction(num, den)
    )


def theory_sweep(seed: int, count: int = THEORY_SWEEP) -> CheckResult:
    """Fixed point, contraction, envelope closed forms and Case 3 over random tuples."""
    rng = np.random.default_rng(seed)
    failures = []
    worst_gap = 0.0
    for _ in range(count):
        params = random_theorem_params(rng)
        if ell_exact(params, Fraction(1, 2)) != Fraction(1, 2):
            failures.append(f"fixed point: {params}")
        if not abs(slope(params)) < 1:
            failures.append(f"contraction: {params}")
        for n in (0, 1, 7, 50, 100):
            gap = abs(envelope(params, n) - iterate_ell(params, 1.0, n))
            if slope(params) <= 0:
                paired = abs(paired_envelope(params, n) - iterate_paired(params, n))
                gap = max(gap, paired)
            worst_gap = max(worst_gap, gap)
        p_star = case3_p(params.alpha, params.beta, params.gamma)
        if p_star is not None:
            balanced = params.model_copy(update={"p": float(p_star), "p_ratio": p_star})
            if classify_case(balanced) is not TheoryCase.CASE3:
                failures.append(f"case 3: {balanced}")
    if failures:
        logger.error(f"theory sweep failures: {failures[:5]}")
    return CheckResult(
        name="theory_sweep",
        passed=not failures and worst_gap <= ENVELOPE_TOL,
        statistic=worst_gap,
        threshold=ENVELOPE_TOL,
        detail=f"{count} tuples, {len(failures)} failures",
    )


def run_validation(
    params: UrnParams,
    replicates: int,
    seed: int,
    workers: Optional[int] = None,
    kernel: Optional[Kernel] = None,
    ks_steps: int = KS_STEPS,
    ks_replicates: int = KS_REPLICATES,
) -> ValidationReport:
    checks = oracle_checks(params, replicates, seed, workers=workers, kernel=kernel)
    checks.append(backend_agreement(params, kernel=kernel))
    checks.append(polya_exact_uniform())
    checks.append(
        polya_limit_ks(
            "polya_uniform_ks", UNIFORM_POLYA, seed, ks_steps, ks_replicates, workers
        )
    )
    checks.append(
        polya_limit_ks(
            "polya_beta_ks", SKEWED_POLYA, seed, ks_steps, ks_replicates, workers
        )
    )
    checks.append(theory_sweep(seed))
    for check in checks:
        log = logger.info if check.passed else logger.error
        log(f"{check.name}: {check.statistic:.3g} (threshold {check.threshold:.3g})")
    return ValidationReport(passed=all(check.passed for check in checks), checks=checks)
