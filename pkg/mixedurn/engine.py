"""Monte Carlo engine.

Replicate r always draws from RngStream(master_seed, r), and only the
states at the requested checkpoints are kept. Replicates run in numba's
thread pool; every reduction afterwards happens in ascending replicate
order over fixed-size blocks, so results do not depend on the number of
workers.
"""

import logging
import os
import time
from collections.abc import Sequence
from typing import Optional

import numba
import numpy as np
from numba import njit, prange

from mixedurn.config import Settings
from mixedurn.constants import NEAR_HALF_RADIUS, REDUCTION_BLOCK
from mixedurn.errors import ParameterError
from mixedurn.model import (
    CheckpointSummary,
    ConvergenceCurve,
    ConvergencePoint,
    Histogram,
    MomentAccumulator,
    ReplicateSummary,
    UrnParams,
)
from mixedurn.rng import MASK64, seed_state
from mixedurn.urn import advance, check_capacity, check_checkpoints
from mixedurn.utils import geometric_checkpoints

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s [%(name)s] %(levelname)s: %(message)s",
)
logger = logging.getLogger(__name__)

settings = Settings()

# replicates handed to the thread pool per call
BATCH_REPLICATES = 1 << 16


@njit(parallel=True, cache=True)
def _replicate_batch(
    master_seed, first, count, y0, b0, alpha, beta, gamma, p, checkpoints
):
    n_checkpoints = checkpoints.shape[0]
    ys = np.empty((count, n_checkpoints), dtype=np.int64)
    bs = np.empty((count, n_checkpoints), dtype=np.int64)
    for i in prange(count):
        state = seed_state(master_seed, first + np.uint64(i))
        y = y0
        b = b0
        n = 0
        for j in range(n_checkpoints):
            y, b, _ = advance(state, y, b, checkpoints[j] - n, alpha, beta, gamma, p)
            n = checkpoints[j]
            ys[i, j] = y
            bs[i, j] = b
    return ys, bs


def resolve_workers(requested: Optional[int] = None) -> int:
    """Worker count: explicit request, then MIXED_URN_WORKERS, then every core."""
    if requested is not None and requested < 0:
        raise ParameterError(f"workers must be non-negative, got {requested}")
    workers = requested or settings.workers or os.cpu_count() or 1
    available = numba.config.NUMBA_NUM_THREADS
    if workers > available:
        logger.warning(
            f"{workers} workers requested but numba was started with {available} threads"
        )
        workers = available
    return workers


def sample_states(
    params: UrnParams,
    n_steps: int,
    replicates: int,
    master_seed: int,
    checkpoints: Sequence[int],
    workers: Optional[int] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """(Y, B) counts at each checkpoint, shape (replicates, len(checkpoints))."""
    if replicates < 1:
        raise ParameterError(f"replicates must be at least 1, got {replicates}")
    check_checkpoints(checkpoints, n_steps)
    check_capacity(params, n_steps)
    numba.set_num_threads(resolve_workers(workers))

    marks = np.asarray(checkpoints, dtype=np.int64)
    ys = np.empty((replicates, marks.size), dtype=np.int64)
    bs = np.empty((replicates, marks.size), dtype=np.int64)
    seed = np.uint64(master_seed & MASK64)
    started = time.perf_counter()
    for first in range(0, replicates, BATCH_REPLICATES):
        count = min(BATCH_REPLICATES, replicates - first)
        ys[first : first + count], bs[first : first + count] = _replicate_batch(
            seed,
            np.uint64(first),
            count,
            params.y0,
            params.b0,
            params.alpha,
            params.beta,
            params.gamma,
            params.p,
            marks,
        )
    logger.info(
        f"{replicates} replicates x {n_steps} steps on {numba.get_num_threads()} "
        f"workers in {time.perf_counter() - started:.2f}s"
    )
    return ys, bs


def sample_proportions(
    params: UrnParams,
    n_steps: int,
    replicates: int,
    master_seed: int,
    checkpoints: Sequence[int],
    workers: Optional[int] = None,
) -> np.ndarray:
    """X_n at each checkpoint, shape (replicates, len(checkpoints))."""
    ys, bs = sample_states(params, n_steps, replicates, master_seed, checkpoints, workers)
    return ys / (ys + bs)


def tree_merge(accumulators: Sequence[MomentAccumulator]) -> MomentAccumulator:
    """Pairwise merge in index order: ((a0 a1) (a2 a3)) ..."""
    level = list(accumulators)
    if not level:
        return MomentAccumulator()
    while len(level) > 1:
        level = [
            level[i].merge(level[i + 1]) if i + 1 < len(level) else level[i]
            for i in range(0, len(level), 2)
        ]
    return level[0]


def merge(a: MomentAccumulator, b: MomentAccumulator) -> MomentAccumulator:
    return a.merge(b)


def block_moments(samples: np.ndarray) -> MomentAccumulator:
    return tree_merge(
        [
            MomentAccumulator.from_samples(samples[i : i + REDUCTION_BLOCK])
            for i in range(0, samples.size, REDUCTION_BLOCK)
        ]
    )


def q90_abs_dev(samples: np.ndarray) -> float:
    return float(np.quantile(np.abs(samples - 0.5), 0.9))


def summarize_checkpoint(n: int, samples: np.ndarray, bins: int) -> CheckpointSummary:
    return CheckpointSummary(
        n=n,
        moments=block_moments(samples),
        histogram=Histogram.from_samples(samples, bins),
        mass_near_half=float(np.mean(np.abs(samples - 0.5) <= NEAR_HALF_RADIUS)),
        q90_abs_dev=q90_abs_dev(samples),
    )


def run_replicates(
    params: UrnParams,
    n_steps: int,
    replicates: int,
    master_seed: int,
    checkpoints: Sequence[int],
    bins: int,
    workers: Optional[int] = None,
) -> ReplicateSummary:
    if bins < 1:
        raise ParameterError(f"bins must be at least 1, got {bins}")
    xs = sample_proportions(
        params, n_steps, replicates, master_seed, checkpoints, workers
    )
    return ReplicateSummary(
        params=params,
        replicates=replicates,
        master_seed=master_seed,
        checkpoints=list(checkpoints),
        per_checkpoint=[
            summarize_checkpoint(n, xs[:, j], bins) for j, n in enumerate(checkpoints)
        ],
    )


def convergence_curve(
    params: UrnParams,
    n_max: int,
    replicates: int,
    master_seed: int,
    workers: Optional[int] = None,
) -> ConvergenceCurve:
    """Mean, variance and 90th percentile of |X_n - 1/2| at n = 1, 2, 4, ..., n_max."""
    warnings = []
    if not params.within_theorem:
        message = (
            "parameters are outside the theorem regime; "
            "X_n is not expected to converge to 1/2"
        )
        logger.warning(message)
        warnings.append(message)
    checkpoints = geometric_checkpoints(n_max)
    xs = sample_proportions(params, n_max, replicates, master_seed, checkpoints, workers)
    points = []
    for j, n in enumerate(checkpoints):
        moments = block_moments(xs[:, j])
        points.append(
            ConvergencePoint(
                n=n,
                mean=moments.mean,
                variance=moments.variance,
                q90_abs_dev=q90_abs_dev(xs[:, j]),
            )
        )
    return ConvergenceCurve(
        params=params,
        replicates=replicates,
        master_seed=master_seed,
        points=points,
        warnings=warnings,
    )
