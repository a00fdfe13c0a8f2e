"""Goodness-of-fit helpers: empirical CDF, KS distance, Beta CDF.

KS is used descriptively: we report the distance and compare it with fixed
thresholds, never with a p-value.
"""

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy import special, stats

from mixedurn.errors import ParameterError

Cdf = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Ecdf:
    # ascending, all in [0, 1]
    samples: np.ndarray

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "Ecdf":
        values = np.sort(np.asarray(samples, dtype=np.float64))
        if values.size < 1:
            raise ParameterError("an empirical CDF needs at least one sample")
        if values[0] < 0.0 or values[-1] > 1.0:
            raise ParameterError("samples must lie in [0, 1]")
        return cls(samples=values)

    @property
    def n(self) -> int:
        return int(self.samples.size)

    def cdf(self, x: np.ndarray) -> np.ndarray:
        return np.searchsorted(self.samples, x, side="right") / self.n

    def distance(self, other: "Ecdf") -> float:
        """Sup distance between two empirical CDFs (two-sample KS statistic)."""
        return float(stats.ks_2samp(self.samples, other.samples).statistic)


def uniform_cdf(x: np.ndarray) -> np.ndarray:
    return np.clip(x, 0.0, 1.0)


def beta_cdf(a: float, b: float, x):
    """Regularized incomplete beta I_x(a, b); x may be a float or an array."""
    if not (a > 0 and b > 0):
        raise ParameterError(f"beta parameters must be positive, got a={a}, b={b}")
    values = np.asarray(x, dtype=np.float64)
    if np.any(np.isnan(values)) or np.any(values < 0.0) or np.any(values > 1.0):
        raise ParameterError("beta_cdf is defined on [0, 1] only")
    result = special.betainc(a, b, values)
    return float(result) if result.ndim == 0 else result


def ks_statistic(samples: Ecdf, cdf: Cdf) -> float:
    """D_n = max_i max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|)."""
    return float(stats.kstest(samples.samples, cdf).statistic)
