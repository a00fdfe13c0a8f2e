from enum import Enum
from fractions import Fraction
from typing import Any, Literal, Optional

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    computed_field,
    field_serializer,
    field_validator,
    model_validator,
)

from mixedurn.constants import DEFAULT_BINS, DEFAULT_SEED
from mixedurn.utils import parse_probability


class Scheme(str, Enum):
    FRIEDMAN = "Friedman"
    POLYA = "Polya"


class Colour(str, Enum):
    YELLOW = "Yellow"
    BLUE = "Blue"


class TheoryCase(str, Enum):
    CASE1 = "Case1_ThetaPositive"
    CASE2 = "Case2_ThetaNegative"
    CASE3 = "Case3_ThetaZero"


class UrnParams(BaseModel):
    """UrnParams properties:

    y0, b0: initial yellow and blue counts.
    alpha, beta: balls of the drawn and of the opposite colour added by a
        Friedman step.
    gamma: balls of the drawn colour added by a Polya step.
    p: probability that a step uses Friedman's rule. May be given as a
        "num/den" string or a Fraction, in which case p_ratio keeps the
        exact value.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    y0: int = Field(ge=1)
    b0: int = Field(ge=1)
    alpha: int = Field(ge=0)
    beta: int = Field(ge=0)
    gamma: int = Field(ge=0)
    p: float = Field(ge=0.0, le=1.0)
    p_ratio: Optional[Fraction] = None

    @model_validator(mode="before")
    @classmethod
    def _exact_probability(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        p = data.get("p")
        ratio = None
        if isinstance(p, Fraction):
            ratio = p
        elif isinstance(p, str) and "/" in p:
            try:
                ratio = Fraction(p.strip())
            except (ValueError, ZeroDivisionError):
                # leave it to the float validator, which names the field
                return data
        if ratio is not None:
            data = {**data, "p": float(ratio), "p_ratio": ratio}
        return data

    @model_validator(mode="after")
    def _something_is_added(self) -> "UrnParams":
        if self.alpha + self.beta + self.gamma < 1:
            raise ValueError(
                "alpha + beta + gamma must be at least 1, otherwise the urn never changes"
            )
        if self.p_ratio is not None and not 0 <= self.p_ratio <= 1:
            raise ValueError(f"p_ratio {self.p_ratio} is outside [0, 1]")
        # floats and Fractions drive different kernels; they must describe one urn
        if self.p_ratio is not None and float(self.p_ratio) != self.p:
            raise ValueError(
                f"p_ratio {self.p_ratio} does not match p {self.p}; give one of them"
            )
        return self

    @field_validator("p_ratio", mode="before")
    @classmethod
    def _parse_ratio(cls, ratio: Any) -> Any:
        if isinstance(ratio, str):
            return Fraction(ratio)
        return ratio

    @field_serializer("p_ratio")
    def _serialize_ratio(self, ratio: Optional[Fraction]) -> Optional[str]:
        return None if ratio is None else str(ratio)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def within_theorem(self) -> bool:
        """All five integers positive and p > 0: X_n converges to 1/2."""
        return (
            self.alpha >= 1 and self.beta >= 1 and self.gamma >= 1 and self.p > 0
        )

    @property
    def p_exact(self) -> Fraction:
        """p as a Fraction; exact binary value of the float when no ratio was given."""
        return self.p_ratio if self.p_ratio is not None else Fraction(self.p)


class UrnState(BaseModel):
    model_config = ConfigDict(frozen=True)

    y: int = Field(ge=1)
    b: int = Field(ge=1)
    n: int = Field(default=0, ge=0)


class DrawEvent(BaseModel):
    model_config = ConfigDict(frozen=True)

    scheme: Scheme
    colour: Colour


class TheoryReport(BaseModel):
    theta: float
    denom: float
    # None when denom == 0 (no balls can ever be added)
    slope: Optional[float]
    case: TheoryCase
    # None when the map has no unique fixed point (beta * p == 0)
    fixed_point: Optional[float]
    polya_limit: Optional[tuple[float, float]] = None
    within_theorem: bool


class MomentAccumulator(BaseModel):
    """Streaming count, mean and sum of squared deviations, mergeable."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0
    min: Optional[float] = None
    max: Optional[float] = None

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "MomentAccumulator":
        if samples.size == 0:
            return cls()
        mean = float(samples.mean())
        return cls(
            count=int(samples.size),
            mean=mean,
            m2=float(np.square(samples - mean).sum()),
            min=float(samples.min()),
            max=float(samples.max()),
        )

    def push(self, x: float) -> None:
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)
        self.min = x if self.min is None else min(self.min, x)
        self.max = x if self.max is None else max(self.max, x)

    def merge(self, other: "MomentAccumulator") -> "MomentAccumulator":
        if other.count == 0:
            return self.model_copy()
        if self.count == 0:
            return other.model_copy()
        count = self.count + other.count
        delta = other.mean - self.mean
        return MomentAccumulator(
            count=count,
            # written symmetrically so merge(a, b) == merge(b, a)
            mean=(self.count * self.mean + other.count * other.mean) / count,
            m2=self.m2 + other.m2 + delta * delta * self.count * other.count / count,
            min=min(self.min, other.min),  # type: ignore[type-var]
            max=max(self.max, other.max),  # type: ignore[type-var]
        )

    @computed_field  # type: ignore[prop-decorator]
    @property
    def variance(self) -> float:
        if self.count < 2:
            return 0.0
        return self.m2 / (self.count - 1)


class Histogram(BaseModel):
    """Counts over a uniform partition of [0, 1] into `bins` cells."""

    bins: int = Field(ge=1)
    counts: list[int]
    total: int

    @classmethod
    def from_samples(cls, samples: np.ndarray, bins: int) -> "Histogram":
        index = np.minimum((samples * bins).astype(np.int64), bins - 1)
        counts = np.bincount(index, minlength=bins)
        return cls(bins=bins, counts=counts.tolist(), total=int(samples.size))

    def edges(self, index: int) -> tuple[float, float]:
        return index / self.bins, (index + 1) / self.bins


class CheckpointSummary(BaseModel):
    n: int
    moments: MomentAccumulator
    histogram: Histogram
    # fraction of replicates with |X_n - 1/2| <= 0.1
    mass_near_half: float
    q90_abs_dev: float


class ReplicateSummary(BaseModel):
    params: UrnParams
    replicates: int
    master_seed: int
    checkpoints: list[int]
    per_checkpoint: list[CheckpointSummary]

    def at(self, n: int) -> CheckpointSummary:
        for summary in self.per_checkpoint:
            if summary.n == n:
                return summary
        raise KeyError(f"no checkpoint at n={n}")


class ConvergencePoint(BaseModel):
    n: int
    mean: float
    variance: float
    q90_abs_dev: float


class ConvergenceCurve(BaseModel):
    params: UrnParams
    replicates: int
    master_seed: int
    points: list[ConvergencePoint]
    warnings: list[str] = []


class RunConfig(BaseModel):
    """Everything a CLI command needs; mirrors UrnParams for the urn fields."""

    y0: int = Field(default=1, ge=1)
    b0: int = Field(default=1, ge=1)
    alpha: int = Field(default=1, ge=0)
    beta: int = Field(default=1, ge=0)
    gamma: int = Field(default=1, ge=0)
    p: str = "0.05"
    steps: int = Field(default=2_000, ge=0)
    replicates: int = Field(default=10_000, ge=1)
    seed: int = Field(default=DEFAULT_SEED, ge=0)
    checkpoints: Optional[list[int]] = None
    bins: int = Field(default=DEFAULT_BINS, ge=1)
    format: Literal["csv", "json"] = "csv"
    out: str = "."
    workers: int = Field(default=0, ge=0)
    frontier_limit: int = Field(default=5000, ge=1)

    def urn_params(self) -> UrnParams:
        return UrnParams(
            y0=self.y0,
            b0=self.b0,
            alpha=self.alpha,
            beta=self.beta,
            gamma=self.gamma,
            p=parse_probability(self.p),
        )

    def checkpoint_list(self) -> list[int]:
        return self.checkpoints if self.checkpoints else [self.steps]


class FigureConfig(BaseModel):
    """Flags of reproduce-figure; right_* scale down the long right panel."""

    seed: int = Field(default=DEFAULT_SEED, ge=0)
    workers: int = Field(default=0, ge=0)
    out: str = "."
    bins: int = Field(default=DEFAULT_BINS, ge=1)
    right_replicates: Optional[int] = Field(default=None, ge=1)
    right_steps: Optional[int] = Field(default=None, ge=1)
    plot_script: bool = True


class CheckResult(BaseModel):
    name: str
    passed: bool
    statistic: float
    threshold: float
    detail: str = ""


class ValidationReport(BaseModel):
    passed: bool
    checks: list[CheckResult]


class FigurePanel(BaseModel):
    name: str
    p: float
    steps: int
    replicates: int
    mean: float
    variance: float
    mass_near_half: float
    ks_uniform: float
    # KS distance to the Beta limit; only set for the pure Polya panel
    ks_limit: Optional[float] = None


class FigureSummary(BaseModel):
    seed: int
    panels: list[FigurePanel]
    checks: list[CheckResult]
    passed: bool
