import math
from collections import Counter
from typing import Iterable

from pydantic import BaseModel, Field, model_validator


def _falling(k: int, r: int) -> int:
    out = 1
    for i in range(r):
        out *= k - i
    return out


class Histogram(BaseModel):
    """Empirical distribution of a non-negative integer count over a number of trials."""

    counts: dict[int, int] = Field(default_factory=dict)
    trials: int = 0

    @model_validator(mode="after")
    def _consistent(self):
        if any(k < 0 or c < 0 for k, c in self.counts.items()):
            raise ValueError("histogram values and counts must be non-negative")
        if sum(self.counts.values()) != self.trials:
            raise ValueError("histogram counts must sum to trials")
        return self

    @classmethod
    def from_values(cls, values: Iterable[int]) -> "Histogram":
        c = Counter(int(v) for v in values)
        return cls(counts=dict(sorted(c.items())), trials=sum(c.values()))

    def merge(self, other: "Histogram") -> "Histogram":
        c = Counter(self.counts)
        c.update(other.counts)
        return Histogram(counts=dict(sorted(c.items())), trials=self.trials + other.trials)

    def pmf(self) -> dict[int, float]:
        return {k: c / self.trials for k, c in self.counts.items()}

    def hit_rate(self) -> float:
        """Fraction of trials with a positive count."""
        return sum(c for k, c in self.counts.items() if k >= 1) / self.trials

    def mean(self) -> float:
        return sum(k * c for k, c in self.counts.items()) / self.trials

    def variance(self) -> float:
        if self.trials < 2:
            return 0.0
        mu = self.mean()
        return sum(c * (k - mu) ** 2 for k, c in self.counts.items()) / (self.trials - 1)

    def factorial_moment(self, r: int) -> tuple[float, float]:
        """Estimate of E((X)_r) and its standard error."""
        values = {k: _falling(k, r) for k in self.counts}
        est = sum(values[k] * c for k, c in self.counts.items()) / self.trials
        if self.trials < 2:
            return est, 0.0
        var = sum(c * (values[k] - est) ** 2 for k, c in self.counts.items()) / (self.trials - 1)
        return est, math.sqrt(var / self.trials)


class MomentEstimate(BaseModel):
    r: int
    estimate: float
    stderr: float
    target: float = Field(description="lambda^r")


class PoissonFit(BaseModel):
    lam: float
    tv_distance: float
    trials: int
    moments: list[MomentEstimate]


class SweepRow(BaseModel):
    family: str
    q: int
    n: int
    m: int | None = None
    delta: float
    trials: int
    seed: int
    p_hat: float
    stderr: float
    E_X: float
    mean_X: float
    tv: float | None = None
    r1: float
    r2: float
    r3: float
    r4: float
    # extra columns after the fixed ones
    scale: float
    markov: float
    M: int | None = None


SWEEP_COLUMNS = list(SweepRow.model_fields)
