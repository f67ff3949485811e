from typing import Literal

from pydantic import BaseModel, Field, model_validator


class TrialJob(BaseModel):
    """One Monte Carlo job; plain JSON so it can cross process and broker boundaries."""

    kind: Literal["3ap", "pg", "rt", "plane"]
    q: int = Field(ge=2)
    n: int = Field(ge=1)
    m: int | None = None
    model: Literal["bernoulli", "uniform", "coupled", "coupled_uniform"] = "bernoulli"
    delta: float | None = Field(default=None, ge=0, le=1)
    M: int | None = Field(default=None, ge=0)
    deltas: list[float] | None = None
    Ms: list[int] | None = None
    seed: int = Field(default=0, ge=0, lt=1 << 64)
    with_y: bool = False

    @model_validator(mode="after")
    def _params_for_model(self):
        if self.model == "bernoulli" and self.delta is None:
            raise ValueError("bernoulli jobs need delta")
        if self.model == "uniform" and self.M is None:
            raise ValueError("uniform jobs need M")
        if self.model == "coupled":
            if not self.deltas:
                raise ValueError("coupled jobs need deltas")
            if any(not 0 <= d <= 1 for d in self.deltas) or self.deltas != sorted(self.deltas):
                raise ValueError("coupled deltas must be non-decreasing values in [0, 1]")
        if self.model == "coupled_uniform":
            if not self.Ms:
                raise ValueError("coupled_uniform jobs need Ms")
            if any(M < 0 for M in self.Ms) or self.Ms != sorted(self.Ms):
                raise ValueError("coupled sizes must be non-decreasing and non-negative")
        return self


class TrialSummary(BaseModel):
    trial: int
    X: int
    Y: int | None = None
    size: int
