from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from fqpatterns.services.sampler import RNG_ID

Command = Literal["census", "sweep", "poisson", "extremal", "sample", "exactprob"]

_NEEDS_FAMILY = {"census", "sweep", "poisson", "extremal"}


class RunConfig(BaseModel):
    """Everything a CLI run depends on; echoed into every output header."""

    model_config = ConfigDict(extra="forbid")

    command: Command
    family: Literal["3ap", "pg", "rt", "plane"] | None = None
    q: int | None = Field(default=None, ge=2, le=1 << 16)
    n: int | None = Field(default=None, ge=1)
    m: int | None = Field(default=None, ge=1)
    delta: float | None = Field(default=None, ge=0, le=1)
    M: int | None = Field(default=None, ge=0)
    f: int | None = Field(default=None, ge=0)
    lam: float | None = Field(default=None, gt=0)
    scales: list[float] | None = None
    model: Literal["bernoulli", "uniform"] = "bernoulli"
    trials: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, lt=1 << 64)
    seeds: int | None = Field(default=None, ge=1)
    qn: list[tuple[int, int]] | None = None
    format: Literal["csv", "json"] = "csv"
    out: str | None = None
    caps: dict[str, int] = Field(default_factory=dict)
    rng: str = RNG_ID

    @model_validator(mode="after")
    def _command_params(self):
        if self.command in _NEEDS_FAMILY and self.family is None:
            raise ValueError(f"{self.command} needs --family")
        table = self.command == "extremal" and bool(self.qn)
        if not table and (self.q is None or self.n is None):
            raise ValueError(f"{self.command} needs --q and --n")
        if self.scales is not None and (not self.scales or any(s <= 0 for s in self.scales)):
            raise ValueError("--scales must be positive multipliers")
        if self.command == "sample":
            if self.model == "bernoulli" and self.delta is None:
                raise ValueError("sample --model bernoulli needs --delta")
            if self.model == "uniform" and self.M is None:
                raise ValueError("sample --model uniform needs --M")
        if self.command == "exactprob" and (self.M is None or self.f is None):
            raise ValueError("exactprob needs --M and --f")
        if self.command == "poisson" and self.model == "uniform" and self.M is not None:
            raise ValueError("poisson derives M from --lambda; drop --M")
        if self.command == "sweep" and self.M is not None:
            raise ValueError("sweep derives M from --scales; drop --M")
        return self
