from pydantic import BaseModel, Field


class FreeSetResult(BaseModel):
    family: str
    q: int
    n: int
    m: int | None = None
    seed: int
    delta_used: float
    initial_size: int
    initial_patterns: int
    deleted: int
    size: int
    certified: bool
    chebyshev: float = Field(description="upper bound on P(|E| strays from q^n delta by half)")
    points: list[int] = Field(description="sorted point indices of the A-free set")


class ExtremalRow(BaseModel):
    family: str
    q: int
    n: int
    m: int | None = None
    size: int
    seed: int
    delta: float
    rate: float = Field(description="q-power growth rate the deletion method guarantees")
    ratio: float
    certified: bool


EXTREMAL_COLUMNS = list(ExtremalRow.model_fields)
