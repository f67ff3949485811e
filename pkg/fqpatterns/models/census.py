from pydantic import BaseModel, Field


class CensusReport(BaseModel):
    family: str
    q: int
    n: int
    m: int | None = None
    A_size: int = Field(description="|A|")
    I: dict[int, int] = Field(description="ordered pairs (T, T') by intersection size")
    delta: float
    E_X: float
    E_Y: float
    t: float = Field(description="threshold scale")
    ratios: dict[str, float | None] = Field(
        description="C1 = I_0/|A|^2, C2 = E(Y)/E(X)^2 at delta = 4t"
    )
    plane_diagnostics: list[float] = Field(default_factory=list)
    paley_zygmund: float
    markov: float
