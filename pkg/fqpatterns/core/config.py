import os

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # App
    ENV: str = Field(default="dev")
    LOG_LEVEL: str = "INFO"

    # Caps (override globally with FQP_<NAME>)
    ENUM_CAP: int = 10_000          # max q^n for brute-force enumeration kinds
    PLANE_CAP: int = 2_000_000      # max |A(n,m)| for plane enumeration
    CENSUS_CAP: int = 20_000        # max |A| for pairwise intersection censuses
    SPACE_CAP: int = 1 << 24        # max q^n for sampling (bitset <= 2 MiB)

    # Monte Carlo
    WORKERS: int = Field(default_factory=lambda: os.cpu_count() or 1)
    DEFAULT_TRIALS: int = 100_000
    EXTREMAL_SEEDS: int = 10

    # Distributed shards; None keeps everything in-process
    BROKER_URL: str | None = None

    # Observability
    METRICS_PATH: str | None = None

    model_config = SettingsConfigDict(env_prefix="FQP_", env_file=".env", extra="ignore")


settings = Settings()
