# src/core/config.py

import os
from functools import lru_cache
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    Run-wide configuration. Every value can be overridden through a `SHIFTLAB_*`
    environment variable or a `.env` file in the working directory.
    """
    model_config = SettingsConfigDict(env_prefix="SHIFTLAB_", env_file=".env", extra="ignore")

    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1)
    seed: int = 0

    solver_time_budget: float = Field(120.0, gt=0, description="Seconds per exact solve.")
    canon_node_budget: int = Field(100_000, ge=1, description="Backtracking nodes per candidate coordinate set.")
    canon_sample_triples: int = Field(1000, ge=1)
    canon_exhaustive_limit: int = Field(8, ge=1, description="Largest ground for the exhaustive equivalence check.")

    tower_guard: int = Field(2**16, description="Largest ground set the recursive coloring may materialize.")
    max_vertices: int = Field(200_000, ge=1)
    verify_window: int = Field(8, ge=2)

    log_level: str = "INFO"
    log_file: Optional[str] = None
    log_json: bool = False


@lru_cache(maxsize=None)
def get_settings() -> Settings:
    return Settings()
