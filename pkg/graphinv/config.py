"""Application configuration using Pydantic Settings."""

from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings loaded from GRAPHINV_* environment variables or a .env file."""

    model_config = SettingsConfigDict(
        env_prefix="GRAPHINV_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    # Logging
    log_level: str = "WARNING"  # DEBUG, INFO, WARNING, ERROR, CRITICAL
    log_json: bool = True  # JSON format for pipelines, False for human-readable

    # Enumeration limits
    max_lattice_vertices: int = 20  # 2^|V| subsets are filtered
    cycle_cap: int = 1_000_000
    monoid_bfs_cap: int = 100_000

    # Search bounds for three-valued answers
    cone_search_bound: int = 12
    leq_search_bound: int = 4

    # Isomorphism search caps
    lattice_iso_cap: int = 10_000
    diagram_iso_cap: int = 10_000

    # Finite-dimensional correspondences
    unitarity_tolerance: float = 1e-12
    ck_tolerance: float = 1e-12
    alignment_tolerance: float = 1e-10
    fd_seed: int = 0

    # Corpus workers
    threads: int = 1


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()
