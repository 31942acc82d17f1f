"""
Core configuration for the LPS toolkit
Settings for enumeration guards, caching, logging and CLI defaults
"""
from typing import Literal, Optional
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with environment variable support (prefix ``LPS_``)"""

    model_config = SettingsConfigDict(
        env_prefix="LPS_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    app_name: str = "lps-toolkit"
    app_version: str = "0.1.0"
    environment: Literal["development", "testing", "production"] = "development"
    log_level: str = "WARNING"
    log_serialize: bool = False
    log_file: Optional[str] = None

    # Result cache
    cache_path: str = "./data/lps_cache.tsv"

    # Enumeration guards
    bruteforce_max_n: int = Field(default=14, ge=1)
    membership_max_n: int = Field(default=40, ge=1)
    count_timeout_seconds: float = Field(default=600.0, gt=0)
    count_threads: int = Field(default=1, ge=1)
    # largest n for which bounds and family checks compute D(n) on their own
    count_exact_max_n: int = Field(default=120, ge=1)

    # Families
    family_exhaustive_max_n: int = Field(default=16, ge=1)
    family_sample_size: int = Field(default=256, ge=1)

    # Bounds
    default_tolerance: float = Field(default=1e-9, gt=0, lt=1)


# Global settings instance
settings = Settings()
