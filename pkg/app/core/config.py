"""
Configuration management for the Lagrangian configuration toolkit
"""

import os
from fractions import Fraction
from functools import lru_cache
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


class Settings(BaseSettings):
    """Application settings with environment variable support"""
    model_config = SettingsConfigDict(env_file=".env", case_sensitive=False, extra="ignore")

    # Parallelism
    workers: int = Field(default_factory=lambda: os.cpu_count() or 1, ge=1, validation_alias="LAGCONF_WORKERS")

    # Novikov arithmetic
    zero_tolerance: float = Field(default=1e-12, gt=0, validation_alias="LAGCONF_ZERO_TOLERANCE")
    series_order: str = Field(default="2", validation_alias="LAGCONF_SERIES_ORDER")

    # Numerical oracle
    newton_tolerance: float = Field(default=1e-10, gt=0, validation_alias="LAGCONF_NEWTON_TOLERANCE")
    newton_max_iterations: int = Field(default=100, ge=1, validation_alias="LAGCONF_NEWTON_MAX_ITERATIONS")
    relation_tolerance: float = Field(default=1e-9, gt=0, validation_alias="LAGCONF_RELATION_TOLERANCE")

    # Combinatorics
    max_window: int = Field(default=22, ge=1, validation_alias="LAGCONF_MAX_WINDOW")

    # Logging
    log_level: str = Field(default="INFO", validation_alias="LAGCONF_LOG_LEVEL")

    # Server Settings
    port: int = Field(default=8000, validation_alias="PORT")
    host: str = Field(default="0.0.0.0", validation_alias="HOST")

    # Artifacts
    output_dir: str = Field(default=".", validation_alias="LAGCONF_OUTPUT_DIR")

    @field_validator("series_order")
    @classmethod
    def _rational_order(cls, value: str) -> str:
        if Fraction(value) <= 0:
            raise ValueError("series_order must be positive")
        return value

    @property
    def series_order_fraction(self) -> Fraction:
        """Relative truncation order for e^beta expansions"""
        return Fraction(self.series_order)


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings instance

    Returns:
        Singleton Settings instance

    Note:
        Uses lru_cache to ensure only one instance is created
    """
    return Settings()


# Global settings instance - use this for imports
settings = get_settings()
