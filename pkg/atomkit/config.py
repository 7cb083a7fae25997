"""
Configuration management for atomkit
Centralizes environment variables and provides type-safe configuration
"""

from typing import Literal, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Toolkit settings with ATOMKIT_-prefixed environment variable support"""

    model_config = SettingsConfigDict(
        env_prefix="ATOMKIT_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    # Service Configuration
    SERVICE_NAME: str = Field(default="atomkit")
    APP_RELEASE: str = Field(default="0.1.0")
    ENVIRONMENT: str = Field(default="development")

    # Numerical Configuration
    TOL: float = Field(default=1e-9, gt=0)
    RANK_RTOL: float = Field(default=1e-10, gt=0)
    NORM_SAMPLES: int = Field(default=256, ge=1)
    CHECK_SAMPLES: int = Field(default=1000, ge=1)
    POWER_ITERATIONS: int = Field(default=50, ge=1)
    NORM_MODE: Literal["flat", "row-sup"] = Field(default="row-sup")

    # Suite Configuration
    SEED: int = Field(default=0, ge=0, lt=2**64)
    INSTANCES: int = Field(default=100, ge=0)
    WORKERS: int = Field(default=1, ge=1)

    # Output Configuration
    JSON_OUT: Optional[str] = Field(default=None)
    METRICS_OUT: Optional[str] = Field(default=None)
    QUIET: bool = Field(default=False)

    # Logging Configuration
    LOG_LEVEL: str = Field(default="INFO")
    LOG_FORMAT: Literal["json", "simple"] = Field(default="json")
    LOGS_DIR: Optional[str] = Field(default=None)

    # Sentry Configuration
    SENTRY_ENABLED: bool = Field(default=False)
    SENTRY_DSN: Optional[str] = Field(default=None)
    SENTRY_ENV: str = Field(default="development")

    @field_validator("LOG_LEVEL")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        return value.upper()

    @property
    def is_production(self) -> bool:
        """Check if running in production environment"""
        return self.ENVIRONMENT.lower() in ["production", "prod"]

    @property
    def is_development(self) -> bool:
        """Check if running in development environment"""
        return self.ENVIRONMENT.lower() in ["development", "dev"]


# Global settings instance
settings = Settings()

DEFAULT_TOL = settings.TOL
RANK_RTOL = settings.RANK_RTOL
