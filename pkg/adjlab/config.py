"""
Configuration settings for adjlab.
"""

from pydantic import Field
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings."""

    # Logging settings
    log_level: str = Field(default="INFO", description="Logging level")
    log_file: str = Field(default="", description="Log file path")

    # Sampling and shells
    seed: int = Field(default=42, description="Seed for every random stream")
    k_min: int = Field(default=2, description="First dyadic shell index")
    k_max: int = Field(default=12, description="Last dyadic shell index")
    samples: int = Field(default=20000, description="Monte Carlo samples per shell")
    quadrature_radial: int = Field(default=24, description="Gauss-Legendre nodes per annulus")
    quadrature_angular: int = Field(default=64, description="Angular nodes per annulus")
    verdict_delta: float = Field(default=0.1, description="Half-width of the inconclusive ratio band")
    discard_limit: float = Field(default=0.01, description="Discarded-sample fraction forcing an inconclusive verdict")
    workers: int = Field(default=4, description="Threads used for shell integration")

    # Exact core
    max_steps: int = Field(default=32, description="Blow-up budget of the plane-curve resolver")
    degree_bound: int | None = Field(default=None, description="Monomial enumeration bound (None = per-operation)")

    # Adjunction checks
    mu_samples: int = Field(default=100, description="Regular points for the residue index check")
    mu_tolerance: float = Field(default=1e-8, description="Allowed relative deviation between residue indices")

    model_config = {
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "env_prefix": "ADJLAB_",
        "case_sensitive": False,
        "extra": "ignore",  # Ignore extra fields not defined in the model
    }


def get_settings() -> Settings:
    """Get application settings."""
    return Settings()
