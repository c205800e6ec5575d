# Path from repo root: app/core/config.py
from __future__ import annotations

from functools import lru_cache
from pathlib import Path
from typing import Any, Literal

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


# ------------------------------------------------------------------------------
# .env (optional), loaded before Settings reads the environment
# ------------------------------------------------------------------------------
try:
    from dotenv import load_dotenv

    load_dotenv()
except Exception:
    pass

# ------------------------------------------------------------------------------
# Anchor roots (independent of CWD)
# PROJECT_ROOT points to the repository root (parent of app/)
# ------------------------------------------------------------------------------
PROJECT_ROOT = Path(__file__).resolve().parents[2]


class Settings(BaseSettings):
    """
    Engine configuration using pydantic-settings.

    - Reads from environment with prefix 'ADVTRAIN_' (e.g., ADVTRAIN_LOG_LEVEL, ADVTRAIN_WORKERS)
    - Also reads a .env file at project root (if present).
    - Run-level configs (TrainConfig, IndexConfig, ...) take their defaults from here.
    """

    # ================================
    # Basic configuration
    # ================================
    APP_NAME: str = "sublinear-advtrain"
    VERSION: str = "0.1.0"
    ENV: str = Field("development", description="development | staging | production")
    HOST: str = "127.0.0.1"
    PORT: int = 8000
    EXPOSE_ENV_ENDPOINT: bool = False
    ENV_SECRET_TOKEN: str | None = None

    # ================================
    # Logging configuration
    # ================================
    LOG_LEVEL: str = "info"
    LOG_LEVEL_TRAINER: str = "info"
    LOG_CONSOLE_FORMAT: str = "%(asctime)s %(levelname)s [%(name)s] %(message)s"

    LOG_ERRORS_TO_FILE: bool = False
    ERROR_LOG_FILE: Path = PROJECT_ROOT / "logs" / "errors.log"
    ERROR_LOG_MAX_BYTES: int = 1_048_576  # 1 MB
    ERROR_LOG_BACKUPS: int = 5

    LOG_TRAINER_TO_FILE: bool = False
    TRAINER_LOG_FILE: Path = PROJECT_ROOT / "logs" / "trainer.log"

    # ================================
    # Outputs
    # ================================
    OUTPUT_DIR: Path = PROJECT_ROOT / "runs"
    CSV_FLOAT_DIGITS: int = 17

    # ================================
    # Performance
    # ================================
    WORKERS: int = Field(1, ge=1, description="threads for the read-only attack/query phase")

    # ================================
    # Half-space reporting index
    # ================================
    HSR_LEAF_SIZE: int = Field(32, ge=1)
    HSR_REBUILD_FRACTION: float = Field(0.25, gt=0.0)
    HSR_OVERFLOW_FACTOR: int = Field(2, ge=1)
    HSR_SPLIT_RULE: Literal["spread", "random"] = "spread"

    # ================================
    # Adversary
    # ================================
    PROJECTION_ROUNDS: int = Field(8, ge=0)
    PGD_STEPS: int = Field(5, ge=1)
    PGD_STEP_SIZE: float = Field(0.05, gt=0.0)

    # ================================
    # Data / polynomials
    # ================================
    REJECTION_BUDGET: int = Field(100_000, ge=1)
    POLY_HIGH_PRECISION: bool = False
    POLY_DECIMAL_DIGITS: int = Field(60, ge=20)

    # ================================
    # pydantic-settings configuration
    # ================================
    model_config = SettingsConfigDict(
        env_file=".env",
        env_prefix="ADVTRAIN_",
        case_sensitive=False,
        extra="ignore",
    )

    def model_post_init(self, __context: Any) -> None:
        self.OUTPUT_DIR = Path(self.OUTPUT_DIR)

    # -------------------------------
    # Utilities
    # -------------------------------
    def ensure_directories(self) -> None:
        """Create log/output directories that are actually in use."""
        paths = [self.OUTPUT_DIR]
        if self.LOG_ERRORS_TO_FILE:
            paths.append(self.ERROR_LOG_FILE.parent)
        if self.LOG_TRAINER_TO_FILE:
            paths.append(self.TRAINER_LOG_FILE.parent)
        for p in paths:
            Path(p).resolve().mkdir(parents=True, exist_ok=True)

    def summary(self) -> dict:
        """Small snapshot for /env and the CLI --verbose header."""
        return {
            "app": self.APP_NAME,
            "version": self.VERSION,
            "env": self.ENV,
            "workers": self.WORKERS,
            "output_dir": str(Path(self.OUTPUT_DIR).resolve()),
            "hsr": {
                "leaf_size": self.HSR_LEAF_SIZE,
                "rebuild_fraction": self.HSR_REBUILD_FRACTION,
                "overflow_factor": self.HSR_OVERFLOW_FACTOR,
                "split_rule": self.HSR_SPLIT_RULE,
            },
            "adversary": {
                "projection_rounds": self.PROJECTION_ROUNDS,
                "pgd_steps": self.PGD_STEPS,
                "pgd_step_size": self.PGD_STEP_SIZE,
            },
            "poly": {
                "high_precision": self.POLY_HIGH_PRECISION,
                "decimal_digits": self.POLY_DECIMAL_DIGITS,
            },
            "logs": {
                "console": self.LOG_LEVEL,
                "errors_file": str(self.ERROR_LOG_FILE) if self.LOG_ERRORS_TO_FILE else None,
                "trainer_file": str(self.TRAINER_LOG_FILE) if self.LOG_TRAINER_TO_FILE else None,
            },
        }


@lru_cache
def get_settings() -> Settings:
    """Cached singleton pattern to load engine settings once."""
    return Settings()
