# Path from repo root: app/hsr/config.py
from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from app.core.config import get_settings


def _settings():
    return get_settings()


class IndexConfig(BaseModel):
    """Tree shape and maintenance policy of an HsrIndex."""

    leaf_size: int = Field(default_factory=lambda: _settings().HSR_LEAF_SIZE, ge=1)
    rebuild_fraction: float = Field(default_factory=lambda: _settings().HSR_REBUILD_FRACTION, gt=0.0)
    overflow_factor: int = Field(default_factory=lambda: _settings().HSR_OVERFLOW_FACTOR, ge=1)
    split_rule: Literal["spread", "random"] = Field(default_factory=lambda: _settings().HSR_SPLIT_RULE)
    seed: int = 0

    model_config = {"frozen": True}
