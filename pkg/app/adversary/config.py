# Path from repo root: app/adversary/config.py
from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator

from app.core.config import get_settings


class AdversaryConfig(BaseModel):
    """rho-bounded adversary: which attack, its l2 budget and PGD knobs."""

    kind: Literal["null", "random", "pgd"] = "null"
    rho: float = Field(0.0, ge=0.0)
    steps: int = Field(default_factory=lambda: get_settings().PGD_STEPS, ge=0)
    step_size: float = Field(default_factory=lambda: get_settings().PGD_STEP_SIZE, gt=0.0)
    projection_rounds: int = Field(default_factory=lambda: get_settings().PROJECTION_ROUNDS, ge=0)

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def _pgd_needs_steps(self) -> AdversaryConfig:
        if self.kind == "pgd" and self.steps < 1:
            raise ValueError("pgd adversary requires steps >= 1")
        return self
