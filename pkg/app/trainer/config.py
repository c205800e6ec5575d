# Path from repo root: app/trainer/config.py
from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, field_validator, model_validator

from app.adversary.config import AdversaryConfig
from app.core.config import get_settings
from app.hsr.config import IndexConfig
from app.trainer.hparams import derive_hparams


Engine = Literal["hsr", "dense"]


class TrainConfig(BaseModel):
    """
    One training run. `eta` and `T` are derived from (eps, K, m) unless given.

    The engine flag only changes how active sets are found, never the results.
    """

    eps: float = Field(0.1, gt=0.0, lt=1.0)
    K: float = Field(1.0, gt=0.0)
    m: int = Field(1024, ge=1)
    d: int = Field(8, ge=2)
    n: int = Field(8, ge=1)
    tau: float = Field(0.0, ge=0.0)
    rho: float = Field(0.0, ge=0.0)
    seed: int = 0
    eta: float | None = Field(None, gt=0.0)
    T: int | None = Field(None, ge=0)
    adversary: AdversaryConfig = Field(default_factory=AdversaryConfig)
    engine: Engine = "hsr"
    loss: str = "absolute"
    workers: int = Field(default_factory=lambda: get_settings().WORKERS, ge=1)
    adversary_uses_index: bool = True
    track_diagnostics: bool = True
    keep_snapshots: bool = False
    log_every: int = Field(10, ge=0)
    index: IndexConfig = Field(default_factory=IndexConfig)

    @field_validator("tau")
    @classmethod
    def _finite_tau(cls, v: float) -> float:
        if v != v or v in (float("inf"), float("-inf")):
            raise ValueError("tau must be finite")
        return v

    @model_validator(mode="after")
    def _sync_rho(self) -> TrainConfig:
        if self.adversary.rho != self.rho:
            self.adversary = self.adversary.model_copy(update={"rho": self.rho})
        return self

    def hparams(self) -> tuple[float, int]:
        """(eta, T) after applying overrides."""
        eta, T = derive_hparams(self.eps, self.K, self.m)
        return (self.eta if self.eta is not None else eta), (self.T if self.T is not None else T)
