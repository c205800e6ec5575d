# Path from repo root: app/services/train/service.py
from __future__ import annotations

import hashlib
import logging
from typing import Any, Literal

from pydantic import BaseModel, Field

from app.adversary.config import AdversaryConfig
from app.core.config import get_settings
from app.core.errors import ConfigError, parse_model
from app.data.dataset import Dataset, generate_dataset
from app.data.io import load_csv
from app.services.base import BaseService
from app.trainer.config import TrainConfig
from app.trainer.loop import TrainResult, train
from app.trainer.metrics import render_metrics_csv, write_metrics_csv


log = logging.getLogger("services.train")


class TrainRequest(BaseModel):
    """Flat run description shared by the CLI flags and the HTTP payload."""

    model_config = {"extra": "forbid"}

    m: int = 1024
    d: int = 8
    n: int = 8
    tau: float = 0.0
    rho: float = 0.0
    eps: float = 0.1
    K: float = 1.0
    seed: int = 0
    adversary: Literal["null", "random", "pgd"] = "null"
    pgd_steps: int | None = None
    pgd_step_size: float | None = None
    projection_rounds: int | None = None
    engine: Literal["hsr", "dense"] = "hsr"
    eta: float | None = None
    T: int | None = None
    workers: int | None = None
    adversary_uses_index: bool = True
    track_diagnostics: bool = True
    log_every: int = Field(10, ge=0)
    # dataset: loaded from `dataset` when given, generated otherwise
    dataset: str | None = None
    eps_sep: float = 0.5
    label_mode: Literal["sign", "smooth"] = "sign"
    out: str | None = None

    def adversary_config(self) -> AdversaryConfig:
        knobs = {
            "steps": self.pgd_steps,
            "step_size": self.pgd_step_size,
            "projection_rounds": self.projection_rounds,
        }
        data = {"kind": self.adversary, "rho": self.rho, **{k: v for k, v in knobs.items() if v is not None}}
        return parse_model(AdversaryConfig, data)

    def train_config(self) -> TrainConfig:
        data = {
            "eps": self.eps,
            "K": self.K,
            "m": self.m,
            "d": self.d,
            "n": self.n,
            "tau": self.tau,
            "rho": self.rho,
            "seed": self.seed,
            "eta": self.eta,
            "T": self.T,
            "adversary": self.adversary_config(),
            "engine": self.engine,
            "workers": self.workers or get_settings().WORKERS,
            "adversary_uses_index": self.adversary_uses_index,
            "track_diagnostics": self.track_diagnostics,
            "log_every": self.log_every,
        }
        return parse_model(TrainConfig, data)

    def load_dataset(self) -> Dataset:
        if self.dataset:
            ds = load_csv(self.dataset)
            if ds.rho != self.rho:
                log.warning("dataset %s was generated for rho=%g, training with rho=%g", self.dataset, ds.rho, self.rho)
            return ds
        if not self.eps_sep > 2.0 * self.rho:
            raise ConfigError(f"eps_sep={self.eps_sep} must exceed 2*rho={2.0 * self.rho}")
        return generate_dataset(self.n, self.d, self.eps_sep, self.rho, self.label_mode, self.seed)


def weights_digest(result: TrainResult) -> str:
    """sha256 of the final W bytes; equal digests mean bit-identical weights."""
    return hashlib.sha256(result.params.W.tobytes()).hexdigest()


class Service(BaseService):
    name = "train"
    tasks = ["train"]

    def train(self, payload: dict[str, Any]) -> dict[str, Any]:
        req: TrainRequest = parse_model(TrainRequest, payload)
        cfg = req.train_config()
        ds = req.load_dataset()
        result = train(cfg, ds)

        out = str(write_metrics_csv(req.out, result.metrics)) if req.out else None
        last = result.metrics[-1] if result.metrics else None
        return {
            "ok": True,
            "engine": cfg.engine,
            "T": result.T,
            "eta": result.eta,
            "iterations": len(result.metrics),
            "final_robust_loss": last.robust_loss if last else None,
            "d_max": result.d_max,
            "weights_sha256": weights_digest(result),
            "engine_stats": result.engine_stats,
            "out": out,
            "metrics_csv": render_metrics_csv(result.metrics),
        }
