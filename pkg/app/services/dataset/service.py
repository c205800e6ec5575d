# Path from repo root: app/services/dataset/service.py
from __future__ import annotations

import logging
import math
from typing import Any, Literal

from pydantic import BaseModel, Field

from app.core.errors import parse_model
from app.data.dataset import Dataset, check_separability, generate_dataset
from app.data.io import dataset_to_csv, load_csv, save_csv
from app.services.base import BaseService


log = logging.getLogger("services.dataset")


class GenerateRequest(BaseModel):
    model_config = {"extra": "forbid"}

    n: int = Field(8, ge=1)
    d: int = Field(8, ge=2)
    eps_sep: float = Field(0.5, gt=0.0)
    rho: float = Field(0.0, ge=0.0)
    label_mode: Literal["sign", "smooth"] = "sign"
    seed: int = 0
    budget: int | None = Field(None, ge=1)
    out: str | None = None


class SeparabilityRequest(BaseModel):
    model_config = {"extra": "forbid"}

    path: str
    rho: float | None = Field(None, ge=0.0)


def _finite(v: float) -> float | None:
    return v if math.isfinite(v) else None


def describe(ds: Dataset) -> dict[str, Any]:
    return {
        "n": ds.n,
        "d": ds.d,
        "eps_sep": _finite(ds.eps_sep),
        "rho": ds.rho,
        "min_distance": _finite(ds.min_distance),
        "gamma": _finite(ds.gamma),
    }


class Service(BaseService):
    name = "dataset"
    tasks = ["generate", "separability"]

    def generate(self, payload: dict[str, Any]) -> dict[str, Any]:
        req: GenerateRequest = parse_model(GenerateRequest, payload)
        ds = generate_dataset(
            req.n, req.d, req.eps_sep, req.rho, req.label_mode, req.seed, budget=req.budget
        )
        out = str(save_csv(ds, req.out)) if req.out else None
        log.info("generated dataset n=%d d=%d eps_sep=%g rho=%g -> %s", ds.n, ds.d, ds.eps_sep, ds.rho, out or "-")
        return {"ok": True, **describe(ds), "out": out, "csv": dataset_to_csv(ds)}

    def separability(self, payload: dict[str, Any]) -> dict[str, Any]:
        req: SeparabilityRequest = parse_model(SeparabilityRequest, payload)
        ds = load_csv(req.path)
        check = check_separability(ds, req.rho)
        return {
            "ok": True,
            **describe(ds),
            "measured_eps": _finite(check.eps),
            "measured_gamma": _finite(check.gamma),
            "vacuous": check.vacuous,
            "separable": check.separable,
        }
