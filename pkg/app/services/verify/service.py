# Path from repo root: app/services/verify/service.py
from __future__ import annotations

import logging
import time
from typing import Any, Literal

from pydantic import BaseModel

from app.core.csv_io import render_csv, write_csv
from app.core.errors import parse_model
from app.services.base import BaseService
from app.services.verify.suites import VERIFY_COLUMNS, run_suite, suite_names


log = logging.getLogger("services.verify")


class VerifyRequest(BaseModel):
    model_config = {"extra": "forbid"}

    suite: str = "all"
    profile: Literal["quick", "full"] = "full"
    seed: int = 0
    out: str | None = None


class Service(BaseService):
    name = "verify"
    tasks = ["verify", "list_suites"]

    def verify(self, payload: dict[str, Any]) -> dict[str, Any]:
        req: VerifyRequest = parse_model(VerifyRequest, payload)
        t0 = time.perf_counter()
        checks = run_suite(req.suite, req.profile, req.seed)
        rows = [c.row() for c in checks]
        out = str(write_csv(req.out, VERIFY_COLUMNS, rows)) if req.out else None
        failed = [f"{c.suite}/{c.check}" for c in checks if not c.passed]
        log.info(
            "verify suite=%s profile=%s: %d checks, %d failed in %.1fs",
            req.suite, req.profile, len(checks), len(failed), time.perf_counter() - t0,
        )
        return {
            "ok": True,
            "passed": not failed,
            "failed": failed,
            "checks": len(checks),
            "out": out,
            "csv": render_csv(VERIFY_COLUMNS, rows),
        }

    def list_suites(self, payload: dict[str, Any]) -> dict[str, Any]:
        return {"ok": True, "suites": suite_names()}
