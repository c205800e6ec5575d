# Path from repo root: app/api/router_tasks.py
from __future__ import annotations

import asyncio
import logging
import math
from typing import Annotated, Any

from fastapi import APIRouter, Body
from pydantic import BaseModel, Field

from app.core.errors import AdvTrainError
from app.services.registry import list_services, run_task


log = logging.getLogger("api.tasks")

router = APIRouter(prefix="/tasks", tags=["tasks"])


# ---------- Models ----------
class TaskRequest(BaseModel):
    service: str = Field(..., description="Service name, e.g. 'train' or 'verify'.")
    task: str = Field(..., description="Task exposed by the service, e.g. 'train'.")
    payload: dict[str, Any] = Field(default_factory=dict, description="Task arguments (same keys as the CLI flags).")


class TaskResponse(BaseModel):
    ok: bool
    result: dict[str, Any] | None = None
    error: str | None = None


# ---------- Routes ----------
@router.get("")
def list_tasks() -> dict[str, dict[str, Any]]:
    """Services with their description and tasks."""
    return list_services()


@router.post("/run", response_model=TaskResponse)
async def run(req: Annotated[TaskRequest, Body(...)]) -> TaskResponse:
    """
    Run one service task in a worker thread.
    - Unknown service/task -> 404 via the registered handlers.
    - Engine errors are returned as ok=false with the message.
    """
    try:
        result = await asyncio.to_thread(run_task, req.service, req.task, req.payload)
    except AdvTrainError as e:
        if isinstance(e, LookupError):
            raise
        log.info("task %s.%s failed: %s", req.service, req.task, e)
        return TaskResponse(ok=False, error=f"{type(e).__name__}: {e}")
    return TaskResponse(ok=True, result=_json_safe(result))


def _json_safe(value: Any) -> Any:
    """NaN and +-inf become null; JSON has no spelling for them."""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value
