# Path from repo root: app/services/base.py
from __future__ import annotations

from typing import Any

from app.core.errors import UnknownTaskError


class BaseService:
    # Service name and supported tasks
    name: str = "base"
    tasks: list[str] = []

    def load(self) -> None:
        # Load resources if needed
        return

    def run(self, task: str, payload: dict[str, Any] | None = None) -> dict[str, Any]:
        """Dispatch `task` to the method of the same name; tasks take one payload dict."""
        if task not in self.tasks:
            raise UnknownTaskError(f"service {self.name!r} has no task {task!r}; available: {self.tasks}")
        return getattr(self, task)(dict(payload or {}))
