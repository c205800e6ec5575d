# Path from repo root: app/services/registry.py
"""
Service discovery: every direct subpackage of app.services holding a service.py is a
service. manifest.json (name, description, tasks) is read at discovery time; the
Service class itself is imported and instantiated on first use and cached.
"""
from __future__ import annotations

import importlib
import json
import logging
import pkgutil
import threading
from dataclasses import dataclass, field
from pathlib import Path
from types import ModuleType
from typing import Any

from app.core.errors import UnknownTaskError
from app.services.base import BaseService


log = logging.getLogger("services")


# ----------------------------
# Registry & lightweight proxy
# ----------------------------
@dataclass
class ManifestProxy:
    """Metadata for a service that has not been imported yet."""

    name: str
    package: str
    description: str = ""
    tasks: list[str] = field(default_factory=list)


REGISTRY: dict[str, ManifestProxy | BaseService] = {}
MANIFESTS: dict[str, dict] = {}
_DISCOVERED = False
_LOCK = threading.Lock()


# ----------------------------
# Internal helpers
# ----------------------------
def _services_package() -> ModuleType:
    return importlib.import_module("app.services")


def _read_manifest(pkg_name: str) -> dict:
    """<package>/manifest.json, or {} when absent or invalid."""
    try:
        pkg = importlib.import_module(pkg_name)
        mf = Path(getattr(pkg, "__file__", "")).parent / "manifest.json"
        if mf.is_file():
            return json.loads(mf.read_text(encoding="utf-8"))
    except (OSError, ValueError, ImportError) as e:
        log.warning("ignoring manifest of %s: %s", pkg_name, e)
    return {}


def _discover_once() -> None:
    global _DISCOVERED
    with _LOCK:
        if _DISCOVERED:
            return
        base_pkg = _services_package()
        for m in pkgutil.iter_modules(base_pkg.__path__, base_pkg.__name__ + "."):
            short = m.name.rsplit(".", 1)[-1]
            if not m.ispkg or short.startswith("_"):
                continue
            manifest = _read_manifest(m.name)
            name = manifest.get("name") or short
            tasks = manifest.get("tasks")
            REGISTRY.setdefault(
                name,
                ManifestProxy(
                    name=name,
                    package=m.name,
                    description=str(manifest.get("description", "")),
                    tasks=[str(t) for t in tasks] if isinstance(tasks, (list, tuple)) else [],
                ),
            )
            MANIFESTS[name] = manifest
        _DISCOVERED = True


def _materialize(proxy: ManifestProxy) -> BaseService:
    mod = importlib.import_module(f"{proxy.package}.service")
    inst: BaseService = mod.Service()
    inst.load()
    return inst


# ----------------------------
# Public API
# ----------------------------
def ensure_services_loaded() -> None:
    _discover_once()


def available_service_names() -> list[str]:
    ensure_services_loaded()
    return sorted(REGISTRY)


def list_services() -> dict[str, dict]:
    """name -> {description, tasks} without importing any service module."""
    ensure_services_loaded()
    out = {}
    for name, entry in REGISTRY.items():
        desc = entry.description if isinstance(entry, ManifestProxy) else MANIFESTS.get(name, {}).get("description", "")
        out[name] = {"description": desc, "tasks": list(entry.tasks)}
    return out


def get_service_instance(name: str) -> BaseService:
    """Concrete service, materialized on first access and cached."""
    ensure_services_loaded()
    entry = REGISTRY.get(name)
    if entry is None:
        raise UnknownTaskError(f"unknown service {name!r}; available: {available_service_names()}")
    if isinstance(entry, ManifestProxy):
        with _LOCK:
            entry = REGISTRY[name]
            if isinstance(entry, ManifestProxy):
                entry = _materialize(entry)
                REGISTRY[name] = entry
    return entry


def run_task(service: str, task: str, payload: dict[str, Any] | None = None) -> dict[str, Any]:
    """
    Run one task of a registered service; the CLI and the HTTP router both go through here.

    Args:
        service (str): Service name from its manifest, e.g. "train" or "bench".
        task (str): Task name listed in that manifest.
        payload (dict | None): Task arguments, validated by the service's request model.

    Returns:
        dict[str, Any]: The task result (rows, csv text, summary fields).

    Raises:
        UnknownTaskError: The service or task is not registered.
        ConfigError: The payload fails validation.
    """
    return get_service_instance(service).run(task, payload)
