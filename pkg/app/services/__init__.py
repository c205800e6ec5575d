# Path from repo root: app/services/__init__.py
from .base import BaseService
from .registry import available_service_names, get_service_instance, list_services, run_task


__all__ = [
    "BaseService",
    "available_service_names",
    "get_service_instance",
    "list_services",
    "run_task",
]
