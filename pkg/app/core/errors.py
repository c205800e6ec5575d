# Path from repo root: app/core/errors.py
from __future__ import annotations

import logging
from typing import Any

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, ValidationError
from starlette.exceptions import HTTPException as StarletteHTTPException
from starlette.status import (
    HTTP_404_NOT_FOUND,
    HTTP_422_UNPROCESSABLE_ENTITY,
    HTTP_500_INTERNAL_SERVER_ERROR,
)

from app.core.config import get_settings


log = logging.getLogger("errors")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


# ---------------------------
# Domain exceptions
# ---------------------------
class AdvTrainError(Exception):
    """Base class for every error raised by the engine."""


class ConfigError(AdvTrainError, ValueError):
    """Invalid configuration or parameter range."""


class DimensionMismatchError(AdvTrainError, ValueError):
    """A vector or matrix does not have the expected shape."""


class DomainError(AdvTrainError, ValueError):
    """A point is not on the sphere-cap domain within tolerance."""


class DuplicateIdError(AdvTrainError, KeyError):
    """The same id appears twice in a bulk build."""


class LiveIdError(AdvTrainError, KeyError):
    """Insert of an id that is already live in the index."""


class MissingIdError(AdvTrainError, KeyError):
    """Remove of an id that is not live in the index."""


class IndexCorruptionError(AdvTrainError, RuntimeError):
    """An index invariant was found broken."""


class InfeasibleDatasetError(AdvTrainError, RuntimeError):
    """Rejection sampling ran out of budget before placing every point."""


class SeparabilityError(AdvTrainError, ValueError):
    """The dataset is not separable for the requested adversary budget."""


class UnknownTaskError(AdvTrainError, LookupError):
    """Unknown service, task or verification suite."""


_USAGE_ERRORS = (ConfigError, UnknownTaskError, ValidationError)


def exit_code_for(exc: BaseException) -> int:
    """
    Map an exception to the CLI exit code.

    Args:
        exc (BaseException): The exception that ended the command.

    Returns:
        int: EXIT_USAGE (2) for ConfigError, UnknownTaskError and pydantic ValidationError;
        EXIT_RUNTIME (1) for everything else.
    """
    if isinstance(exc, _USAGE_ERRORS):
        return EXIT_USAGE
    return EXIT_RUNTIME


def check_dim(name: str, actual: int, expected: int) -> None:
    """Raise DimensionMismatchError unless `actual == expected`."""
    if actual != expected:
        raise DimensionMismatchError(f"{name}: expected dimension {expected}, got {actual}")


def parse_model(model: type[BaseModel], data: dict[str, Any]) -> Any:
    """model.model_validate(data) with pydantic's ValidationError surfaced as ConfigError."""
    try:
        return model.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or model.__name__}: {err['msg']}" for err in e.errors()
        )
        raise ConfigError(f"invalid {model.__name__}: {problems}") from e


# ---------------------------
# HTTP mapping
# ---------------------------
def _request_id(request: Request) -> str | None:
    return getattr(request.state, "request_id", None)


def _render(request: Request, status_code: int, message: str, *, details: Any = None) -> JSONResponse:
    """Return the uniform JSON error body."""
    return JSONResponse(
        status_code=status_code,
        content={
            "code": status_code,
            "message": message,
            "details": details,
            "path": str(request.url.path),
            "method": request.method,
            "request_id": _request_id(request),
        },
    )


def register_exception_handlers(app: FastAPI) -> None:
    """Register all custom exception handlers with the FastAPI app."""

    @app.exception_handler(StarletteHTTPException)
    async def http_exc(request: Request, exc: StarletteHTTPException):
        if exc.status_code == HTTP_404_NOT_FOUND:
            log.info("404 Not Found: %s (%s)", request.url.path, _request_id(request))
            return _render(request, HTTP_404_NOT_FOUND, str(exc.detail or "Not Found"))
        log.warning("HTTP %s: %s", exc.status_code, exc.detail)
        return _render(request, exc.status_code, str(exc.detail) if exc.detail else "HTTP Error")

    @app.exception_handler(RequestValidationError)
    async def request_validation_exc(request: Request, exc: RequestValidationError):
        log.debug("422 RequestValidationError on %s", request.url.path, exc_info=exc)
        return _render(request, HTTP_422_UNPROCESSABLE_ENTITY, "Validation error", details=exc.errors())

    @app.exception_handler(ValidationError)
    async def pydantic_validation_exc(request: Request, exc: ValidationError):
        log.debug("422 Pydantic ValidationError on %s", request.url.path, exc_info=exc)
        return _render(
            request,
            HTTP_422_UNPROCESSABLE_ENTITY,
            "Validation error",
            details=exc.errors(include_url=False, include_context=False),
        )

    @app.exception_handler(UnknownTaskError)
    async def unknown_task_exc(request: Request, exc: UnknownTaskError):
        log.info("404 unknown task on %s: %s", request.url.path, exc)
        return _render(request, HTTP_404_NOT_FOUND, str(exc))

    @app.exception_handler(AdvTrainError)
    async def engine_exc(request: Request, exc: AdvTrainError):
        if exit_code_for(exc) == EXIT_USAGE or isinstance(exc, ValueError):
            log.info("422 %s on %s: %s", type(exc).__name__, request.url.path, exc)
            return _render(request, HTTP_422_UNPROCESSABLE_ENTITY, type(exc).__name__, details=str(exc))
        log.error("500 %s on %s: %s", type(exc).__name__, request.url.path, exc)
        return _render(request, HTTP_500_INTERNAL_SERVER_ERROR, type(exc).__name__, details=str(exc))

    @app.exception_handler(Exception)
    async def global_exc(request: Request, exc: Exception):
        """Catch-all handler for unexpected exceptions. Hides the message outside development."""
        settings = get_settings()
        details = str(exc) if settings.ENV.lower() == "development" else None
        log.exception("500 Internal Server Error on %s", request.url.path)
        return _render(request, HTTP_500_INTERNAL_SERVER_ERROR, "Internal server error", details=details)
