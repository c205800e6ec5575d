# Path from repo root: app/main.py
"""HTTP surface: health, settings snapshot, and the task runner."""
from __future__ import annotations

import logging
import uuid
from contextlib import asynccontextmanager

from fastapi import FastAPI, Header, HTTPException
from starlette.middleware.base import BaseHTTPMiddleware

from app.api.router_tasks import router as tasks_router
from app.core.config import get_settings
from app.core.errors import register_exception_handlers
from app.core.logging_ import setup_logging
from app.services.registry import available_service_names


logger = logging.getLogger(__name__)

settings = get_settings()
setup_logging()


@asynccontextmanager
async def lifespan(app: FastAPI):
    settings.ensure_directories()
    names = ", ".join(available_service_names())
    logger.info("services: %s (env=%s, workers=%d)", names, settings.ENV, settings.WORKERS)
    yield


app = FastAPI(
    title=settings.APP_NAME,
    version=settings.VERSION,
    lifespan=lifespan,
    docs_url="/docs",
    redoc_url="/redoc",
)


class RequestIDMiddleware(BaseHTTPMiddleware):
    """Echo X-Request-ID, minting one when the client sent none."""

    async def dispatch(self, request, call_next):
        rid = request.headers.get("x-request-id") or uuid.uuid4().hex
        request.state.request_id = rid
        response = await call_next(request)
        response.headers["X-Request-ID"] = rid
        return response


app.add_middleware(RequestIDMiddleware)
register_exception_handlers(app)


@app.get("/health")
def health():
    return {"status": "ok"}


# /env is always on outside production; in production only when enabled, behind X-Admin-Token
if settings.ENV != "production" or settings.EXPOSE_ENV_ENDPOINT:

    @app.get("/env", include_in_schema=(settings.ENV != "production"))
    def env(x_admin_token: str | None = Header(default=None, alias="X-Admin-Token")):
        if settings.ENV == "production":
            expected = settings.ENV_SECRET_TOKEN
            if expected and x_admin_token != expected:
                raise HTTPException(status_code=403, detail="Forbidden")
        return settings.summary()


app.include_router(tasks_router)
