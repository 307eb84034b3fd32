"""FastAPI application factory.

Every non-2xx response body has the same shape: http_status, code,
message, request_id. Auth is a single static bearer token per deployment;
reads can optionally stay anonymous for demo setups.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Callable

from fastapi import FastAPI, Request
from fastapi.exceptions import HTTPException, RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..catalog import SpeciesCatalog, default_catalog
from ..errors import (
    BackendUnavailable,
    BadCursor,
    CamtrapError,
    IntegrityViolation,
    InvalidRange,
    OversizeAttachment,
    QueueFull,
    UndecodableImage,
    UnknownAsset,
    UnknownCamera,
    UnknownClass,
    UnknownDetection,
    UnknownRule,
)
from ..inference.detector import DetectorBackend, DetectorConfig
from ..ingest.pipeline import ingest_image
from ..store.database import EventStore, IngestResult
from .routes import router

_STATUS_BY_ERROR: tuple[tuple[type[CamtrapError], int], ...] = (
    (UnknownAsset, 404),
    (UnknownDetection, 404),
    (UnknownCamera, 404),
    (UnknownRule, 404),
    (UnknownClass, 422),
    (InvalidRange, 422),
    (UndecodableImage, 422),
    (BadCursor, 400),
    (OversizeAttachment, 413),
    (QueueFull, 503),
    (BackendUnavailable, 503),
    (IntegrityViolation, 409),
)

WRITE_METHODS = {"POST", "PUT", "PATCH", "DELETE"}


@dataclass
class AppState:
    """Everything the handlers need, wired once at startup."""

    store: EventStore
    backend: DetectorBackend
    catalog: SpeciesCatalog = field(default_factory=default_catalog)
    detector_config: DetectorConfig = field(default_factory=DetectorConfig)
    max_attachment_mb: float = 25.0
    auth_token: str = ""
    allow_anon_read: bool = True
    wake_delivery: Callable[[], None] | None = None

    def ingest_bytes(
        self,
        data: bytes,
        camera_id: str | None = None,
        declared_filename: str | None = None,
        received_at: datetime | None = None,
    ) -> IngestResult:
        return ingest_image(
            store=self.store,
            backend=self.backend,
            catalog=self.catalog,
            config=self.detector_config,
            image_bytes=data,
            camera_id=camera_id,
            received_at=received_at,
            declared_filename=declared_filename,
        )


def _error_body(status: int, code: str, message: str) -> dict:
    return {
        "http_status": status,
        "code": code,
        "message": message,
        "request_id": uuid.uuid4().hex,
    }


def _status_for(exc: CamtrapError) -> int:
    for err_type, status in _STATUS_BY_ERROR:
        if isinstance(exc, err_type):
            return status
    return 400


def create_app(state: AppState, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="camtrap", version="0.1.0", openapi_url="/api/spec")
    app.state.ctx = state
    app.include_router(router)

    @app.exception_handler(CamtrapError)
    async def camtrap_error_handler(_req: Request, exc: CamtrapError):
        status = _status_for(exc)
        return JSONResponse(status_code=status, content=_error_body(status, exc.code, str(exc)))

    @app.exception_handler(HTTPException)
    async def http_error_handler(_req: Request, exc: HTTPException):
        return JSONResponse(
            status_code=exc.status_code,
            content=_error_body(exc.status_code, "http_error", str(exc.detail)),
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(_req: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=422, content=_error_body(422, "validation_error", str(exc.errors()))
        )

    @app.middleware("http")
    async def auth_middleware(request: Request, call_next):
        token = state.auth_token
        if token and request.url.path.startswith("/api"):
            needs_auth = request.method in WRITE_METHODS or not state.allow_anon_read
            if needs_auth:
                header = request.headers.get("authorization", "")
                if header != f"Bearer {token}":
                    return JSONResponse(
                        status_code=401,
                        content=_error_body(401, "unauthorized", "missing or bad token"),
                    )
        return await call_next(request)

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok", "assets": state.store.asset_count()}

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="console")

    return app
