"""HTTP JSON facade over the knowledge base.

All endpoints live under /api/v1 and serve compact JSON (the same bytes
the CLI's json format prints).  Error responses carry a machine code from
a closed set: unknown_concern, invalid_profile, parse_error, internal.
An optional static directory (the built web UI) is mounted at the root.
"""

from __future__ import annotations

import logging
import threading
import time
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .errors import (
    InvalidProfile,
    KbError,
    MissingParameter,
    ResourceLimit,
    UnknownConcern,
)
from .jsonio import compact
from .kb import KnowledgeBase, TeamProfile

log = logging.getLogger("agilekb.api")

RECOMMEND_QUEUE_TIMEOUT = 10.0  # seconds a recommendation may wait for a slot


class ProfileBody(BaseModel):
    goals: list[str] = []
    situations: dict[str, str] = {}


def _json(payload, status_code: int = 200, headers: Optional[dict] = None) -> Response:
    return Response(
        content=compact(payload),
        status_code=status_code,
        media_type="application/json",
        headers=headers,
    )


def _error(status_code: int, code: str, message: str, details: Optional[list] = None,
           headers: Optional[dict] = None) -> Response:
    payload: dict = {"status": status_code, "code": code, "message": message}
    if details is not None:
        payload["details"] = details
    return _json(payload, status_code, headers)


def create_app(
    kb: KnowledgeBase,
    static_dir: Optional[Path] = None,
    max_parallel_recommendations: int = 8,
) -> FastAPI:
    """Build the application around an already-loaded knowledge base."""
    app = FastAPI(title="agilekb", openapi_url=None, docs_url=None, redoc_url=None)
    recommend_slots = threading.BoundedSemaphore(max_parallel_recommendations)

    @app.middleware("http")
    async def access_log(request: Request, call_next):
        started = time.monotonic()
        response = await call_next(request)
        elapsed_ms = (time.monotonic() - started) * 1000
        log.info(
            "%s %s -> %d (%.1f ms)",
            request.method,
            request.url.path,
            response.status_code,
            elapsed_ms,
        )
        return response

    @app.exception_handler(RequestValidationError)
    async def on_bad_request(request: Request, exc: RequestValidationError):
        return _error(422, "parse_error", "request body is not valid JSON for this endpoint")

    @app.exception_handler(Exception)
    async def on_unexpected(request: Request, exc: Exception):
        log.exception("unhandled error on %s %s", request.method, request.url.path)
        return _error(500, "internal", "internal error")

    @app.get("/api/v1/concerns")
    def list_concerns() -> Response:
        payload = [
            {
                "id": c.id,
                "title": c.title,
                "description": c.description,
                "teamScoped": c.team_scoped,
                "requiresPractice": c.requires_practice,
            }
            for c in kb.list_concerns()
        ]
        return _json(payload)

    @app.get("/api/v1/concerns/{concern_id}/results")
    def concern_results(concern_id: str, practice: Optional[str] = None) -> Response:
        try:
            resolved = kb.resolve_ref(practice) if practice is not None else None
            table = kb.answer_concern(concern_id, resolved)
        except UnknownConcern as exc:
            return _error(404, "unknown_concern", str(exc))
        except MissingParameter as exc:
            return _error(400, "parse_error", str(exc))
        except KbError as exc:
            log.error("concern %s failed: %s", concern_id, exc)
            return _error(500, "internal", "internal error")
        return _json(kb.render_table(table))

    @app.post("/api/v1/recommendations")
    def recommendations(body: ProfileBody) -> Response:
        profile = TeamProfile(tuple(body.goals), dict(body.situations))
        if not recommend_slots.acquire(timeout=RECOMMEND_QUEUE_TIMEOUT):
            return _error(
                503,
                "internal",
                "recommendation capacity exhausted, retry shortly",
                headers={"Retry-After": "1"},
            )
        try:
            report = kb.recommend(profile)
        except InvalidProfile as exc:
            return _error(400, "invalid_profile", "profile has unknown entries", exc.details)
        except ResourceLimit as exc:
            return _error(503, "internal", str(exc), headers={"Retry-After": "5"})
        except KbError as exc:
            log.error("recommendation failed: %s", exc)
            return _error(500, "internal", "internal error")
        finally:
            recommend_slots.release()
        return _json(kb.render_report(report))

    @app.get("/api/v1/catalog")
    def catalog() -> Response:
        return _json(kb.catalog.as_dict())

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
