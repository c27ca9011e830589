"""Local-first HTTP service over the file-backed store.

Exposes pathway CRUD, CSV export, the node catalog, and the cohort views.
Everything runs against the local data directory; the service itself never
opens outbound connections. Binding beyond loopback is refused unless a
bearer token is configured, and with a token set every route except the
health check requires it.
"""

from __future__ import annotations

import datetime as dt
import threading
import urllib.parse
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles

from . import analytics
from .codec import (
    InvalidPathway,
    ParseValidation,
    export_csv,
    record_to_doc,
    SCHEMA_VERSION,
)
from .model import (
    NodeCategory,
    PathwayError,
    PathwayRecord,
    UnknownEventId,
    add_event,
    create_pathway,
    node_catalog,
    remove_event,
    update_event,
)
from .store import (
    NotFound,
    ReadOnlyStore,
    Store,
    StoreConfig,
    StoredPathway,
    VersionConflict,
    open_store,
)

_UNSET = object()


class MalformedRequest(Exception):
    pass


class SubjectExists(Exception):
    pass


def is_loopback(host: str) -> bool:
    return host in ("localhost", "::1") or host.startswith("127.")


def split_bind(bind_address: str) -> tuple[str, int]:
    host, _, port = bind_address.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"bind address must be host:port, got {bind_address!r}")
    return host, int(port)


def _require_str(body: dict, field: str) -> str:
    value = body.get(field)
    if not isinstance(value, str):
        raise MalformedRequest(f"{field} must be a string")
    return value


def _require_date(body: dict, field: str) -> dt.date:
    value = body.get(field)
    if not isinstance(value, str):
        raise MalformedRequest(f"{field} must be an ISO date string")
    try:
        return dt.date.fromisoformat(value)
    except ValueError:
        raise MalformedRequest(f"{field} is not a valid ISO date: {value!r}") from None


def _optional_version(value: Any) -> Optional[int]:
    if value is None:
        return None
    if not isinstance(value, int) or isinstance(value, bool):
        raise MalformedRequest("expected_version must be an integer")
    return value


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise MalformedRequest("request body must be a JSON object") from None
    if not isinstance(body, dict):
        raise MalformedRequest("request body must be a JSON object")
    return body


def _pathway_payload(stored: StoredPathway) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "pathway": record_to_doc(stored.record),
        "last_modified": stored.last_modified,
    }


def _violations_payload(violations) -> dict:
    return {
        "violations": [
            {
                "rule_code": v.rule_code.value,
                "message": v.message,
                "event_id": v.event_id,
            }
            for v in violations
        ]
    }


def create_app(
    store: Store,
    token: Optional[str] = None,
    static_dir: Optional[Path] = None,
) -> FastAPI:
    app = FastAPI(title="pathway workbench", docs_url=None, redoc_url=None)
    locks: dict[str, threading.Lock] = {}
    lock_guard = threading.Lock()

    def subject_lock(subject_id: str) -> threading.Lock:
        with lock_guard:
            lock = locks.get(subject_id)
            if lock is None:
                lock = threading.Lock()
                locks[subject_id] = lock
            return lock

    # -- error translation ------------------------------------------------

    @app.exception_handler(MalformedRequest)
    async def _malformed(request: Request, exc: MalformedRequest):
        return JSONResponse({"error": "MalformedRequest", "message": str(exc)}, 400)

    @app.exception_handler(UnknownEventId)
    async def _unknown_event(request: Request, exc: UnknownEventId):
        return JSONResponse({"error": "UnknownEventId", "message": str(exc)}, 404)

    @app.exception_handler(PathwayError)
    async def _pathway_error(request: Request, exc: PathwayError):
        return JSONResponse(_violations_payload([exc.as_violation()]), 422)

    @app.exception_handler(InvalidPathway)
    async def _invalid(request: Request, exc: InvalidPathway):
        return JSONResponse(_violations_payload(exc.violations), 422)

    @app.exception_handler(ParseValidation)
    async def _parse_validation(request: Request, exc: ParseValidation):
        return JSONResponse(_violations_payload(exc.violations), 422)

    @app.exception_handler(VersionConflict)
    async def _conflict(request: Request, exc: VersionConflict):
        return JSONResponse(
            {
                "error": "VersionConflict",
                "expected": exc.expected,
                "current": exc.current,
            },
            409,
        )

    @app.exception_handler(SubjectExists)
    async def _exists(request: Request, exc: SubjectExists):
        return JSONResponse({"error": "SubjectExists", "message": str(exc)}, 409)

    @app.exception_handler(NotFound)
    async def _not_found(request: Request, exc: NotFound):
        return JSONResponse({"error": "NotFound", "message": str(exc)}, 404)

    @app.exception_handler(ReadOnlyStore)
    async def _read_only(request: Request, exc: ReadOnlyStore):
        return JSONResponse({"error": "ReadOnlyStore", "message": str(exc)}, 403)

    if token is not None:

        @app.middleware("http")
        async def _require_token(request: Request, call_next):
            if request.url.path != "/healthz":
                supplied = request.headers.get("authorization", "")
                if supplied != f"Bearer {token}":
                    return JSONResponse({"error": "Unauthorized"}, 401)
            return await call_next(request)

    # -- routes -----------------------------------------------------------

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok", "read_only": store.config.read_only}

    @app.get("/catalog")
    async def catalog():
        return {
            "schema_version": SCHEMA_VERSION,
            "categories": [
                {
                    "category": category.value,
                    "nodes": [
                        {"code": node.code, "display_name": node.display_name}
                        for node in nodes
                    ],
                }
                for category, nodes in node_catalog().items()
            ],
        }

    @app.get("/pathways")
    async def list_pathways():
        return {
            "schema_version": SCHEMA_VERSION,
            "pathways": [
                {
                    "subject_id": s.subject_id,
                    "version": s.version,
                    "event_count": s.event_count,
                    "onset": s.onset.isoformat(),
                    "consent": s.consent.isoformat(),
                    "admission": s.admission.isoformat(),
                    "last_modified": s.last_modified,
                }
                for s in store.list_pathways()
            ],
        }

    @app.post("/pathways", status_code=201)
    async def create(request: Request):
        body = await _json_body(request)
        subject_id = _require_str(body, "subject_id")
        record = create_pathway(
            subject_id,
            _require_date(body, "onset"),
            _require_date(body, "consent"),
            _require_date(body, "admission"),
        )
        with subject_lock(subject_id):
            try:
                store.get_pathway(subject_id)
            except NotFound:
                pass
            else:
                raise SubjectExists(f"pathway for {subject_id!r} already exists")
            store.put_pathway(record)
        return _pathway_payload(store.get_pathway(subject_id))

    @app.get("/pathways/{subject_id}")
    async def get_pathway(subject_id: str):
        return _pathway_payload(store.get_pathway(subject_id))

    def _mutate(subject_id: str, expected_version: Optional[int], apply) -> dict:
        with subject_lock(subject_id):
            stored = store.get_pathway(subject_id)
            current = stored.record.version
            if expected_version is not None and expected_version != current:
                raise VersionConflict(expected_version, current)
            updated: PathwayRecord = apply(stored.record)
            store.put_pathway(updated, expected_version=current)
        return _pathway_payload(store.get_pathway(subject_id))

    @app.post("/pathways/{subject_id}/events")
    async def post_event(subject_id: str, request: Request):
        body = await _json_body(request)
        expected = _optional_version(body.get("expected_version"))
        category = _require_str(body, "category")
        code = _require_str(body, "code")
        date = _require_date(body, "date")
        label = body.get("custom_label")
        if label is not None and not isinstance(label, str):
            raise MalformedRequest("custom_label must be a string or null")
        order = body.get("order")
        if order is not None and (not isinstance(order, int) or isinstance(order, bool)):
            raise MalformedRequest("order must be an integer")

        def apply(record: PathwayRecord) -> PathwayRecord:
            updated, _ = add_event(
                record, category, code, date, custom_label=label, order=order
            )
            return updated

        return _mutate(subject_id, expected, apply)

    @app.patch("/pathways/{subject_id}/events/{event_id}")
    async def patch_event(subject_id: str, event_id: str, request: Request):
        body = await _json_body(request)
        expected = _optional_version(body.get("expected_version"))
        patch: dict[str, Any] = {}
        if "category" in body:
            patch["category"] = _require_str(body, "category")
        if "code" in body:
            patch["code"] = _require_str(body, "code")
        if "date" in body:
            patch["date"] = _require_date(body, "date")
        if "custom_label" in body:
            label = body["custom_label"]
            if label is not None and not isinstance(label, str):
                raise MalformedRequest("custom_label must be a string or null")
            patch["custom_label"] = label
        if "order" in body:
            order = body["order"]
            if not isinstance(order, int) or isinstance(order, bool):
                raise MalformedRequest("order must be an integer")
            patch["order"] = order

        def apply(record: PathwayRecord) -> PathwayRecord:
            return update_event(record, event_id, **patch)

        return _mutate(subject_id, expected, apply)

    @app.delete("/pathways/{subject_id}/events/{event_id}")
    async def delete_event(
        subject_id: str, event_id: str, expected_version: Optional[int] = None
    ):
        def apply(record: PathwayRecord) -> PathwayRecord:
            return remove_event(record, event_id)

        return _mutate(subject_id, expected_version, apply)

    @app.get("/pathways/{subject_id}/export.csv")
    async def export(subject_id: str):
        stored = store.get_pathway(subject_id)
        text = export_csv(stored.record)
        filename = f"PTC-{urllib.parse.quote(subject_id, safe='')}.txt"
        return Response(
            content=text,
            media_type="text/csv; charset=utf-8",
            headers={"Content-Disposition": f'attachment; filename="{filename}"'},
        )

    @app.get("/cohort/stats")
    async def cohort_stats_route():
        stats = analytics.cohort_stats(store.snapshot())
        return Response(
            content=analytics.render_stats_json(stats),
            media_type="application/json",
        )

    @app.get("/cohort/graph")
    async def cohort_graph_route(format: str = "dot"):
        if format not in ("dot", "doc"):
            raise MalformedRequest("format must be dot or doc")
        graph = analytics.build_cohort_graph(store.snapshot())
        if format == "dot":
            return Response(
                content=analytics.render_dot(graph), media_type="text/plain"
            )
        return Response(
            content=analytics.render_graph_json(graph), media_type="application/json"
        )

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app


def run_server(
    config: StoreConfig,
    token: Optional[str] = None,
    static_dir: Optional[Path] = None,
) -> None:
    """Open the store and serve until interrupted; refuses unsafe binds."""
    host, port = split_bind(config.bind_address)
    if not is_loopback(host) and not token:
        raise ValueError(
            "refusing to bind beyond loopback without a bearer token "
            "(set PTC_TOKEN or --token)"
        )
    store = open_store(config)
    app = create_app(store, token=token, static_dir=static_dir)

    import uvicorn

    uvicorn.run(app, host=host, port=port, log_level="warning")
