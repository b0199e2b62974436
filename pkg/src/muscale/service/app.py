"""Dashboard HTTP service: course/assignment/submission management plus
analytics, hierarchy, document, and overlay endpoints for each submission.

Errors are always JSON {code, message, path}. Analytics, hierarchy,
document, and overlay responses are byte-deterministic: the same stored
blob and config produce the same bytes as the batch CLI.
"""

from __future__ import annotations

import json
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, Query, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from ..annotator import RenderOptions, UnknownCluster, build_overlay, render_svg
from ..canonical import canonical_json_bytes
from ..model import DocumentError, MalformedJson, parse_document
from ..recognizer import build_hierarchy
from .config import MAX_DOCUMENT_BYTES, MAX_DOCUMENT_ELEMENTS, ServiceConfig
from .schemas import (
    AssignmentCreate,
    AssignmentOut,
    CourseCreate,
    CourseOut,
    SubmissionCreate,
    SubmissionIdentity,
    SubmissionOut,
    SubmissionRow,
)
from .store import NotFound, Store, SubmissionRec


def _error(status: int, code: str, message: str, path: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "path": path},
    )


def create_app(config: ServiceConfig | None = None, ui_dir: str | None = None) -> FastAPI:
    config = config or ServiceConfig()
    store = Store(config.data_dir, config.recognizer_config())

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        yield
        store.close()

    app = FastAPI(title="muscale dashboard service", version="0.1.0", lifespan=lifespan)
    app.state.store = store
    app.state.config = config
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(NotFound)
    async def on_not_found(request: Request, exc: NotFound):
        return _error(404, "not_found", str(exc), request.url.path)

    @app.exception_handler(DocumentError)
    async def on_document_error(request: Request, exc: DocumentError):
        code = "malformed_json" if isinstance(exc, MalformedJson) else "invalid_document"
        return _error(422, code, exc.message, exc.path)

    @app.exception_handler(UnknownCluster)
    async def on_unknown_cluster(request: Request, exc: UnknownCluster):
        return _error(422, "unknown_cluster", str(exc), request.url.path)

    @app.exception_handler(RequestValidationError)
    async def on_invalid_payload(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        loc = ".".join(str(p) for p in first.get("loc", ()) if p != "body")
        return _error(422, "invalid_payload", first.get("msg", "invalid payload"), loc)

    # -- courses / assignments ----------------------------------------------

    @app.post("/courses", response_model=CourseOut, status_code=201)
    def create_course(payload: CourseCreate):
        rec = store.create_course(
            name=payload.name,
            term=payload.term,
            instructor_names=payload.instructorNames,
            idempotency_key=payload.idempotencyKey,
        )
        return rec.to_json_dict()

    @app.get("/courses", response_model=list[CourseOut])
    def list_courses():
        return [c.to_json_dict() for c in store.list_courses()]

    @app.post("/courses/{course_id}/assignments", response_model=AssignmentOut, status_code=201)
    def create_assignment(course_id: str, payload: AssignmentCreate):
        rec = store.create_assignment(
            course_id=course_id,
            title=payload.title,
            due_date=payload.dueDate,
            idempotency_key=payload.idempotencyKey,
        )
        return rec.to_json_dict()

    @app.get("/courses/{course_id}/assignments", response_model=list[AssignmentOut])
    def list_assignments(course_id: str):
        return [a.to_json_dict() for a in store.list_assignments(course_id)]

    @app.get("/assignments/{assignment_id}", response_model=AssignmentOut)
    def get_assignment(assignment_id: str):
        return store.get_assignment(assignment_id).to_json_dict()

    # -- submissions ----------------------------------------------------------

    def _submission_out(sub: SubmissionRec) -> dict:
        record = json.loads(store.analytics_bytes(sub.content_hash))
        return {**sub.to_json_dict(), "analytics": record}

    @app.post(
        "/assignments/{assignment_id}/submissions",
        response_model=SubmissionOut,
        status_code=201,
    )
    async def submit_document(assignment_id: str, request: Request):
        body = await request.body()
        if len(body) > MAX_DOCUMENT_BYTES:
            return _error(413, "too_large", "request exceeds 10 MB", request.url.path)
        try:
            raw = json.loads(body)
        except json.JSONDecodeError as exc:
            return _error(422, "malformed_json", f"not JSON: {exc}", "$")
        payload = SubmissionCreate.model_validate(raw)
        elements = payload.document.get("elements")
        if isinstance(elements, list) and len(elements) > MAX_DOCUMENT_ELEMENTS:
            return _error(
                413, "too_large", f"document exceeds {MAX_DOCUMENT_ELEMENTS} elements",
                "document.elements",
            )
        doc = parse_document(json.dumps(payload.document))
        sub = store.submit_document(assignment_id, payload.studentLabel, doc)
        return _submission_out(sub)

    @app.get("/assignments/{assignment_id}/submissions", response_model=list[SubmissionRow])
    def list_submissions(assignment_id: str):
        rows = []
        for sub in store.list_submissions(assignment_id):
            identity = SubmissionIdentity(
                id=sub.id,
                assignmentId=sub.assignment_id,
                studentLabel=sub.student_label,
                documentKey=sub.document_key,
                contentHash=sub.content_hash,
                ingestedAt=sub.ingested_at,
                version=sub.version,
            )
            rows.append(
                SubmissionRow(
                    submission=identity,
                    analytics=json.loads(store.analytics_bytes(sub.content_hash)),
                )
            )
        return rows

    @app.get("/submissions/{submission_id}", response_model=SubmissionOut)
    def get_submission(submission_id: str):
        return _submission_out(store.get_submission(submission_id))

    @app.get("/submissions/{submission_id}/analytics")
    def get_analytics(submission_id: str):
        sub = store.get_submission(submission_id)
        return Response(
            content=store.analytics_bytes(sub.content_hash),
            media_type="application/json",
        )

    @app.get("/submissions/{submission_id}/hierarchy")
    def get_hierarchy(submission_id: str):
        sub = store.get_submission(submission_id)
        doc = store.load_document(sub.content_hash)
        hierarchy = build_hierarchy(doc, store.config)
        return Response(
            content=canonical_json_bytes(hierarchy.to_json_dict()),
            media_type="application/json",
        )

    @app.get("/submissions/{submission_id}/document")
    def get_document(submission_id: str):
        sub = store.get_submission(submission_id)
        return Response(
            content=store.load_document_bytes(sub.content_hash),
            media_type="application/json",
        )

    @app.get("/submissions/{submission_id}/overlay")
    def get_overlay(submission_id: str):
        sub = store.get_submission(submission_id)
        doc = store.load_document(sub.content_hash)
        overlay = build_overlay(doc, build_hierarchy(doc, store.config))
        return Response(content=overlay.canonical_bytes(), media_type="application/json")

    @app.get("/submissions/{submission_id}/overlay.svg")
    def get_overlay_svg(
        submission_id: str,
        animated: bool = Query(default=False),
        highlightCluster: int | None = Query(default=None),
    ):
        sub = store.get_submission(submission_id)
        doc = store.load_document(sub.content_hash)
        overlay = build_overlay(doc, build_hierarchy(doc, store.config))
        svg = render_svg(
            doc, overlay, RenderOptions(animated=animated, highlight_cluster=highlightCluster)
        )
        return Response(content=svg, media_type="image/svg+xml")

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
