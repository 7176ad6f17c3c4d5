"""HTTP annotation service: claim work, submit labels, edit headings, export.

Every error response has the shape {"error": <machine code>, "detail":
<human text>}; label grammar failures additionally carry the full
violation code list so clients can highlight each broken rule.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, Field

from paratag import __version__
from paratag.agreement import AllSkipped, EmptyInput, compute_agreement
from paratag.config import ServiceConfig, load_config
from paratag.corpusio import export_corpus
from paratag.guidelines import LintFinding, lint_pair
from paratag.labels import LabelError, format_label, parse_label
from paratag.store import (
    Annotation,
    Batch,
    CandidatePair,
    CorpusStore,
    RewritePair,
    StoreError,
)

STATUS_BY_CODE = {
    "NotFound": 404,
    "UnknownBatch": 404,
    "UnknownAnnotator": 404,
    "VersionConflict": 409,
    "ExpiredClaim": 409,
    "InsufficientAnnotations": 409,
    "EmptyInput": 409,
    "AllSkipped": 409,
    "Unauthorized": 401,
}
DEFAULT_ERROR_STATUS = 422


class ServiceError(Exception):
    """Request-level failure with a machine-readable code."""

    def __init__(self, code: str, detail: str) -> None:
        super().__init__(detail)
        self.code = code
        self.detail = detail


class AnnotationIn(BaseModel):
    pair_id: str = Field(min_length=1)
    annotator: str = Field(min_length=1)
    label: str
    rewrites: list[tuple[str, str]] = []
    note: Optional[str] = None


class EditIn(BaseModel):
    annotator: str = Field(min_length=1)
    new_text1: Optional[str] = None
    new_text2: Optional[str] = None


def _error_response(code: str, detail: str, extra: Optional[dict] = None) -> JSONResponse:
    body = {"error": code, "detail": detail}
    if extra:
        body.update(extra)
    return JSONResponse(body, status_code=STATUS_BY_CODE.get(code, DEFAULT_ERROR_STATUS))


def _pair_body(pair: CandidatePair) -> dict:
    body = {
        "id": pair.id,
        "text1": pair.text1,
        "text2": pair.text2,
        "source": pair.source.value,
        "status": pair.status.value,
        "version": pair.version,
    }
    if pair.original_text1 is not None:
        body["original_text1"] = pair.original_text1
    if pair.original_text2 is not None:
        body["original_text2"] = pair.original_text2
    return body


def _lint_body(findings: list[LintFinding]) -> list[dict]:
    return [{"code": f.kind.code, "detail": f.detail} for f in findings]


def ensure_default_batch(store: CorpusStore, required_annotators: int) -> None:
    """Wrap loose pairs in a batch named "default" if no batch exists yet."""
    if store.list_batches():
        return
    pair_ids = tuple(pair.id for pair in store.list_pairs())
    if pair_ids:
        store.put_batch(
            Batch(
                id="default",
                pair_ids=pair_ids,
                required_annotators=required_annotators,
            )
        )


def create_app(
    store: Optional[CorpusStore] = None, config: Optional[ServiceConfig] = None
) -> FastAPI:
    config = config if config is not None else load_config()
    if store is None:
        store = CorpusStore(config.store_path())
    ensure_default_batch(store, config.required_annotators)

    app = FastAPI(title="paratag annotation service", version=__version__)
    app.state.store = store
    app.state.config = config
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(StoreError)
    async def store_error(request: Request, exc: StoreError) -> JSONResponse:
        return _error_response(exc.code, str(exc))

    @app.exception_handler(LabelError)
    async def label_error(request: Request, exc: LabelError) -> JSONResponse:
        detail = f"{', '.join(exc.violations)}: {exc}"
        return _error_response(
            "LabelParseError", detail, {"violations": exc.violations}
        )

    @app.exception_handler(ServiceError)
    async def service_error(request: Request, exc: ServiceError) -> JSONResponse:
        return _error_response(exc.code, exc.detail)

    @app.exception_handler(EmptyInput)
    async def empty_input(request: Request, exc: EmptyInput) -> JSONResponse:
        return _error_response(exc.code, str(exc))

    @app.exception_handler(AllSkipped)
    async def all_skipped(request: Request, exc: AllSkipped) -> JSONResponse:
        return _error_response(exc.code, str(exc))

    def authenticate(request: Request, annotator: str) -> None:
        registry = config.annotators
        if not registry:
            return
        if annotator not in registry:
            raise ServiceError("UnknownAnnotator", f"unknown annotator {annotator!r}")
        header = request.headers.get("authorization", "")
        token = header.removeprefix("Bearer ").strip()
        if token != registry[annotator]:
            raise ServiceError("Unauthorized", "bad or missing bearer token")

    @app.get("/healthz")
    async def healthz() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/batches/{batch_id}/next")
    async def next_candidate(batch_id: str, request: Request, annotator: str = Query()):
        authenticate(request, annotator)
        claimed = store.claim_next(
            batch_id,
            annotator,
            lease_seconds=config.claim_lease_seconds,
            shuffle=config.shuffle_queue,
        )
        if claimed is None:
            return Response(status_code=204)
        pair, ticket = claimed
        return {
            "pair": _pair_body(pair),
            "ticket": ticket.to_dict(),
            "lints": _lint_body(lint_pair(pair.text1, pair.text2)),
        }

    @app.post("/annotations", status_code=201)
    async def submit_annotation(body: AnnotationIn, request: Request):
        authenticate(request, body.annotator)
        store.require_claim(body.pair_id, body.annotator)
        label = parse_label(body.label)
        annotation = Annotation(
            pair_id=body.pair_id,
            annotator_id=body.annotator,
            label=label,
            rewrites=tuple(RewritePair(t1, t2) for t1, t2 in body.rewrites),
            note=body.note,
        )
        stored = store.record_annotation(annotation)
        return {
            "pair_id": stored.pair_id,
            "annotator": stored.annotator_id,
            "label": format_label(stored.label),
            "rewrites": [[r.text1, r.text2] for r in stored.rewrites],
            "note": stored.note,
            "created_at": stored.created_at,
        }

    @app.post("/pairs/{pair_id}/edit")
    async def edit_pair(pair_id: str, body: EditIn, request: Request):
        authenticate(request, body.annotator)
        store.require_claim(pair_id, body.annotator)
        pair, directive = store.edit_pair(pair_id, body.new_text1, body.new_text2)
        return {
            "pair": _pair_body(pair),
            "directive": directive.code if directive else None,
            "lints": _lint_body(lint_pair(pair.text1, pair.text2)),
        }

    @app.get("/batches/{batch_id}/agreement")
    async def batch_agreement(batch_id: str):
        aligned = store.aligned_labels(batch_id)
        return compute_agreement(aligned).to_dict()

    @app.get("/export")
    async def export(format: str = Query("jsonl"), batch: Optional[str] = None):
        if format not in ("jsonl", "tsv"):
            raise ServiceError(
                "SchemaViolation", "format must be 'jsonl' or 'tsv'"
            )
        payload = export_corpus(store, format, batch=batch)
        media = "application/x-ndjson" if format == "jsonl" else "text/tab-separated-values"
        return Response(payload, media_type=f"{media}; charset=utf-8")

    return app


def run(config: ServiceConfig, store: Optional[CorpusStore] = None) -> None:
    """Blocking entry point used by the command line."""
    import uvicorn

    uvicorn.run(create_app(store, config), host=config.host, port=config.port)
