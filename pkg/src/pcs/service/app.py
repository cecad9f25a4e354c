"""HTTP facade over the core package.

Endpoints:
    POST /api/spectrum                   spectrum + seminal pick for a query
    GET  /api/patents/{id}/diffusion     country-by-year spread of citers
    GET  /api/years/{year}/top           a year's top cited patents
    GET  /api/health                     build/version info

Replay responses are pure functions of (endpoint, body): payloads are
serialized with sorted keys so identical requests produce byte-identical
bodies. Live spectrum fetches stream server-sent progress events, then the
final payload.
"""

from __future__ import annotations

import json
import os
import queue
import threading
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import StreamingResponse
from fastapi.staticfiles import StaticFiles

from .. import __version__
from ..client import (
    FetchPolicy,
    PatentsViewClient,
    RetrievalResult,
    Transport,
    forward_citation_query,
    normalize_patent_id,
    replay_retrieval,
)
from ..errors import (
    CacheMissError,
    CorruptSnapshotError,
    IntegrityError,
    NotFoundError,
    PcsError,
    PersistenceError,
    QueryRejectedError,
    ReplayMismatchError,
    TransportError,
)
from ..pipeline import AnalysisOutcome, analyze_retrieval, cited_metadata
from ..query import Query, parse_advanced, parse_keyword, query_hash
from ..diffusion import build_profile
from ..output import diffusion_payload
from ..store import SnapshotStore, resolve_snapshot
from .schemas import (
    ApiError,
    DiffusionResponse,
    HealthResponse,
    SeminalOut,
    SpectrumPointOut,
    SpectrumRequest,
    SpectrumResponse,
    YearTopEntryOut,
    YearTopResponse,
)

STORE_ENV = "PCS_STORE"
UI_DIST_ENV = "PCS_UI_DIST"


def _error_status(exc: PcsError) -> tuple[str, int]:
    if isinstance(exc, (CacheMissError, NotFoundError)):
        return "not_found", 404
    if isinstance(exc, TransportError):
        return "transport", 502
    if isinstance(exc, (CorruptSnapshotError, IntegrityError, PersistenceError)):
        return "internal", 500
    # remaining package errors are the caller's query's fault
    return "query_rejected", 400


def _json_bytes(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _json_response(payload: dict, status_code: int = 200) -> Response:
    return Response(
        content=_json_bytes(payload), status_code=status_code, media_type="application/json"
    )


def _parse_query(mode: str, text: str) -> Query:
    return parse_keyword(text) if mode == "keyword" else parse_advanced(text)


def _spectrum_response(result: RetrievalResult, top_k: int) -> SpectrumResponse:
    outcome: AnalysisOutcome = analyze_retrieval(result, top_k=top_k)
    seminal = None
    points: list[SpectrumPointOut] = []
    if outcome.spectrum is not None:
        points = [
            SpectrumPointOut(
                year=p.year,
                c_total=p.c_total,
                median5=p.median5,
                f=p.f,
                top_patent_id=p.top_patent_id,
                top_count=p.top_count,
                pcs=p.pcs,
                top_ids=list(p.top_ids),
            )
            for p in outcome.spectrum.points
        ]
    if outcome.seminal is not None:
        meta = cited_metadata(result).get(outcome.seminal.patent_id, {})
        grant_date = meta.get("grant_date")
        seminal = SeminalOut(
            peak_year=outcome.seminal.peak_year,
            patent_id=outcome.seminal.patent_id,
            peak_pcs=outcome.seminal.peak_pcs,
            peak_top_count=outcome.seminal.peak_top_count,
            runner_up_years=[
                {"year": year, "pcs": pcs} for year, pcs in outcome.seminal.runner_up_years
            ],
            co_leaders=list(outcome.seminal.co_leaders),
            title=meta.get("title"),
            grant_year=int(grant_date[:4]) if grant_date else outcome.seminal.peak_year,
        )
    return SpectrumResponse(
        points=points,
        seminal=seminal,
        no_signal=outcome.no_signal,
        provenance=outcome.provenance,
    )


def create_app(
    store_root: str | None = None,
    transport: Transport | None = None,
    base_url: str | None = None,
    api_key: str | None = None,
    static_dir: str | None = None,
    fetch_policy: FetchPolicy | None = None,
) -> FastAPI:
    """Build the service; the transport is injectable for tests."""
    root = store_root or os.environ.get(STORE_ENV) or "snapshots"
    store = SnapshotStore(root)
    policy = fetch_policy or FetchPolicy()

    app = FastAPI(title="pcs", version=__version__)
    app.state.store = store

    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def live_client() -> PatentsViewClient:
        return PatentsViewClient(
            transport=transport, base_url=base_url, api_key=api_key, store=store, mode="live"
        )

    @app.exception_handler(PcsError)
    async def pcs_error_handler(_request: Request, exc: PcsError):
        code, status = _error_status(exc)
        body = ApiError(code=code, message=str(exc) or exc.__class__.__name__)
        return _json_response(body.model_dump(), status_code=status)

    @app.exception_handler(RequestValidationError)
    async def validation_error_handler(_request: Request, exc: RequestValidationError):
        body = ApiError(
            code="query_rejected",
            message="request body failed validation",
            detail=[
                {"loc": list(map(str, e.get("loc", ()))), "msg": e.get("msg", "")}
                for e in exc.errors()
            ],
        )
        return _json_response(body.model_dump(), status_code=400)

    @app.get("/api/health")
    def health() -> Response:
        payload = HealthResponse(
            status="ok",
            version=__version__,
            store_root=str(store.root),
            snapshots=len(store.list()),
        )
        return _json_response(payload.model_dump())

    def _replay_result(query: Query, snapshot_ref: str | None) -> RetrievalResult:
        if snapshot_ref:
            snapshot = resolve_snapshot(snapshot_ref, store)
            if query_hash(query) != snapshot.id:
                raise ReplayMismatchError(
                    f"snapshot {snapshot.id[:12]} was recorded for a different query"
                )
        else:
            snapshot = store.get(query_hash(query))
        return replay_retrieval(snapshot)

    @app.post("/api/spectrum")
    def spectrum(request: SpectrumRequest) -> Response:
        query = _parse_query(request.query.mode, request.query.text)
        if request.source == "replay":
            result = _replay_result(query, request.snapshot)
            payload = _spectrum_response(result, request.top_k)
            return _json_response(payload.model_dump())
        return _spectrum_stream(query, request.top_k)

    def _spectrum_stream(query: Query, top_k: int) -> StreamingResponse:
        events: queue.Queue = queue.Queue()

        def on_progress(done: int, total: int) -> None:
            events.put(("progress", {"pages_fetched": done, "total_pages": total}))

        def worker() -> None:
            try:
                result = live_client().fetch_patents(query, policy, on_progress=on_progress)
                payload = _spectrum_response(result, top_k)
                events.put(("result", payload.model_dump()))
            except PcsError as exc:
                code, _status = _error_status(exc)
                events.put(("error", ApiError(code=code, message=str(exc)).model_dump()))
            finally:
                events.put(None)

        threading.Thread(target=worker, daemon=True).start()

        def stream():
            while True:
                item = events.get()
                if item is None:
                    break
                event, data = item
                yield f"event: {event}\ndata: {json.dumps(data, sort_keys=True)}\n\n"

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/api/patents/{patent_id}/diffusion")
    def diffusion(
        patent_id: str, source: str = "replay", snapshot: str | None = None
    ) -> Response:
        pid = normalize_patent_id(patent_id)
        query = forward_citation_query(pid)
        if source == "live":
            result = live_client().fetch_forward_citations(pid, policy)
        else:
            result = _replay_result(query, snapshot)
        profile = build_profile(pid, result.patents)
        payload = diffusion_payload(profile)
        model = DiffusionResponse(**payload)
        return _json_response(model.model_dump())

    @app.get("/api/years/{year}/top")
    def year_top(year: int, query_hash: str, limit: int = 25) -> Response:
        snapshot = store.get(store.resolve(query_hash))
        result = replay_retrieval(snapshot)
        outcome = analyze_retrieval(result)
        meta = cited_metadata(result)
        entries = [
            YearTopEntryOut(
                patent_id=pid, count=count, title=meta.get(pid, {}).get("title")
            )
            for pid, count in outcome.table.ranked_for_year(year, limit=limit)
        ]
        payload = YearTopResponse(year=year, query_hash=snapshot.id, entries=entries)
        return _json_response(payload.model_dump())

    ui_dir = static_dir or os.environ.get(UI_DIST_ENV)
    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
