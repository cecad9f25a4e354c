"""Provider HTTP client: paginated retrieval with rate limiting, retries,
and first-class record/replay.

Every retrieval is identified by the hash of its canonical query text; in
replay mode results are re-parsed from the recorded wire pages through the
same code path the live client uses, so replayed and live results are
indistinguishable downstream.
"""

from __future__ import annotations

import math
import os
import random
import threading
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import date
from typing import Callable, NamedTuple, Protocol

import requests

from .canon import canonical_json, sha256_text
from .errors import (
    CacheMissError,
    IntegrityError,
    NotFoundError,
    PersistenceError,
    QueryRejectedError,
    TransportError,
)
from .query import (
    DEFAULT_ENDPOINT,
    DEFAULT_FIELDS,
    Leaf,
    Query,
    canonical_query_text,
    query_hash,
    to_request,
)
from .spectrum import CitationRecord
from .store import Snapshot, SnapshotStore, utc_now_iso

DEFAULT_BASE_URL = "https://api.patentsview.org"
QUERY_PATH = "/patents/query"
BASE_URL_ENV = "PCS_BASE_URL"
API_KEY_ENV = "PATENTSVIEW_API_KEY"


def normalize_patent_id(raw: str) -> str:
    """Strip the US prefix, commas, and whitespace from a patent id."""
    cleaned = raw.strip().upper().replace(",", "").replace(" ", "")
    if cleaned.startswith("US"):
        cleaned = cleaned[2:]
    return cleaned


@dataclass(frozen=True)
class FetchPolicy:
    """Knobs for one retrieval; defaults favor few round trips."""

    per_page: int = 10_000
    max_pages: int | None = None
    max_concurrent_requests: int = 4
    retry_attempts: int = 5
    retry_base_delay: float = 0.5
    rate_limit: float = 5.0
    timeout: float = 30.0

    def __post_init__(self):
        if self.per_page < 1:
            raise ValueError("per_page must be positive")
        if self.max_pages is not None and self.max_pages < 1:
            raise ValueError("max_pages must be positive or None")
        if self.max_concurrent_requests < 1:
            raise ValueError("max_concurrent_requests must be positive")
        if not 1 <= self.retry_attempts <= 10:
            raise ValueError("retry_attempts must be in [1, 10]")
        if self.rate_limit <= 0:
            raise ValueError("rate_limit must be positive")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")


@dataclass(frozen=True)
class Inventor:
    name: str
    country: str | None = None


@dataclass(frozen=True)
class Assignee:
    name: str
    country: str | None = None


@dataclass(frozen=True)
class CitedRef:
    cited_id: str
    cited_date: str | None = None
    title: str | None = None


@dataclass(frozen=True)
class PatentRecord:
    """One granted patent's metadata as returned by the provider."""

    patent_id: str
    title: str
    grant_date: str
    inventors: tuple[Inventor, ...] = ()
    assignees: tuple[Assignee, ...] = ()
    cpc_subgroups: tuple[str, ...] = ()
    cited: tuple[CitedRef, ...] = ()

    def grant_year(self) -> int:
        return date.fromisoformat(self.grant_date).year


@dataclass(frozen=True)
class Provenance:
    """Where a retrieval came from and whether it arrived whole."""

    request_hash: str
    endpoint: str
    recorded_at: str
    page_count: int
    total_reported: int
    patents_received: int
    integrity_warning: str | None = None
    source: str = "live"
    snapshot_id: str | None = None

    def to_dict(self) -> dict:
        return {
            "request_hash": self.request_hash,
            "endpoint": self.endpoint,
            "recorded_at": self.recorded_at,
            "page_count": self.page_count,
            "total_reported": self.total_reported,
            "patents_received": self.patents_received,
            "integrity_warning": self.integrity_warning,
            "source": self.source,
            "snapshot_id": self.snapshot_id,
        }

    def stable_dict(self) -> dict:
        """Provenance fields that survive a record/replay round trip."""
        d = self.to_dict()
        d.pop("source")
        d.pop("snapshot_id")
        return d


@dataclass(frozen=True)
class RetrievalResult:
    patents: tuple[PatentRecord, ...]
    citations: tuple[CitationRecord, ...]
    provenance: Provenance


class TransportResponse(NamedTuple):
    status_code: int
    text: str


class Transport(Protocol):
    def post(self, url: str, body: str, timeout: float) -> TransportResponse: ...


class HttpTransport:
    """requests-backed transport; raises TransportError on network failure."""

    def __init__(self, api_key: str | None = None, session: requests.Session | None = None):
        self._session = session or requests.Session()
        self._session.headers.update({"Content-Type": "application/json"})
        if api_key:
            self._session.headers.update({"X-Api-Key": api_key})

    def post(self, url: str, body: str, timeout: float) -> TransportResponse:
        try:
            response = self._session.post(url, data=body.encode("utf-8"), timeout=timeout)
        except requests.RequestException as exc:
            raise TransportError(f"request to {url} failed: {exc}") from exc
        return TransportResponse(response.status_code, response.text)


class RateLimiter:
    """Sliding-window limiter: at most ``limit`` acquisitions per second.

    The clock and sleep functions are injectable so tests can drive a
    simulated clock instead of waiting on wall time.
    """

    def __init__(
        self,
        limit: float,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        self._limit = max(1, int(limit))
        self._clock = clock
        self._sleep = sleep
        self._window: deque[float] = deque()
        self._lock = threading.Lock()

    def acquire(self) -> None:
        with self._lock:
            while True:
                now = self._clock()
                while self._window and self._window[0] <= now - 1.0:
                    self._window.popleft()
                if len(self._window) < self._limit:
                    self._window.append(now)
                    return
                self._sleep(self._window[0] + 1.0 - now)


def parse_page(text: str) -> tuple[list[dict], int, int]:
    """Split one wire page into (raw patents, page count, reported total)."""
    import json

    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TransportError(f"provider returned invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "patents" not in data:
        raise TransportError("provider response missing 'patents' key")
    patents = data.get("patents") or []
    count = int(data.get("count", len(patents)))
    total = int(data.get("total_patent_count", count))
    return patents, count, total


def _parse_date(value: str, context: str) -> str:
    try:
        date.fromisoformat(value)
    except ValueError as exc:
        raise TransportError(f"unparseable date {value!r} in {context}") from exc
    return value


def patent_from_api(raw: dict) -> PatentRecord:
    """Translate one wire patent object into a PatentRecord."""
    try:
        patent_id = normalize_patent_id(str(raw["patent_number"]))
    except KeyError as exc:
        raise TransportError("provider patent object missing 'patent_number'") from exc
    grant_date = _parse_date(str(raw.get("patent_date", "")), f"patent {patent_id}")

    inventors = tuple(
        Inventor(
            name=" ".join(
                part
                for part in (inv.get("inventor_first_name"), inv.get("inventor_last_name"))
                if part
            ),
            country=inv.get("inventor_country") or None,
        )
        for inv in raw.get("inventors") or []
    )
    assignees = tuple(
        Assignee(
            name=a.get("assignee_organization") or "",
            country=a.get("assignee_country") or None,
        )
        for a in raw.get("assignees") or []
    )
    cpcs = tuple(
        c["cpc_subgroup_id"] for c in raw.get("cpcs") or [] if c.get("cpc_subgroup_id")
    )
    cited = []
    for ref in raw.get("cited_patents") or []:
        number = ref.get("cited_patent_number")
        if not number:
            continue
        cited_date = ref.get("cited_patent_date") or None
        if cited_date is not None:
            cited_date = _parse_date(str(cited_date), f"cited ref of {patent_id}")
        cited.append(
            CitedRef(
                cited_id=normalize_patent_id(str(number)),
                cited_date=cited_date,
                title=ref.get("cited_patent_title") or None,
            )
        )
    return PatentRecord(
        patent_id=patent_id,
        title=raw.get("patent_title") or "",
        grant_date=grant_date,
        inventors=inventors,
        assignees=assignees,
        cpc_subgroups=cpcs,
        cited=tuple(cited),
    )


def derive_citations(patents: tuple[PatentRecord, ...]) -> tuple[CitationRecord, ...]:
    """One CitationRecord per distinct (citing, cited) pair, in page order.

    Self-references in wire data are dropped; they cannot be real citations.
    """
    seen: set[tuple[str, str]] = set()
    citations: list[CitationRecord] = []
    for patent in patents:
        for ref in patent.cited:
            if ref.cited_id == patent.patent_id:
                continue
            key = (patent.patent_id, ref.cited_id)
            if key in seen:
                continue
            seen.add(key)
            year = date.fromisoformat(ref.cited_date).year if ref.cited_date else None
            citations.append(
                CitationRecord(
                    citing_id=patent.patent_id,
                    cited_id=ref.cited_id,
                    cited_grant_year=year,
                )
            )
    return tuple(citations)


def _assemble_result(
    pages: list[str],
    request_hash: str,
    endpoint: str,
    recorded_at: str,
    source: str,
    snapshot_id: str | None,
    truncated: bool,
) -> RetrievalResult:
    patents: list[PatentRecord] = []
    seen_ids: set[str] = set()
    total_reported = 0
    for text in pages:
        raw_patents, _, total = parse_page(text)
        total_reported = max(total_reported, total)
        for raw in raw_patents:
            record = patent_from_api(raw)
            if record.patent_id in seen_ids:
                continue
            seen_ids.add(record.patent_id)
            patents.append(record)

    warning = None
    if truncated:
        warning = f"retrieval truncated at {len(pages)} pages by policy"
    elif total_reported != len(patents):
        warning = (
            f"provider reported {total_reported} patents but {len(patents)} were received"
        )
    provenance = Provenance(
        request_hash=request_hash,
        endpoint=endpoint,
        recorded_at=recorded_at,
        page_count=len(pages),
        total_reported=total_reported,
        patents_received=len(patents),
        integrity_warning=warning,
        source=source,
        snapshot_id=snapshot_id,
    )
    return RetrievalResult(
        patents=tuple(patents),
        citations=derive_citations(tuple(patents)),
        provenance=provenance,
    )


def serialize_retrieval(result: RetrievalResult) -> str:
    """Canonical JSON for a retrieval; identical for a recorded run and its replay."""
    payload = {
        "patents": [
            {
                "patent_id": p.patent_id,
                "title": p.title,
                "grant_date": p.grant_date,
                "inventors": [{"name": i.name, "country": i.country} for i in p.inventors],
                "assignees": [{"name": a.name, "country": a.country} for a in p.assignees],
                "cpc_subgroups": list(p.cpc_subgroups),
                "cited": [
                    {"cited_id": r.cited_id, "cited_date": r.cited_date, "title": r.title}
                    for r in p.cited
                ],
            }
            for p in result.patents
        ],
        "citations": [
            {
                "citing_id": c.citing_id,
                "cited_id": c.cited_id,
                "cited_grant_year": c.cited_grant_year,
            }
            for c in result.citations
        ],
        "provenance": result.provenance.stable_dict(),
    }
    return canonical_json(payload)


def replay_retrieval(snapshot: Snapshot) -> RetrievalResult:
    """Rebuild a RetrievalResult from a snapshot's raw pages, no network."""
    truncated = bool(snapshot.totals.get("truncated", False))
    return _assemble_result(
        pages=list(snapshot.pages),
        request_hash=snapshot.id,
        endpoint=snapshot.endpoint,
        recorded_at=snapshot.created_at,
        source="replay",
        snapshot_id=snapshot.id,
        truncated=truncated,
    )


def forward_citation_query(patent_id: str) -> Query:
    """Query matching every patent whose cited references include ``patent_id``."""
    return Query(advanced=Leaf(field="cited_patent_number", op="eq", value=normalize_patent_id(patent_id)))


class PatentsViewClient:
    """Shareable, internally synchronized client for the provider API.

    ``mode="live"`` talks HTTP through the transport; ``mode="replay"``
    resolves every fetch from the snapshot store and never touches the
    transport.
    """

    def __init__(
        self,
        transport: Transport | None = None,
        base_url: str | None = None,
        api_key: str | None = None,
        store: SnapshotStore | None = None,
        mode: str = "live",
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
        rng: random.Random | None = None,
        now: Callable[[], str] = utc_now_iso,
    ):
        if mode not in ("live", "replay"):
            raise ValueError(f"mode must be 'live' or 'replay', got {mode!r}")
        self.mode = mode
        self.base_url = (base_url or os.environ.get(BASE_URL_ENV) or DEFAULT_BASE_URL).rstrip("/")
        self.store = store
        self._transport = transport or HttpTransport(
            api_key=api_key or os.environ.get(API_KEY_ENV)
        )
        self._clock = clock
        self._sleep = sleep
        self._rng = rng or random.Random()
        self._now = now
        self._lock = threading.Lock()
        self._limiter: RateLimiter | None = None
        self._limiter_rate: float | None = None
        self._page_cache: dict[str, list[str]] = {}

    @property
    def endpoint(self) -> str:
        return self.base_url + QUERY_PATH

    def _limiter_for(self, policy: FetchPolicy) -> RateLimiter:
        with self._lock:
            if self._limiter is None or self._limiter_rate != policy.rate_limit:
                self._limiter = RateLimiter(policy.rate_limit, clock=self._clock, sleep=self._sleep)
                self._limiter_rate = policy.rate_limit
            return self._limiter

    def _request_with_retry(self, body: str, policy: FetchPolicy) -> str:
        limiter = self._limiter_for(policy)
        delay = policy.retry_base_delay
        last_error = "no attempts made"
        for attempt in range(1, policy.retry_attempts + 1):
            limiter.acquire()
            try:
                response = self._transport.post(self.endpoint, body, policy.timeout)
            except TransportError as exc:
                last_error = str(exc)
            else:
                if 200 <= response.status_code < 300:
                    return response.text
                if 400 <= response.status_code < 500:
                    excerpt = response.text.strip()[:300]
                    raise QueryRejectedError(
                        f"provider rejected the query (HTTP {response.status_code}): {excerpt}"
                    )
                last_error = f"HTTP {response.status_code}"
            if attempt < policy.retry_attempts:
                self._sleep(delay + self._rng.uniform(0.0, delay))
                delay *= 2
        raise TransportError(
            f"request failed after {policy.retry_attempts} attempts: {last_error}"
        )

    def _fetch_live(
        self,
        query: Query,
        policy: FetchPolicy,
        on_progress: Callable[[int, int], None] | None = None,
    ) -> RetrievalResult:
        request_hash = query_hash(query, endpoint=DEFAULT_ENDPOINT)
        first_body = to_request(query, page=1, per_page=policy.per_page)
        first_text = self._request_with_retry(first_body, policy)
        _, _, total = parse_page(first_text)

        total_pages = max(1, math.ceil(total / policy.per_page))
        truncated = policy.max_pages is not None and policy.max_pages < total_pages
        if truncated:
            total_pages = policy.max_pages

        if on_progress:
            on_progress(1, total_pages)
        pages: list[str] = [first_text] + [""] * (total_pages - 1)

        if total_pages > 1:
            done = threading.Lock()
            completed = [1]

            def fetch_page(page_number: int) -> None:
                body = to_request(query, page=page_number, per_page=policy.per_page)
                text = self._request_with_retry(body, policy)
                pages[page_number - 1] = text
                if on_progress:
                    with done:
                        completed[0] += 1
                        count = completed[0]
                    on_progress(count, total_pages)

            workers = min(policy.max_concurrent_requests, total_pages - 1)
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(fetch_page, n) for n in range(2, total_pages + 1)]
                for future in futures:
                    future.result()

        with self._lock:
            self._page_cache[request_hash] = list(pages)
        return _assemble_result(
            pages=pages,
            request_hash=request_hash,
            endpoint=self.endpoint,
            recorded_at=self._now(),
            source="live",
            snapshot_id=None,
            truncated=truncated,
        )

    def _fetch_replay(self, query: Query) -> RetrievalResult:
        if self.store is None:
            raise CacheMissError("replay mode requires a snapshot store")
        snapshot = self.store.get(query_hash(query, endpoint=DEFAULT_ENDPOINT))
        return replay_retrieval(snapshot)

    def fetch_patents(
        self,
        query: Query,
        policy: FetchPolicy = FetchPolicy(),
        on_progress: Callable[[int, int], None] | None = None,
    ) -> RetrievalResult:
        """Retrieve every page for ``query`` (or replay it from the store)."""
        if self.mode == "replay":
            return self._fetch_replay(query)
        return self._fetch_live(query, policy, on_progress)

    def fetch_forward_citations(
        self,
        patent_id: str,
        policy: FetchPolicy = FetchPolicy(),
        on_progress: Callable[[int, int], None] | None = None,
    ) -> RetrievalResult:
        """Retrieve every patent citing ``patent_id``.

        In live mode an existence probe runs first so an unknown id raises
        not-found instead of returning an empty result.
        """
        pid = normalize_patent_id(patent_id)
        query = forward_citation_query(pid)
        if self.mode == "replay":
            return self._fetch_replay(query)

        probe = Query(advanced=Leaf(field="patent_number", op="eq", value=pid))
        probe_body = to_request(probe, page=1, per_page=1, fields=("patent_number",))
        _, _, total = parse_page(self._request_with_retry(probe_body, policy))
        if total == 0:
            raise NotFoundError(f"patent {pid} not found")
        return self._fetch_live(query, policy, on_progress)

    def record_snapshot(
        self,
        query: Query,
        result: RetrievalResult,
        store: SnapshotStore | None = None,
        created_at: str | None = None,
    ) -> str:
        """Persist the raw pages and normalized parse of a live retrieval."""
        target_store = store or self.store
        if target_store is None:
            raise PersistenceError("no snapshot store to record into")
        query_text = canonical_query_text(query, endpoint=DEFAULT_ENDPOINT)
        if sha256_text(query_text) != result.provenance.request_hash:
            raise IntegrityError("snapshot query does not match the retrieval it records")
        with self._lock:
            pages = self._page_cache.get(result.provenance.request_hash)
        if pages is None:
            raise PersistenceError(
                "no raw pages cached for this retrieval (replayed results cannot be re-recorded)"
            )
        warning = result.provenance.integrity_warning
        truncated = warning is not None and warning.startswith("retrieval truncated")
        snapshot = Snapshot.create(
            query_text=query_text,
            pages=pages,
            normalized=serialize_retrieval(result),
            endpoint=self.endpoint,
            created_at=created_at or result.provenance.recorded_at,
            totals={
                "total_reported": result.provenance.total_reported,
                "patents_received": result.provenance.patents_received,
                "truncated": truncated,
            },
        )
        return target_store.put(snapshot)
