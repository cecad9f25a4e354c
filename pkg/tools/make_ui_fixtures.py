#!/usr/bin/env python3
"""Record service responses as JSON fixtures for the frontend contract tests.

Runs the real HTTP service against the bundled snapshot store (plus a
throwaway store for the no-signal case) and freezes the exact response
bodies the browser app would receive. Deterministic; regenerating is
byte-identical.

Usage: python3 tools/make_ui_fixtures.py
"""

from __future__ import annotations

import json
import random
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from pcs.canon import canonical_json
from pcs.client import FetchPolicy, PatentsViewClient, TransportResponse
from pcs.query import parse_advanced, provider_criterion
from pcs.service import create_app
from pcs.store import SnapshotStore

REPO_ROOT = Path(__file__).resolve().parent.parent
FIXTURE_STORE = REPO_ROOT / "fixtures" / "store"
OUT_DIR = REPO_ROOT / "frontend" / "tests" / "fixtures"

ADVANCED_541 = '{"cpc_subgroup_id":"Y02E10V541"}'


class _OnePage:
    def __init__(self, criterion_key: str, page: str):
        self.key = criterion_key
        self.page = page

    def post(self, url: str, body: str, timeout: float) -> TransportResponse:
        data = json.loads(body)
        assert canonical_json(data["q"]) == self.key
        return TransportResponse(200, self.page)


def record_no_signal_store(root: Path) -> None:
    """A retrieval whose only citation lacks a grant date -> no_signal."""
    query = parse_advanced(ADVANCED_541)
    page = json.dumps(
        {
            "patents": [
                {
                    "patent_number": "9000001",
                    "patent_title": "Undatable reference holder",
                    "patent_date": "2010-01-01",
                    "inventors": [],
                    "assignees": [],
                    "cpcs": [{"cpc_subgroup_id": "Y02E10/541"}],
                    "cited_patents": [
                        {"cited_patent_number": "8000000", "cited_patent_date": None,
                         "cited_patent_title": None}
                    ],
                }
            ],
            "count": 1,
            "total_patent_count": 1,
        }
    )
    store = SnapshotStore(root)
    client = PatentsViewClient(
        transport=_OnePage(canonical_json(provider_criterion(query)), page),
        base_url="https://api.patentsview.org",
        store=store,
        sleep=lambda s: None,
        rng=random.Random(0),
        now=lambda: "2026-07-15T08:20:00Z",
    )
    result = client.fetch_patents(query, FetchPolicy(rate_limit=10_000.0))
    client.record_snapshot(query, result, store)


def save(name: str, content: bytes) -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    path = OUT_DIR / name
    text = json.dumps(json.loads(content), indent=2, sort_keys=True) + "\n"
    path.write_text(text, encoding="utf-8")
    print(f"wrote {path.relative_to(REPO_ROOT)}")


def main() -> None:
    spectrum_body = {
        "query": {"mode": "advanced", "text": ADVANCED_541},
        "source": "replay",
    }

    with TestClient(create_app(store_root=str(FIXTURE_STORE))) as client:
        spectrum = client.post("/api/spectrum", json=spectrum_body)
        assert spectrum.status_code == 200, spectrum.text
        save("spectrum_541.json", spectrum.content)

        query_hash = spectrum.json()["provenance"]["snapshot_id"]
        year_top = client.get(f"/api/years/1982/top?query_hash={query_hash}&limit=10")
        assert year_top.status_code == 200
        save("year_top_1982.json", year_top.content)

        diffusion = client.get("/api/patents/4335266/diffusion")
        assert diffusion.status_code == 200
        save("diffusion_4335266.json", diffusion.content)

        rejected = client.post(
            "/api/spectrum",
            json={"query": {"mode": "keyword", "text": "   "}, "source": "replay"},
        )
        assert rejected.status_code == 400
        save("error_query_rejected.json", rejected.content)

    with tempfile.TemporaryDirectory() as tmp:
        record_no_signal_store(Path(tmp))
        with TestClient(create_app(store_root=tmp)) as client:
            no_signal = client.post("/api/spectrum", json=spectrum_body)
            assert no_signal.status_code == 200
            assert no_signal.json()["no_signal"] is True
            save("no_signal.json", no_signal.content)


if __name__ == "__main__":
    main()
