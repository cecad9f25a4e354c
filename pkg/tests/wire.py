"""Builders for synthetic provider wire responses, shared across tests."""

import json

from pcs.canon import canonical_json
from pcs.client import TransportResponse


def wire_patent(
    patent_id,
    date,
    title="Synthetic patent",
    inventors=(),
    assignees=(),
    cpcs=(),
    cited=(),
):
    """inventors: (first, last, country); cited: (id, date, title)."""
    return {
        "patent_number": patent_id,
        "patent_title": title,
        "patent_date": date,
        "inventors": [
            {"inventor_first_name": f, "inventor_last_name": l, "inventor_country": c}
            for f, l, c in inventors
        ],
        "assignees": [
            {"assignee_organization": name, "assignee_country": country}
            for name, country in assignees
        ],
        "cpcs": [{"cpc_subgroup_id": code} for code in cpcs],
        "cited_patents": [
            {"cited_patent_number": n, "cited_patent_date": d, "cited_patent_title": t}
            for n, d, t in cited
        ],
    }


def wire_page(patents, total):
    return json.dumps({"patents": patents, "count": len(patents), "total_patent_count": total})


def paged(patents, per_page):
    total = len(patents)
    chunks = [patents[i : i + per_page] for i in range(0, total, per_page)] or [[]]
    return [wire_page(chunk, total) for chunk in chunks]


class ScriptedTransport:
    """Serves canned pages keyed by the request's criterion object."""

    def __init__(self, routes):
        # routes: canonical_json(q) -> [page_text, ...]
        self.routes = routes
        self.calls = []

    def post(self, url, body, timeout):
        self.calls.append(body)
        data = json.loads(body)
        pages = self.routes[canonical_json(data["q"])]
        page_number = data.get("o", {}).get("page", 1)
        return TransportResponse(200, pages[page_number - 1])


class FlakyTransport:
    """Fails ``failures`` times (exception or status), then delegates."""

    def __init__(self, inner, failures, status=None):
        self.inner = inner
        self.remaining = failures
        self.status = status
        self.calls = 0

    def post(self, url, body, timeout):
        self.calls += 1
        if self.remaining > 0:
            self.remaining -= 1
            if self.status is not None:
                return TransportResponse(self.status, "upstream unavailable")
            from pcs.errors import TransportError

            raise TransportError("synthetic connection reset")
        return self.inner.post(url, body, timeout)


class ExplodingTransport:
    """Replay purity guard: any use is a test failure."""

    def post(self, url, body, timeout):
        raise AssertionError(f"network request attempted in replay mode: {url}")


class FakeClock:
    """Simulated monotonic clock; sleeping advances it."""

    def __init__(self):
        self.now = 0.0

    def monotonic(self):
        return self.now

    def sleep(self, seconds):
        self.now += max(0.0, seconds)


def route_key(query):
    from pcs.query import provider_criterion

    return canonical_json(provider_criterion(query))
