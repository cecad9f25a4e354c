"""Citation-year spectrum computation.

Pipeline: citation edges -> per-year reference table -> dense year series
with each year's total de-trended against the centered 5-year median and
scaled by the share of that year's references owned by its most referenced
patent -> the peak year picks the seminal patent.

All functions here are pure; inputs and outputs are immutable values.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Sequence

from .errors import EmptyTableError, InvalidRecordError, NoSignalError

MIN_GRANT_YEAR = 1790  # first US patent grant
MEDIAN_WINDOW_RADIUS = 2


def _check_year(year: int | None, owner: object) -> None:
    if year is None:
        return
    current = date.today().year
    if not MIN_GRANT_YEAR <= year <= current:
        raise InvalidRecordError(
            f"cited grant year {year} outside [{MIN_GRANT_YEAR}, {current}] in record {owner!r}"
        )


@dataclass(frozen=True)
class CitationRecord:
    """One citing->cited edge, with the cited patent's grant year when known."""

    citing_id: str
    cited_id: str
    cited_grant_year: int | None = None

    def __post_init__(self):
        if not self.citing_id or not self.cited_id:
            raise InvalidRecordError(f"empty patent id in record {self!r}")
        if self.citing_id == self.cited_id:
            raise InvalidRecordError(f"self-citation: {self.citing_id!r} cites itself")
        _check_year(self.cited_grant_year, self)


@dataclass(frozen=True)
class CitationTable:
    """Per-year buckets of reference counts plus bookkeeping counters.

    ``buckets[year][cited_id]`` is the number of distinct retrieved patents
    citing ``cited_id``; the sum of all bucket counts always equals
    ``deduplicated_edges - edges_dropped_missing_year``.
    """

    buckets: dict[int, dict[str, int]]
    total_edges_in: int
    deduplicated_edges: int
    edges_dropped_missing_year: int

    def is_empty(self) -> bool:
        return not self.buckets

    def year_range(self) -> tuple[int, int]:
        if self.is_empty():
            raise EmptyTableError("citation table has no dated edges")
        return min(self.buckets), max(self.buckets)

    def bucketed_edges(self) -> int:
        return sum(sum(counts.values()) for counts in self.buckets.values())

    def unique_cited_count(self) -> int:
        """Number of distinct cited patent ids across all year buckets."""
        seen: set[str] = set()
        for counts in self.buckets.values():
            seen.update(counts)
        return len(seen)

    def ranked_for_year(self, year: int, limit: int | None = None) -> list[tuple[str, int]]:
        """Cited patents of ``year`` ranked by count (desc), then id (asc)."""
        counts = self.buckets.get(year, {})
        ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
        return ranked if limit is None else ranked[:limit]


def build_citation_table(citations: Iterable[CitationRecord]) -> CitationTable:
    """Deduplicate (citing, cited) pairs and bucket edges by cited grant year.

    Duplicate pairs count once; when duplicates disagree on the year, the
    first instance that carries a year wins. Pairs without a year are
    dropped from the buckets and tallied in ``edges_dropped_missing_year``.
    """
    total = 0
    chosen: dict[tuple[str, str], CitationRecord] = {}
    for record in citations:
        total += 1
        if record.citing_id == record.cited_id:
            raise InvalidRecordError(f"self-citation: {record.citing_id!r} cites itself")
        _check_year(record.cited_grant_year, record)
        key = (record.citing_id, record.cited_id)
        prev = chosen.get(key)
        if prev is None or (prev.cited_grant_year is None and record.cited_grant_year is not None):
            chosen[key] = record

    dropped = 0
    buckets: dict[int, dict[str, int]] = {}
    for record in chosen.values():
        if record.cited_grant_year is None:
            dropped += 1
            continue
        bucket = buckets.setdefault(record.cited_grant_year, {})
        bucket[record.cited_id] = bucket.get(record.cited_id, 0) + 1

    return CitationTable(
        buckets=buckets,
        total_edges_in=total,
        deduplicated_edges=len(chosen),
        edges_dropped_missing_year=dropped,
    )


@dataclass(frozen=True)
class SpectrumPoint:
    """One year of the spectrum.

    ``median5`` is the median over the centered 5-year window truncated to
    the observed year range; ``f`` is the signed deviation of the year's
    total from it; ``pcs`` is ``f`` scaled by the top patent's share of the
    year's references (0 for empty years). ``top_ids`` lists every patent
    tied at ``top_count``, sorted; ``top_patent_id`` is the first of them.
    """

    year: int
    c_total: int
    median5: float
    f: float
    top_patent_id: str | None
    top_count: int
    pcs: float
    top_ids: tuple[str, ...] = ()


@dataclass(frozen=True)
class Spectrum:
    """Dense, strictly ascending year series from min to max cited year."""

    points: tuple[SpectrumPoint, ...]
    query_provenance: dict = field(default_factory=dict)

    def years(self) -> list[int]:
        return [p.year for p in self.points]

    def point_for(self, year: int) -> SpectrumPoint | None:
        first = self.points[0].year if self.points else None
        if first is None or not first <= year <= self.points[-1].year:
            return None
        return self.points[year - first]


def window_median(totals: Sequence[int], index: int, radius: int = MEDIAN_WINDOW_RADIUS) -> float:
    """Median of ``totals`` over the centered window, truncated at the ends."""
    window = totals[max(0, index - radius) : index + radius + 1]
    return float(statistics.median(window))


def compute_spectrum(table: CitationTable, query_provenance: dict | None = None) -> Spectrum:
    """De-trend and normalize the table into a dense year spectrum."""
    if table.is_empty():
        raise EmptyTableError("citation table has no dated edges; nothing to aggregate")
    first, last = table.year_range()
    years = range(first, last + 1)
    totals = [sum(table.buckets.get(year, {}).values()) for year in years]

    points = []
    for i, year in enumerate(years):
        c_total = totals[i]
        median5 = window_median(totals, i)
        f = c_total - median5
        bucket = table.buckets.get(year, {})
        if bucket:
            top_count = max(bucket.values())
            top_ids = tuple(sorted(pid for pid, n in bucket.items() if n == top_count))
            pcs = f * top_count / c_total
            top_patent_id = top_ids[0]
        else:
            top_count, top_ids, top_patent_id, pcs = 0, (), None, 0.0
        points.append(
            SpectrumPoint(
                year=year,
                c_total=c_total,
                median5=median5,
                f=f,
                top_patent_id=top_patent_id,
                top_count=top_count,
                pcs=pcs,
                top_ids=top_ids,
            )
        )
    return Spectrum(points=tuple(points), query_provenance=dict(query_provenance or {}))


@dataclass(frozen=True)
class SeminalResult:
    """The spectrum's peak and the patent that owns it."""

    peak_year: int
    patent_id: str
    peak_pcs: float
    peak_top_count: int
    runner_up_years: tuple[tuple[int, float], ...]
    co_leaders: tuple[str, ...]


def select_seminal(spectrum: Spectrum, top_k: int = 5) -> SeminalResult:
    """Pick the peak-pcs year and its most referenced patent.

    Only years with references are candidates (an empty year has no patent
    to name). Ties on pcs resolve to the earliest year; ties on the within
    year count are all reported in ``co_leaders`` with the lexicographically
    smallest id as the primary. ``runner_up_years`` holds the next ``top_k``
    years by pcs, descending.
    """
    candidates = [p for p in spectrum.points if p.c_total > 0]
    if not candidates:
        raise NoSignalError("every year in the spectrum is empty; broaden the query")
    peak = min(candidates, key=lambda p: (-p.pcs, p.year))
    runners = sorted(
        (p for p in candidates if p.year != peak.year),
        key=lambda p: (-p.pcs, p.year),
    )[: max(0, top_k)]
    return SeminalResult(
        peak_year=peak.year,
        patent_id=peak.top_ids[0],
        peak_pcs=peak.pcs,
        peak_top_count=peak.top_count,
        runner_up_years=tuple((p.year, p.pcs) for p in runners),
        co_leaders=peak.top_ids,
    )
