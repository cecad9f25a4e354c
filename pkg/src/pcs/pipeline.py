"""Glue from retrievals to spectra and seminal picks, shared by CLI and service."""

from __future__ import annotations

from dataclasses import dataclass

from .client import RetrievalResult
from .errors import NoSignalError
from .spectrum import (
    CitationTable,
    SeminalResult,
    Spectrum,
    build_citation_table,
    compute_spectrum,
    select_seminal,
)


@dataclass(frozen=True)
class AnalysisOutcome:
    """Everything a renderer needs from one analyzed retrieval.

    ``no_signal`` is an analytic outcome, not an error: the retrieval held
    no dated citation edges, so there is no spectrum to search.
    """

    table: CitationTable
    spectrum: Spectrum | None
    seminal: SeminalResult | None
    no_signal: bool
    provenance: dict


def retrieval_provenance(result: RetrievalResult, table: CitationTable) -> dict:
    return {
        **result.provenance.to_dict(),
        "patents": len(result.patents),
        "citation_edges": table.total_edges_in,
        "deduplicated_edges": table.deduplicated_edges,
        "edges_dropped_missing_year": table.edges_dropped_missing_year,
        "unique_cited_patents": table.unique_cited_count(),
    }


def analyze_retrieval(result: RetrievalResult, top_k: int = 5) -> AnalysisOutcome:
    """Run the full table -> spectrum -> seminal pipeline on a retrieval."""
    table = build_citation_table(result.citations)
    provenance = retrieval_provenance(result, table)
    if table.is_empty():
        return AnalysisOutcome(table, None, None, True, provenance)
    spectrum = compute_spectrum(table, query_provenance=provenance)
    try:
        seminal = select_seminal(spectrum, top_k=top_k)
    except NoSignalError:
        return AnalysisOutcome(table, spectrum, None, True, provenance)
    return AnalysisOutcome(table, spectrum, seminal, False, provenance)


def cited_metadata(result: RetrievalResult) -> dict[str, dict]:
    """Map cited patent id -> {title, grant_date} gleaned from the wire data."""
    info: dict[str, dict] = {}
    for patent in result.patents:
        for ref in patent.cited:
            entry = info.setdefault(ref.cited_id, {"title": None, "grant_date": None})
            if entry["title"] is None and ref.title:
                entry["title"] = ref.title
            if entry["grant_date"] is None and ref.cited_date:
                entry["grant_date"] = ref.cited_date
    return info
