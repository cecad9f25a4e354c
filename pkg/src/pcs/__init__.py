"""Patent citation spectroscopy: locate the foundational patent of a
technology area from the citation-year spectrum of a patent search."""

__version__ = "0.1.0"

from .diffusion import DiffusionProfile, build_profile, profile_summary
from .pipeline import AnalysisOutcome, analyze_retrieval
from .query import Query, parse_advanced, parse_keyword, query_hash, to_request
from .spectrum import (
    CitationRecord,
    CitationTable,
    SeminalResult,
    Spectrum,
    SpectrumPoint,
    build_citation_table,
    compute_spectrum,
    select_seminal,
)

__all__ = [
    "__version__",
    "AnalysisOutcome",
    "CitationRecord",
    "CitationTable",
    "DiffusionProfile",
    "Query",
    "SeminalResult",
    "Spectrum",
    "SpectrumPoint",
    "analyze_retrieval",
    "build_citation_table",
    "build_profile",
    "compute_spectrum",
    "parse_advanced",
    "parse_keyword",
    "profile_summary",
    "query_hash",
    "select_seminal",
    "to_request",
]
