"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Any, Literal, Optional

from pydantic import BaseModel, Field


class QueryIn(BaseModel):
    mode: Literal["keyword", "advanced"]
    text: str


class SpectrumRequest(BaseModel):
    query: QueryIn
    source: Literal["live", "replay"] = "replay"
    snapshot: Optional[str] = None
    top_k: int = Field(default=5, ge=0, le=50)


class SpectrumPointOut(BaseModel):
    year: int
    c_total: int
    median5: float
    f: float
    top_patent_id: Optional[str]
    top_count: int
    pcs: float
    top_ids: list[str]


class RunnerUpOut(BaseModel):
    year: int
    pcs: float


class SeminalOut(BaseModel):
    peak_year: int
    patent_id: str
    peak_pcs: float
    peak_top_count: int
    runner_up_years: list[RunnerUpOut]
    co_leaders: list[str]
    title: Optional[str] = None
    grant_year: Optional[int] = None


class SpectrumResponse(BaseModel):
    points: list[SpectrumPointOut]
    seminal: Optional[SeminalOut]
    no_signal: bool
    provenance: dict[str, Any]


class DiffusionCellOut(BaseModel):
    year: int
    country: str
    citing_patents: int


class DiffusionTotalsOut(BaseModel):
    citing_patents: int
    inventor_instances: int


class DiffusionResponse(BaseModel):
    target_patent_id: str
    cells: list[DiffusionCellOut]
    inventor_tallies: dict[str, int]
    assignee_tallies: dict[str, int]
    totals: DiffusionTotalsOut
    summary: dict[str, Any]


class YearTopEntryOut(BaseModel):
    patent_id: str
    count: int
    title: Optional[str] = None


class YearTopResponse(BaseModel):
    year: int
    query_hash: str
    entries: list[YearTopEntryOut]


class HealthResponse(BaseModel):
    status: Literal["ok"]
    version: str
    store_root: str
    snapshots: int


class ApiError(BaseModel):
    code: Literal["query_rejected", "transport", "no_signal", "not_found", "internal"]
    message: str
    detail: Any = None
