"""Deterministic JSON / CSV / table renderings of analysis results.

All renderers emit byte-stable output for identical inputs: JSON is dumped
with sorted keys, CSV columns are fixed per payload, tables use fixed
formatting. Floats go through ``str()`` (shortest round-trip form).
"""

from __future__ import annotations

import csv
import io
import json

from .diffusion import DiffusionProfile, profile_summary
from .spectrum import SeminalResult, Spectrum

SPECTRUM_CSV_COLUMNS = ("year", "c_total", "median5", "f", "top_patent_id", "top_count", "pcs")
SEMINAL_CSV_COLUMNS = ("peak_year", "patent_id", "peak_pcs", "peak_top_count", "co_leaders")
DIFFUSION_CSV_COLUMNS = ("year", "country", "citing_patents")


def render_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def spectrum_payload(spectrum: Spectrum) -> dict:
    return {
        "points": [
            {
                "year": p.year,
                "c_total": p.c_total,
                "median5": p.median5,
                "f": p.f,
                "top_patent_id": p.top_patent_id,
                "top_count": p.top_count,
                "pcs": p.pcs,
                "top_ids": list(p.top_ids),
            }
            for p in spectrum.points
        ],
        "provenance": spectrum.query_provenance,
    }


def seminal_payload(result: SeminalResult, title: str | None = None) -> dict:
    return {
        "peak_year": result.peak_year,
        "patent_id": result.patent_id,
        "peak_pcs": result.peak_pcs,
        "peak_top_count": result.peak_top_count,
        "runner_up_years": [{"year": year, "pcs": pcs} for year, pcs in result.runner_up_years],
        "co_leaders": list(result.co_leaders),
        "title": title,
    }


def diffusion_payload(profile: DiffusionProfile) -> dict:
    return {
        "target_patent_id": profile.target_patent_id,
        "cells": [
            {"year": year, "country": country, "citing_patents": count}
            for (year, country), count in sorted(profile.cells.items())
        ],
        "inventor_tallies": dict(sorted(profile.inventor_tallies.items())),
        "assignee_tallies": dict(sorted(profile.assignee_tallies.items())),
        "totals": {
            "citing_patents": profile.citing_patent_count,
            "inventor_instances": profile.inventor_instance_count,
        },
        "summary": profile_summary(profile),
    }


def _csv_text(columns: tuple[str, ...], rows: list[list]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buffer.getvalue()


def spectrum_csv(spectrum: Spectrum) -> str:
    rows = [
        [p.year, p.c_total, p.median5, p.f, p.top_patent_id or "", p.top_count, p.pcs]
        for p in spectrum.points
    ]
    return _csv_text(SPECTRUM_CSV_COLUMNS, rows)


def seminal_csv(result: SeminalResult) -> str:
    row = [
        result.peak_year,
        result.patent_id,
        result.peak_pcs,
        result.peak_top_count,
        ";".join(result.co_leaders),
    ]
    return _csv_text(SEMINAL_CSV_COLUMNS, [row])


def diffusion_csv(profile: DiffusionProfile) -> str:
    rows = [
        [year, country, count] for (year, country), count in sorted(profile.cells.items())
    ]
    return _csv_text(DIFFUSION_CSV_COLUMNS, rows)


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip(),
        "  ".join("-" * widths[i] for i in range(len(headers))).rstrip(),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _num(value: float) -> str:
    return f"{value:.3f}".rstrip("0").rstrip(".") if isinstance(value, float) else str(value)


def spectrum_table(spectrum: Spectrum) -> str:
    rows = [
        [
            str(p.year),
            str(p.c_total),
            _num(p.median5),
            _num(p.f),
            p.top_patent_id or "-",
            str(p.top_count),
            _num(p.pcs),
        ]
        for p in spectrum.points
    ]
    return _table(list(SPECTRUM_CSV_COLUMNS), rows)


def seminal_table(result: SeminalResult, title: str | None = None) -> str:
    lines = [
        f"seminal patent : {result.patent_id}",
        f"peak year      : {result.peak_year}",
        f"peak pcs       : {_num(result.peak_pcs)}",
        f"peak top count : {result.peak_top_count}",
    ]
    if title:
        lines.insert(1, f"title          : {title}")
    if len(result.co_leaders) > 1:
        lines.append(f"co-leaders     : {', '.join(result.co_leaders)}")
    if result.runner_up_years:
        runners = ", ".join(f"{year} ({_num(pcs)})" for year, pcs in result.runner_up_years)
        lines.append(f"runner-up years: {runners}")
    return "\n".join(lines) + "\n"


def diffusion_table(profile: DiffusionProfile) -> str:
    rows = [
        [str(year), country, str(count)]
        for (year, country), count in sorted(profile.cells.items())
    ]
    cells = _table(list(DIFFUSION_CSV_COLUMNS), rows)
    summary = profile_summary(profile)
    tally_rows = sorted(profile.inventor_tallies.items())
    tallies = ", ".join(
        f"{country}: {count} ({summary['inventor_shares'][country] * 100:.1f}%)"
        for country, count in tally_rows
    )
    footer = (
        f"\nciting patents: {profile.citing_patent_count}"
        f"\ninventor instances: {profile.inventor_instance_count}"
        + (f"\ninventor tallies: {tallies}" if tallies else "")
        + "\n"
    )
    return cells + footer


def snapshots_table(summaries: list[dict]) -> str:
    if not summaries:
        return _table(["id", "created_at", "pages", "patents", "query"], [])
    rows = []
    for s in summaries:
        totals = s.get("totals", {})
        query = s.get("query_text", "")
        rows.append(
            [
                s["id"][:12],
                s.get("created_at", ""),
                str(s.get("page_count", 0)),
                str(totals.get("patents_received", "")),
                (query[:57] + "...") if len(query) > 60 else query,
            ]
        )
    return _table(["id", "created_at", "pages", "patents", "query"], rows)
