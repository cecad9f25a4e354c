/** Pure view-model builders.
 *
 * Contract: the app does no spectrum math of its own. Every number that
 * reaches the screen is copied verbatim from a service response field;
 * these builders only select, order, and stringify. The peak flag comes
 * from the response's seminal block, never from a client-side argmax.
 */

import type {
  ApiErrorBody,
  DiffusionResponse,
  SpectrumResponse,
  YearTopResponse,
} from "./types.js";

/** Exact textual form of a response number (no rounding, no arithmetic). */
export function verbatim(value: number): string {
  return String(value);
}

export interface ChartBar {
  year: number;
  pcs: number;
  isPeak: boolean;
  tooltip: string;
}

export interface SeminalCardView {
  patentId: string;
  displayId: string;
  title: string;
  grantYear: string;
  peakYear: string;
  peakPcs: string;
  peakTopCount: string;
  coLeaders: string[];
  runnerUps: { year: string; pcs: string }[];
}

export interface SpectrumView {
  bars: ChartBar[];
  peakYear: number | null;
  card: SeminalCardView | null;
  provenance: string[];
  noSignal: boolean;
  banner: string | null;
}

export const NO_SIGNAL_BANNER = "No peak found — broaden the query.";

export function buildSpectrumView(response: SpectrumResponse): SpectrumView {
  const peakYear = response.seminal ? response.seminal.peak_year : null;
  const bars: ChartBar[] = response.points.map((p) => ({
    year: p.year,
    pcs: p.pcs,
    isPeak: peakYear !== null && p.year === peakYear,
    tooltip:
      `${p.year}: pcs ${verbatim(p.pcs)} | refs ${verbatim(p.c_total)}` +
      (p.top_patent_id ? ` | top US${p.top_patent_id} x${verbatim(p.top_count)}` : ""),
  }));

  let card: SeminalCardView | null = null;
  if (response.seminal) {
    const s = response.seminal;
    card = {
      patentId: s.patent_id,
      displayId: `US${s.patent_id}`,
      title: s.title ?? "(title not recorded)",
      grantYear: s.grant_year !== null ? verbatim(s.grant_year) : "?",
      peakYear: verbatim(s.peak_year),
      peakPcs: verbatim(s.peak_pcs),
      peakTopCount: verbatim(s.peak_top_count),
      coLeaders: s.co_leaders.map((id) => `US${id}`),
      runnerUps: s.runner_up_years.map((r) => ({
        year: verbatim(r.year),
        pcs: verbatim(r.pcs),
      })),
    };
  }

  const provenance: string[] = [];
  const prov = response.provenance;
  if (prov.patents !== undefined) {
    provenance.push(`${verbatim(prov.patents as number)} patents retrieved`);
  }
  if (prov.unique_cited_patents !== undefined) {
    provenance.push(`${verbatim(prov.unique_cited_patents as number)} unique cited patents`);
  }
  if (prov.edges_dropped_missing_year !== undefined) {
    provenance.push(
      `${verbatim(prov.edges_dropped_missing_year as number)} edges dropped (missing year)`,
    );
  }
  if (typeof prov.snapshot_id === "string" && prov.snapshot_id) {
    provenance.push(`snapshot ${prov.snapshot_id.slice(0, 12)}`);
  }

  return {
    bars,
    peakYear,
    card,
    provenance,
    noSignal: response.no_signal,
    banner: response.no_signal ? NO_SIGNAL_BANNER : null,
  };
}

export interface DiffusionSeries {
  country: string;
  /** year -> citing-patent count, verbatim cell values */
  byYear: Map<number, number>;
  tally: number;
}

export interface DiffusionView {
  targetId: string;
  displayId: string;
  years: number[];
  series: DiffusionSeries[];
  legend: string[];
  totalLine: string;
}

export function buildDiffusionView(response: DiffusionResponse): DiffusionView {
  const years = [...new Set(response.cells.map((c) => c.year))].sort((a, b) => a - b);
  const countries = [...new Set(response.cells.map((c) => c.country))].sort((a, b) => {
    const ta = response.inventor_tallies[a] ?? 0;
    const tb = response.inventor_tallies[b] ?? 0;
    return tb - ta || a.localeCompare(b);
  });
  const series: DiffusionSeries[] = countries.map((country) => {
    const byYear = new Map<number, number>();
    for (const cell of response.cells) {
      if (cell.country === country) {
        byYear.set(cell.year, cell.citing_patents);
      }
    }
    return { country, byYear, tally: response.inventor_tallies[country] ?? 0 };
  });
  const legend = series.map((s) => `${s.country}: ${verbatim(s.tally)} inventors`);
  return {
    targetId: response.target_patent_id,
    displayId: `US${response.target_patent_id}`,
    years,
    series,
    legend,
    totalLine:
      `${verbatim(response.totals.citing_patents)} citing patents · ` +
      `${verbatim(response.totals.inventor_instances)} inventor instances`,
  };
}

export interface YearTopRow {
  patentId: string;
  displayId: string;
  count: string;
  title: string;
}

export interface YearTopView {
  year: number;
  rows: YearTopRow[];
  empty: boolean;
}

export function buildYearTopView(response: YearTopResponse): YearTopView {
  return {
    year: response.year,
    rows: response.entries.map((e) => ({
      patentId: e.patent_id,
      displayId: `US${e.patent_id}`,
      count: verbatim(e.count),
      title: e.title ?? "",
    })),
    empty: response.entries.length === 0,
  };
}

export interface ErrorView {
  /** inline message next to the query box (bad queries) */
  inline: string | null;
  /** panel-level error (drill-down / diffusion fetch failures) */
  panel: string | null;
}

export function buildErrorView(error: ApiErrorBody): ErrorView {
  if (error.code === "query_rejected") {
    return { inline: error.message, panel: null };
  }
  return { inline: null, panel: `${error.code}: ${error.message}` };
}
