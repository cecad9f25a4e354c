/** Wire types mirroring the service's response models. */

export type QueryMode = "keyword" | "advanced";

export interface SpectrumPoint {
  year: number;
  c_total: number;
  median5: number;
  f: number;
  top_patent_id: string | null;
  top_count: number;
  pcs: number;
  top_ids: string[];
}

export interface RunnerUp {
  year: number;
  pcs: number;
}

export interface Seminal {
  peak_year: number;
  patent_id: string;
  peak_pcs: number;
  peak_top_count: number;
  runner_up_years: RunnerUp[];
  co_leaders: string[];
  title: string | null;
  grant_year: number | null;
}

export interface Provenance {
  patents?: number;
  unique_cited_patents?: number;
  citation_edges?: number;
  edges_dropped_missing_year?: number;
  snapshot_id?: string | null;
  request_hash?: string;
  [key: string]: unknown;
}

export interface SpectrumResponse {
  points: SpectrumPoint[];
  seminal: Seminal | null;
  no_signal: boolean;
  provenance: Provenance;
}

export interface DiffusionCell {
  year: number;
  country: string;
  citing_patents: number;
}

export interface DiffusionResponse {
  target_patent_id: string;
  cells: DiffusionCell[];
  inventor_tallies: Record<string, number>;
  assignee_tallies: Record<string, number>;
  totals: { citing_patents: number; inventor_instances: number };
  summary: Record<string, unknown>;
}

export interface YearTopEntry {
  patent_id: string;
  count: number;
  title: string | null;
}

export interface YearTopResponse {
  year: number;
  query_hash: string;
  entries: YearTopEntry[];
}

export interface ApiErrorBody {
  code: "query_rejected" | "transport" | "no_signal" | "not_found" | "internal";
  message: string;
  detail?: unknown;
}

export interface ProgressEvent {
  pages_fetched: number;
  total_pages: number;
}
