/** View state and query history.
 *
 * History is keyed by the canonical form of the submitted query, so
 * resubmitting the same query (modulo whitespace or JSON key order) never
 * creates a duplicate entry, and back/forward restore exact prior views.
 */

import type { QueryMode, SpectrumResponse } from "./types.js";

function sortJson(value: unknown): unknown {
  if (Array.isArray(value)) {
    return value.map(sortJson);
  }
  if (value !== null && typeof value === "object") {
    const sorted: Record<string, unknown> = {};
    for (const key of Object.keys(value as Record<string, unknown>).sort()) {
      sorted[key] = sortJson((value as Record<string, unknown>)[key]);
    }
    return sorted;
  }
  return value;
}

/** Canonical history key for a submitted query. */
export function canonicalQueryKey(mode: QueryMode, text: string): string {
  const trimmed = text.trim();
  if (mode === "advanced") {
    try {
      return `advanced:${JSON.stringify(sortJson(JSON.parse(trimmed)))}`;
    } catch {
      return `advanced:${trimmed}`;
    }
  }
  return `keyword:${trimmed}`;
}

export interface HistoryEntry {
  key: string;
  mode: QueryMode;
  text: string;
  response: SpectrumResponse;
}

export class QueryHistory {
  private entries: HistoryEntry[] = [];
  private index = -1;

  /** Record a successful query; identical canonical keys never duplicate. */
  push(mode: QueryMode, text: string, response: SpectrumResponse): HistoryEntry {
    const key = canonicalQueryKey(mode, text);
    const existing = this.entries.findIndex((e) => e.key === key);
    if (existing >= 0) {
      this.entries[existing] = { key, mode, text, response };
      this.index = existing;
      return this.entries[existing];
    }
    this.entries = this.entries.slice(0, this.index + 1);
    this.entries.push({ key, mode, text, response });
    this.index = this.entries.length - 1;
    return this.entries[this.index];
  }

  current(): HistoryEntry | null {
    return this.index >= 0 ? this.entries[this.index] : null;
  }

  canGoBack(): boolean {
    return this.index > 0;
  }

  canGoForward(): boolean {
    return this.index < this.entries.length - 1;
  }

  back(): HistoryEntry | null {
    if (!this.canGoBack()) {
      return null;
    }
    this.index -= 1;
    return this.entries[this.index];
  }

  forward(): HistoryEntry | null {
    if (!this.canGoForward()) {
      return null;
    }
    this.index += 1;
    return this.entries[this.index];
  }

  size(): number {
    return this.entries.length;
  }

  keys(): string[] {
    return this.entries.map((e) => e.key);
  }
}

export type Panel = "spectrum" | "year" | "diffusion";

export interface ViewState {
  queryText: string;
  queryMode: QueryMode;
  lastResponse: SpectrumResponse | null;
  selectedYear: number | null;
  activePanel: Panel;
}

export function initialViewState(): ViewState {
  return {
    queryText: "",
    queryMode: "keyword",
    lastResponse: null,
    selectedYear: null,
    activePanel: "spectrum",
  };
}

/** Select a year for drill-down; the year must exist in the loaded spectrum. */
export function selectYear(state: ViewState, year: number): ViewState {
  const known = state.lastResponse?.points.some((p) => p.year === year) ?? false;
  if (!known) {
    return state;
  }
  return { ...state, selectedYear: year, activePanel: "year" };
}

/** A fresh response resets selection and returns to the spectrum panel. */
export function applyResponse(
  mode: QueryMode,
  text: string,
  response: SpectrumResponse,
): ViewState {
  return {
    queryText: text,
    queryMode: mode,
    lastResponse: response,
    selectedYear: null,
    activePanel: "spectrum",
  };
}
