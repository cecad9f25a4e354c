/** App wiring: query bar on top, spectrum center, seminal card right,
 * tabbed year drill-down / diffusion below.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  renderBanner,
  renderDiffusion,
  renderInlineError,
  renderPanelError,
  renderProgress,
  renderSeminalCard,
  renderSpectrum,
  renderYearTop,
  showPanel,
} from "./dom.js";
import {
  QueryHistory,
  applyResponse,
  initialViewState,
  selectYear,
  type ViewState,
} from "./state.js";
import type { QueryMode } from "./types.js";
import {
  buildDiffusionView,
  buildErrorView,
  buildSpectrumView,
  buildYearTopView,
} from "./viewmodel.js";

const api = new ApiClient("");
const history = new QueryHistory();
let state: ViewState = initialViewState();

function byId<T extends HTMLElement>(id: string): T {
  return document.getElementById(id) as T;
}

function renderCurrent(): void {
  if (!state.lastResponse) {
    return;
  }
  const view = buildSpectrumView(state.lastResponse);
  renderSpectrum(view, (year) => void inspectYear(year));
  renderSeminalCard(view, (patentId) => void showDiffusion(patentId));
  showPanel(state.activePanel);
  byId<HTMLButtonElement>("back").disabled = !history.canGoBack();
  byId<HTMLButtonElement>("forward").disabled = !history.canGoForward();
}

async function runQuery(mode: QueryMode, text: string, source: "live" | "replay"): Promise<void> {
  renderInlineError(null);
  renderPanelError(null);
  renderBanner(null);
  if (!text.trim()) {
    renderInlineError("enter a query first");
    return;
  }
  if (source === "live") {
    renderProgress(0, "fetching…");
  }
  try {
    const response = await api.runSpectrum(mode, text, source, (progress) => {
      renderProgress(
        progress.total_pages > 0 ? progress.pages_fetched / progress.total_pages : 0,
        `page ${progress.pages_fetched} / ${progress.total_pages}`,
      );
    });
    state = applyResponse(mode, text, response);
    history.push(mode, text, response);
    renderCurrent();
  } catch (error) {
    if (error instanceof DOMException && error.name === "AbortError") {
      return; // superseded by a newer query
    }
    if (error instanceof ApiError) {
      const view = buildErrorView(error.body);
      renderInlineError(view.inline);
      renderPanelError(view.panel);
      return;
    }
    renderPanelError(String(error));
  } finally {
    renderProgress(null, "");
  }
}

async function inspectYear(year: number): Promise<void> {
  const response = state.lastResponse;
  if (!response) {
    return;
  }
  const next = selectYear(state, year);
  if (next === state) {
    return;
  }
  state = next;
  const snapshotId = response.provenance.snapshot_id;
  if (typeof snapshotId !== "string" || !snapshotId) {
    renderPanelError("this retrieval has no recorded snapshot to drill into");
    return;
  }
  try {
    const response = await api.getYearTop(year, snapshotId);
    renderYearTop(buildYearTopView(response));
    renderPanelError(null);
    showPanel("year");
  } catch (error) {
    if (error instanceof ApiError) {
      renderPanelError(buildErrorView(error.body).panel);
      showPanel(state.activePanel);
      return;
    }
    throw error;
  }
}

async function showDiffusion(patentId: string): Promise<void> {
  try {
    const response = await api.getDiffusion(patentId);
    renderDiffusion(buildDiffusionView(response));
    state = { ...state, activePanel: "diffusion" };
    renderPanelError(null);
    showPanel("diffusion");
  } catch (error) {
    if (error instanceof ApiError) {
      renderPanelError(buildErrorView(error.body).panel);
      return;
    }
    throw error;
  }
}

function restore(entry: { mode: QueryMode; text: string } | null): void {
  const current = history.current();
  if (!entry || !current) {
    return;
  }
  byId<HTMLInputElement>(current.mode === "keyword" ? "mode-keyword" : "mode-advanced").checked =
    true;
  byId<HTMLTextAreaElement>("query-text").value = current.text;
  state = applyResponse(current.mode, current.text, current.response);
  renderCurrent();
}

function wire(): void {
  byId<HTMLFormElement>("query-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const mode: QueryMode = byId<HTMLInputElement>("mode-advanced").checked
      ? "advanced"
      : "keyword";
    const text = byId<HTMLTextAreaElement>("query-text").value;
    const source = byId<HTMLInputElement>("source-live").checked ? "live" : "replay";
    void runQuery(mode, text, source);
  });
  byId<HTMLButtonElement>("back").addEventListener("click", () => restore(history.back()));
  byId<HTMLButtonElement>("forward").addEventListener("click", () =>
    restore(history.forward()),
  );
  document.querySelectorAll("[data-tab]").forEach((tab) => {
    tab.addEventListener("click", () => {
      const panel = tab.getAttribute("data-tab") as "spectrum" | "year" | "diffusion";
      state = { ...state, activePanel: panel };
      showPanel(panel);
    });
  });
}

wire();
