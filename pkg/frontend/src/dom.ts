/** DOM rendering for the view models. Browser-only; all logic that tests
 * care about lives in viewmodel.ts / chart.ts / state.ts.
 */

import { diffusionSvg, seriesColor, spectrumSvg } from "./chart.js";
import type { DiffusionView, SpectrumView, YearTopView } from "./viewmodel.js";

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node;
}

function text(tag: string, content: string, cls?: string): HTMLElement {
  const node = document.createElement(tag);
  node.textContent = content;
  if (cls) {
    node.className = cls;
  }
  return node;
}

export function renderBanner(message: string | null): void {
  const banner = el("banner");
  banner.textContent = message ?? "";
  banner.hidden = message === null;
}

export function renderInlineError(message: string | null): void {
  const node = el("query-error");
  node.textContent = message ?? "";
  node.hidden = message === null;
}

export function renderPanelError(message: string | null): void {
  const node = el("panel-error");
  node.textContent = message ?? "";
  node.hidden = message === null;
}

export function renderProgress(fraction: number | null, label: string): void {
  const wrap = el("progress");
  wrap.hidden = fraction === null;
  el("progress-label").textContent = label;
  (el("progress-fill") as HTMLElement).style.width =
    fraction === null ? "0%" : `${Math.round(fraction * 100)}%`;
}

export function renderSpectrum(
  view: SpectrumView,
  onYearClick: (year: number) => void,
): void {
  const chart = el("chart");
  chart.innerHTML = view.bars.length > 0 ? spectrumSvg(view) : "";
  chart.querySelectorAll("rect.bar").forEach((rect) => {
    rect.addEventListener("click", () => {
      const year = Number(rect.getAttribute("data-year"));
      onYearClick(year);
    });
  });

  const provenance = el("provenance");
  provenance.innerHTML = "";
  for (const line of view.provenance) {
    provenance.appendChild(text("span", line, "prov-item"));
  }
  renderBanner(view.banner);
}

export function renderSeminalCard(
  view: SpectrumView,
  onDiffusionClick: (patentId: string) => void,
): void {
  const card = el("seminal-card");
  card.innerHTML = "";
  if (!view.card) {
    card.appendChild(text("p", "No seminal patent for this query.", "card-empty"));
    return;
  }
  const c = view.card;
  card.appendChild(text("h2", c.displayId, "card-id"));
  card.appendChild(text("p", c.title, "card-title"));
  card.appendChild(text("p", `granted ${c.grantYear}`, "card-line"));
  card.appendChild(
    text("p", `peak ${c.peakYear} · pcs ${c.peakPcs} · ${c.peakTopCount} refs`, "card-line"),
  );
  if (c.coLeaders.length > 1) {
    card.appendChild(text("p", `co-leaders: ${c.coLeaders.join(", ")}`, "card-line"));
  }
  if (c.runnerUps.length > 0) {
    const runners = c.runnerUps.map((r) => `${r.year} (${r.pcs})`).join(", ");
    card.appendChild(text("p", `runner-ups: ${runners}`, "card-line subtle"));
  }
  const button = text("button", "View diffusion", "card-button");
  button.addEventListener("click", () => onDiffusionClick(c.patentId));
  card.appendChild(button);
}

export function renderYearTop(view: YearTopView): void {
  const panel = el("year-panel");
  panel.innerHTML = "";
  panel.appendChild(text("h3", `Top cited patents of ${view.year}`));
  if (view.empty) {
    panel.appendChild(text("p", "No references in this year.", "empty-state"));
    return;
  }
  const table = document.createElement("table");
  const head = document.createElement("tr");
  for (const col of ["patent", "refs", "title"]) {
    head.appendChild(text("th", col));
  }
  table.appendChild(head);
  for (const row of view.rows) {
    const tr = document.createElement("tr");
    tr.appendChild(text("td", row.displayId));
    tr.appendChild(text("td", row.count));
    tr.appendChild(text("td", row.title));
    table.appendChild(tr);
  }
  panel.appendChild(table);
}

export function renderDiffusion(view: DiffusionView): void {
  const panel = el("diffusion-panel");
  panel.innerHTML = "";
  panel.appendChild(text("h3", `Citers of ${view.displayId} by country and year`));
  const chart = document.createElement("div");
  chart.innerHTML = diffusionSvg(view);
  panel.appendChild(chart);
  const legend = document.createElement("ul");
  legend.className = "legend";
  view.legend.forEach((entry, i) => {
    const item = text("li", entry);
    item.style.setProperty("--swatch", seriesColor(i));
    legend.appendChild(item);
  });
  panel.appendChild(legend);
  panel.appendChild(text("p", view.totalLine, "legend-total"));
}

export function showPanel(panel: "spectrum" | "year" | "diffusion"): void {
  el("year-panel").hidden = panel !== "year";
  el("diffusion-panel").hidden = panel !== "diffusion";
  document.querySelectorAll("[data-tab]").forEach((tab) => {
    tab.classList.toggle("active", tab.getAttribute("data-tab") === panel);
  });
}
