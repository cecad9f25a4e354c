/** Contract tests against recorded service responses: every number the view
 * layer would put on screen must equal a response field verbatim — the app
 * never recomputes de-trended deviations or dominance scores client-side.
 */

import { describe, expect, it } from "vitest";

import {
  NO_SIGNAL_BANNER,
  buildDiffusionView,
  buildErrorView,
  buildSpectrumView,
  buildYearTopView,
  verbatim,
} from "../src/viewmodel.js";
import type {
  ApiErrorBody,
  DiffusionResponse,
  SpectrumResponse,
  YearTopResponse,
} from "../src/types.js";

import diffusionJson from "./fixtures/diffusion_4335266.json";
import errorJson from "./fixtures/error_query_rejected.json";
import noSignalJson from "./fixtures/no_signal.json";
import spectrumJson from "./fixtures/spectrum_541.json";
import yearTopJson from "./fixtures/year_top_1982.json";

const spectrum = spectrumJson as unknown as SpectrumResponse;
const noSignal = noSignalJson as unknown as SpectrumResponse;
const diffusion = diffusionJson as unknown as DiffusionResponse;
const yearTop = yearTopJson as unknown as YearTopResponse;
const rejected = errorJson as unknown as ApiErrorBody;

describe("spectrum view", () => {
  const view = buildSpectrumView(spectrum);

  it("flags exactly the service-reported peak year (1982), no client argmax", () => {
    expect(view.peakYear).toBe(1982);
    expect(view.peakYear).toBe(spectrum.seminal!.peak_year);
    const flagged = view.bars.filter((b) => b.isPeak);
    expect(flagged).toHaveLength(1);
    expect(flagged[0].year).toBe(1982);
  });

  it("copies every bar value verbatim from the response points", () => {
    expect(view.bars).toHaveLength(spectrum.points.length);
    view.bars.forEach((bar, i) => {
      expect(Object.is(bar.pcs, spectrum.points[i].pcs)).toBe(true);
      expect(bar.year).toBe(spectrum.points[i].year);
      expect(bar.tooltip).toContain(verbatim(spectrum.points[i].pcs));
      expect(bar.tooltip).toContain(verbatim(spectrum.points[i].c_total));
    });
  });

  it("shows the seminal card with the recorded title and grant year", () => {
    expect(view.card).not.toBeNull();
    expect(view.card!.displayId).toBe("US4335266");
    expect(view.card!.title).toBe(spectrum.seminal!.title);
    expect(view.card!.title).toContain("heterojunction solar cell");
    expect(view.card!.grantYear).toBe("1982");
    expect(view.card!.peakPcs).toBe(verbatim(spectrum.seminal!.peak_pcs));
    expect(view.card!.peakTopCount).toBe(verbatim(spectrum.seminal!.peak_top_count));
  });

  it("surfaces retrieval provenance counts verbatim", () => {
    const joined = view.provenance.join(" | ");
    expect(joined).toContain(`${spectrum.provenance.patents} patents`);
    expect(joined).toContain(`${spectrum.provenance.unique_cited_patents} unique cited patents`);
    expect(joined).toContain(`${spectrum.provenance.edges_dropped_missing_year} edges dropped`);
  });

  it("raises no banner on a signal-bearing response", () => {
    expect(view.noSignal).toBe(false);
    expect(view.banner).toBeNull();
  });
});

describe("no-signal response", () => {
  const view = buildSpectrumView(noSignal);

  it("renders the broaden-query banner instead of a chart or card", () => {
    expect(view.noSignal).toBe(true);
    expect(view.banner).toBe(NO_SIGNAL_BANNER);
    expect(view.banner).toMatch(/broaden/i);
    expect(view.bars).toHaveLength(0);
    expect(view.card).toBeNull();
  });

  it("still reports the dropped-edge counter from provenance", () => {
    expect(view.provenance.join(" ")).toContain(
      `${noSignal.provenance.edges_dropped_missing_year} edges dropped`,
    );
  });
});

describe("diffusion view", () => {
  const view = buildDiffusionView(diffusion);

  it("legend totals 151 citing patents, verbatim from the response", () => {
    expect(diffusion.totals.citing_patents).toBe(151);
    expect(view.totalLine).toBe("151 citing patents · 351 inventor instances");
  });

  it("legend tallies copy the inventor counts verbatim", () => {
    const legend = view.legend.join(" | ");
    expect(legend).toContain("US: 273 inventors");
    expect(legend).toContain("JP: 56 inventors");
    expect(legend).toContain("TW: 10 inventors");
    for (const series of view.series) {
      expect(series.tally).toBe(diffusion.inventor_tallies[series.country]);
    }
  });

  it("every stacked cell equals its response cell", () => {
    for (const cell of diffusion.cells) {
      const series = view.series.find((s) => s.country === cell.country)!;
      expect(series.byYear.get(cell.year)).toBe(cell.citing_patents);
    }
    const stacked = view.series.reduce(
      (sum, s) => sum + [...s.byYear.values()].reduce((a, b) => a + b, 0),
      0,
    );
    expect(stacked).toBe(diffusion.cells.reduce((a, c) => a + c.citing_patents, 0));
  });

  it("orders years ascending for the time axis", () => {
    const sorted = [...view.years].sort((a, b) => a - b);
    expect(view.years).toEqual(sorted);
  });
});

describe("year drill-down view", () => {
  const view = buildYearTopView(yearTop);

  it("ranks the seminal patent first in its peak year with its verbatim count", () => {
    expect(view.year).toBe(1982);
    expect(view.rows[0].displayId).toBe("US4335266");
    expect(view.rows[0].count).toBe(verbatim(yearTop.entries[0].count));
  });

  it("flags empty years as an empty state, not an error", () => {
    const empty = buildYearTopView({ year: 1800, query_hash: "x", entries: [] });
    expect(empty.empty).toBe(true);
    expect(empty.rows).toHaveLength(0);
  });
});

describe("error views", () => {
  it("query_rejected renders inline at the query box", () => {
    const view = buildErrorView(rejected);
    expect(rejected.code).toBe("query_rejected");
    expect(view.inline).toBe(rejected.message);
    expect(view.panel).toBeNull();
  });

  it("not_found renders as a panel error, leaving the rest of the view intact", () => {
    const view = buildErrorView({ code: "not_found", message: "no snapshot" });
    expect(view.inline).toBeNull();
    expect(view.panel).toContain("not_found");
  });
});
