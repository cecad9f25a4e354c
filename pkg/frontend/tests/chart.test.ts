/** Chart geometry and markup: scaling only, peak visibly flagged. */

import { describe, expect, it } from "vitest";

import { barGeometry, diffusionSvg, spectrumSvg } from "../src/chart.js";
import { buildDiffusionView, buildSpectrumView } from "../src/viewmodel.js";
import type { DiffusionResponse, SpectrumResponse } from "../src/types.js";

import diffusionJson from "./fixtures/diffusion_4335266.json";
import spectrumJson from "./fixtures/spectrum_541.json";

const spectrum = spectrumJson as unknown as SpectrumResponse;
const diffusion = diffusionJson as unknown as DiffusionResponse;

describe("spectrum chart", () => {
  const view = buildSpectrumView(spectrum);

  it("marks the 1982 bar as the peak in the SVG", () => {
    const svg = spectrumSvg(view);
    expect(svg).toContain('class="bar peak" data-year="1982"');
    expect(svg.match(/class="bar peak"/g)).toHaveLength(1);
    expect(svg).toContain('<text class="peak-flag"');
    expect(svg).toContain(">1982</text>");
  });

  it("embeds the verbatim tooltip for the peak bar", () => {
    const peakPoint = spectrum.points.find((p) => p.year === 1982)!;
    expect(spectrumSvg(view)).toContain(`pcs ${String(peakPoint.pcs)}`);
  });

  it("keeps one bar per year and the tallest bar on the peak", () => {
    const { bars } = barGeometry(view, 860, 240);
    expect(bars).toHaveLength(spectrum.points.length);
    const tallest = bars.reduce((a, b) => (b.height > a.height ? b : a));
    expect(tallest.year).toBe(1982);
    expect(tallest.isPeak).toBe(true);
  });

  it("puts negative values below the zero line", () => {
    const { bars, zeroY } = barGeometry(view, 860, 240);
    view.bars.forEach((bar, i) => {
      if (bar.pcs < 0) {
        expect(bars[i].y).toBeCloseTo(zeroY, 6);
      } else {
        expect(bars[i].y).toBeLessThanOrEqual(zeroY + 1e-6);
      }
    });
  });
});

describe("diffusion chart", () => {
  const view = buildDiffusionView(diffusion);

  it("renders one stacked rect per nonzero (year, country) cell", () => {
    const svg = diffusionSvg(view);
    const rects = svg.match(/<rect class="stack"/g) ?? [];
    expect(rects).toHaveLength(diffusion.cells.length);
  });

  it("labels stacks with verbatim cell counts", () => {
    const svg = diffusionSvg(view);
    for (const cell of diffusion.cells.slice(0, 5)) {
      expect(svg).toContain(`${cell.year} ${cell.country}: ${String(cell.citing_patents)}`);
    }
  });
});
