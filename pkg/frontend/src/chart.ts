/** SVG chart builders: pure functions from view models to markup strings.
 *
 * Pixel scaling is the only arithmetic here; displayed labels reuse the
 * verbatim strings carried by the view models.
 */

import type { DiffusionView, SpectrumView } from "./viewmodel.js";
import { verbatim } from "./viewmodel.js";

const PALETTE = [
  "#2563eb", "#dc2626", "#16a34a", "#9333ea", "#ea580c",
  "#0891b2", "#ca8a04", "#db2777", "#4b5563", "#65a30d",
];

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface BarGeometry {
  year: number;
  x: number;
  y: number;
  width: number;
  height: number;
  isPeak: boolean;
}

/** Scale bars into pixel space with the zero line shared across the chart. */
export function barGeometry(
  view: SpectrumView,
  width: number,
  height: number,
): { bars: BarGeometry[]; zeroY: number } {
  const values = view.bars.map((b) => b.pcs);
  const max = Math.max(0, ...values);
  const min = Math.min(0, ...values);
  const span = max - min || 1;
  const zeroY = (max / span) * height;
  const slot = width / Math.max(1, view.bars.length);
  const barWidth = Math.max(1, slot * 0.8);
  const bars = view.bars.map((bar, i) => {
    const scaled = (Math.abs(bar.pcs) / span) * height;
    return {
      year: bar.year,
      x: i * slot + (slot - barWidth) / 2,
      y: bar.pcs >= 0 ? zeroY - scaled : zeroY,
      width: barWidth,
      height: scaled,
      isPeak: bar.isPeak,
    };
  });
  return { bars, zeroY };
}

export function spectrumSvg(view: SpectrumView, width = 860, height = 260): string {
  const { bars, zeroY } = barGeometry(view, width, height - 20);
  const parts: string[] = [
    `<svg viewBox="0 0 ${width} ${height}" class="spectrum-chart" role="img">`,
    `<line class="axis" x1="0" y1="${zeroY}" x2="${width}" y2="${zeroY}"/>`,
  ];
  for (let i = 0; i < bars.length; i++) {
    const geom = bars[i];
    const bar = view.bars[i];
    const cls = geom.isPeak ? "bar peak" : "bar";
    parts.push(
      `<rect class="${cls}" data-year="${geom.year}" x="${geom.x.toFixed(2)}" ` +
        `y="${geom.y.toFixed(2)}" width="${geom.width.toFixed(2)}" ` +
        `height="${Math.max(geom.height, 0.5).toFixed(2)}">` +
        `<title>${escapeXml(bar.tooltip)}</title></rect>`,
    );
    if (geom.isPeak) {
      const cx = geom.x + geom.width / 2;
      parts.push(
        `<text class="peak-flag" x="${cx.toFixed(2)}" y="${Math.max(12, geom.y - 6).toFixed(2)}" ` +
          `text-anchor="middle">${geom.year}</text>`,
      );
    }
  }
  if (bars.length > 0) {
    const first = view.bars[0].year;
    const last = view.bars[view.bars.length - 1].year;
    parts.push(
      `<text class="tick" x="2" y="${height - 4}">${first}</text>`,
      `<text class="tick" x="${width - 2}" y="${height - 4}" text-anchor="end">${last}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

export function diffusionSvg(view: DiffusionView, width = 860, height = 240): string {
  const stackTotals = view.years.map((year) =>
    view.series.reduce((sum, s) => sum + (s.byYear.get(year) ?? 0), 0),
  );
  const max = Math.max(1, ...stackTotals);
  const slot = width / Math.max(1, view.years.length);
  const barWidth = Math.max(1, slot * 0.8);
  const parts: string[] = [
    `<svg viewBox="0 0 ${width} ${height}" class="diffusion-chart" role="img">`,
  ];
  view.years.forEach((year, i) => {
    let top = height - 16;
    view.series.forEach((s, si) => {
      const value = s.byYear.get(year) ?? 0;
      if (value === 0) {
        return;
      }
      const h = (value / max) * (height - 24);
      top -= h;
      parts.push(
        `<rect class="stack" data-year="${year}" data-country="${escapeXml(s.country)}" ` +
          `fill="${PALETTE[si % PALETTE.length]}" x="${(i * slot + (slot - barWidth) / 2).toFixed(2)}" ` +
          `y="${top.toFixed(2)}" width="${barWidth.toFixed(2)}" height="${h.toFixed(2)}">` +
          `<title>${year} ${escapeXml(s.country)}: ${verbatim(value)}</title></rect>`,
      );
    });
  });
  if (view.years.length > 0) {
    parts.push(
      `<text class="tick" x="2" y="${height - 4}">${view.years[0]}</text>`,
      `<text class="tick" x="${width - 2}" y="${height - 4}" text-anchor="end">` +
        `${view.years[view.years.length - 1]}</text>`,
    );
  }
  parts.push("</svg>");
  return parts.join("");
}

export function seriesColor(index: number): string {
  return PALETTE[index % PALETTE.length];
}
