/**
 * Chart panels: histogram, scatter and exceedance stems.
 *
 * All charts are plain DOM/SVG built from service responses. Stems use
 * the per-segment ratings the service already computed; a stem is
 * flagged when its series rates poor.
 */

import type { HistogramResponse, SegmentView, SeriesId } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

/** Direct field readers for plottable per-segment values. */
export const SEGMENT_FIELDS: Record<string, (s: SegmentView) => number | null> = {
  l_iri: (s) => s.l_iri,
  r_iri: (s) => s.r_iri,
  cd_left: (s) => s.cd_left,
  cd_right: (s) => s.cd_right,
  d0: (s) => s.fwd?.d0 ?? null,
  sci: (s) => s.fwd?.sci ?? null,
  bdi: (s) => s.fwd?.bdi ?? null,
  d60: (s) => s.fwd?.d60 ?? null,
  bci: (s) => s.fwd?.bci ?? null,
  snr: (s) => s.fwd?.snr ?? null,
  rp_m: (s) => s.rp_m,
};

/** Stem height per rated series; the flag itself comes from the API rating. */
const STEM_VALUE: Record<SeriesId, (s: SegmentView) => number | null> = {
  l_iri: (s) => s.l_iri,
  r_iri: (s) => s.r_iri,
  cd: (s) => Math.max(s.cd_left, s.cd_right),
  d0: (s) => s.fwd?.d0 ?? null,
  sci: (s) => s.fwd?.sci ?? null,
  bdi: (s) => s.fwd?.bdi ?? null,
  d60: (s) => s.fwd?.d60 ?? null,
  bci: (s) => s.fwd?.bci ?? null,
};

export function renderHistogram(container: HTMLElement, data: HistogramResponse): void {
  container.textContent = "";
  const total = data.counts.reduce((a, b) => a + b, 0);
  const peak = Math.max(...data.counts, 1);

  const caption = document.createElement("p");
  caption.className = "chart-caption";
  caption.textContent = `${data.parameter}: ${total} measurements in ${data.counts.length} bins`;
  container.appendChild(caption);

  const bars = document.createElement("div");
  bars.className = "histogram";
  data.counts.forEach((count, i) => {
    const bar = document.createElement("div");
    bar.className = "bar";
    bar.style.height = `${((100 * count) / peak).toFixed(1)}%`;
    bar.dataset.count = String(count);
    bar.title = `[${data.edges[i]}, ${data.edges[i + 1]}${i === data.counts.length - 1 ? "]" : ")"}: ${count}`;
    bars.appendChild(bar);
  });
  container.appendChild(bars);
}

export function renderScatter(
  container: HTMLElement,
  segments: SegmentView[],
  xField: string,
  yField: string,
): number {
  container.textContent = "";
  const readX = SEGMENT_FIELDS[xField];
  const readY = SEGMENT_FIELDS[yField];
  if (!readX || !readY) {
    const msg = document.createElement("p");
    msg.className = "empty-state";
    msg.textContent = `unknown parameter: ${!readX ? xField : yField}`;
    container.appendChild(msg);
    return 0;
  }
  const pts = segments
    .map((s) => ({ dmi: s.dmi, x: readX(s), y: readY(s) }))
    .filter((p): p is { dmi: number; x: number; y: number } =>
      p.x !== null && p.y !== null);
  if (pts.length === 0) {
    const msg = document.createElement("p");
    msg.className = "empty-state";
    msg.textContent = `no ${xField}/${yField} data on this lane`;
    container.appendChild(msg);
    return 0;
  }

  const xs = pts.map((p) => p.x);
  const ys = pts.map((p) => p.y);
  const xMin = Math.min(...xs);
  const xSpan = Math.max(...xs) - xMin || 1;
  const yMin = Math.min(...ys);
  const ySpan = Math.max(...ys) - yMin || 1;

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("viewBox", "0 0 100 100");
  svg.setAttribute("class", "scatter");
  for (const p of pts) {
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", (4 + (92 * (p.x - xMin)) / xSpan).toFixed(2));
    dot.setAttribute("cy", (96 - (92 * (p.y - yMin)) / ySpan).toFixed(2));
    dot.setAttribute("r", "1.4");
    dot.setAttribute("data-dmi", String(p.dmi));
    svg.appendChild(dot);
  }
  container.appendChild(svg);
  return pts.length;
}

export interface StemView {
  dmi: number;
  value: number;
  flagged: boolean;
  element: HTMLElement;
}

/**
 * Stem plot of one series along the lane; segments rating poor are
 * flagged and clicking any stem jumps to that segment's detail.
 */
export function renderStems(
  container: HTMLElement,
  segments: SegmentView[],
  series: SeriesId,
  onSelect: (dmi: number) => void,
): StemView[] {
  container.textContent = "";
  const read = STEM_VALUE[series];
  const rows = segments
    .map((s) => ({ dmi: s.dmi, value: read(s), rating: s.ratings[series] }))
    .filter((r): r is { dmi: number; value: number; rating: SegmentView["ratings"][SeriesId] } =>
      r.value !== null)
    .sort((a, b) => a.dmi - b.dmi);
  if (rows.length === 0) {
    const msg = document.createElement("p");
    msg.className = "empty-state";
    msg.textContent = `no ${series} data on this lane`;
    container.appendChild(msg);
    return [];
  }

  const peak = Math.max(...rows.map((r) => r.value), 1e-9);
  const plot = document.createElement("div");
  plot.className = "stems";
  const views = rows.map((row) => {
    const stem = document.createElement("button");
    stem.className = row.rating === "poor" ? "stem flagged" : "stem";
    stem.dataset.dmi = String(row.dmi);
    stem.style.height = `${((100 * row.value) / peak).toFixed(1)}%`;
    stem.title = `dmi ${row.dmi}: ${series} = ${row.value}`;
    stem.addEventListener("click", () => onSelect(row.dmi));
    plot.appendChild(stem);
    return { dmi: row.dmi, value: row.value, flagged: row.rating === "poor", element: stem };
  });
  container.appendChild(plot);
  return views;
}
