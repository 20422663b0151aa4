/**
 * Application wiring: route picker, marker map, threshold sliders,
 * chart tabs, segment detail and the CSV download button.
 */

import { ApiClient } from "./api.js";
import { renderHistogram, renderScatter, renderStems, SEGMENT_FIELDS } from "./charts.js";
import { MARKER_COLORS, DECISION_LABELS } from "./colors.js";
import { renderDetail } from "./detail.js";
import { downloadPatchingCsv } from "./exporter.js";
import { ThresholdExplorer } from "./explorer.js";
import { initialState, isValidBand, SegmentsViewStore, type ChartKind } from "./state.js";
import { renderMarkers, type MarkerLayer } from "./markers.js";
import type { BandView, Decision, SegmentsResponse, SegmentView, SeriesId } from "./types.js";

function apiBase(): string {
  const fromQuery = new URLSearchParams(location.search).get("api");
  return fromQuery ?? "http://127.0.0.1:8000";
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const api = new ApiClient(apiBase());
const store = new SegmentsViewStore();
const explorer = new ThresholdExplorer(api, store);
const state = initialState();

let markerLayer: MarkerLayer | null = null;
let lastView: SegmentsResponse | null = null;

function renderLegend(container: HTMLElement): void {
  container.textContent = "";
  for (const [decision, color] of Object.entries(MARKER_COLORS)) {
    const item = document.createElement("span");
    item.className = "legend-item";
    const dot = document.createElement("i");
    dot.style.backgroundColor = color;
    item.append(dot, ` ${DECISION_LABELS[decision as Decision]}`);
    container.appendChild(item);
  }
}

function renderSummary(view: SegmentsResponse): void {
  const s = view.summary;
  el("summary").textContent =
    `${s.n_segments} segments · surface ${s.surface_area_m2.toFixed(2)} m² · ` +
    `full depth ${s.full_depth_area_m2.toFixed(2)} m² · total ${s.total_area_m2.toFixed(2)} m²`;
}

function selectSegment(seg: SegmentView): void {
  state.selectedDmi = seg.dmi;
  renderDetail(el("detail"), seg);
}

function selectByDmi(dmi: number): void {
  const seg = lastView?.segments.find((s) => s.dmi === dmi) ?? null;
  if (seg) selectSegment(seg);
}

function renderSliders(view: SegmentsResponse): void {
  const pane = el("sliders");
  pane.textContent = "";
  for (const [pid, band] of Object.entries(view.thresholds.bands)) {
    if (band === null) continue;
    const row = document.createElement("div");
    row.className = "slider-row";
    const label = document.createElement("label");
    label.textContent = pid;
    const lower = document.createElement("input");
    const upper = document.createElement("input");
    for (const [input, value] of [[lower, band.lower], [upper, band.upper]] as const) {
      input.type = "number";
      input.step = "any";
      input.value = String(value);
    }
    const onChange = () => {
      const next: BandView = { lower: Number(lower.value), upper: Number(upper.value) };
      row.classList.toggle("invalid", !isValidBand(next));
      explorer.slide(pid, next); // no-op (and no request) when invalid
    };
    lower.addEventListener("input", onChange);
    upper.addEventListener("input", onChange);
    row.append(label, lower, upper);
    pane.appendChild(row);
  }
}

function renderChart(): void {
  const view = lastView;
  const pane = el("chart");
  if (!view || !state.route) return;
  const kind = state.chart;
  if (kind === "histogram") {
    void api
      .getHistogram(state.route, state.parameters[0] ?? "d0", {
        direction: state.direction ?? undefined,
        lane: state.lane ?? undefined,
        bins: 10,
      })
      .then((h) => renderHistogram(pane, h))
      .catch((e) => { pane.textContent = String(e); });
  } else if (kind === "scatter") {
    const [x = "d0", y = "snr"] = state.parameters;
    renderScatter(pane, view.segments, x, y);
  } else {
    renderStems(pane, view.segments, (state.parameters[0] ?? "l_iri") as SeriesId, selectByDmi);
  }
}

function installView(view: SegmentsResponse): void {
  const firstLoad = lastView === null ||
    lastView.route !== view.route ||
    lastView.direction !== view.direction ||
    lastView.lane !== view.lane;
  lastView = view;
  renderSummary(view);
  if (firstLoad || markerLayer === null) {
    markerLayer = renderMarkers(el("map"), view.segments, selectSegment);
    renderSliders(view);
  } else {
    markerLayer.recolor(view.segments);
  }
  renderChart();
}

async function loadRoute(): Promise<void> {
  const route = (el<HTMLInputElement>("route")).value.trim();
  if (!route) return;
  state.route = route;
  state.direction = (el<HTMLInputElement>("direction")).value.trim() || null;
  state.lane = (el<HTMLInputElement>("lane")).value.trim() || null;
  state.selectedDmi = null;
  lastView = null;
  renderDetail(el("detail"), null);
  try {
    await explorer.load({
      route,
      direction: state.direction ?? undefined,
      lane: state.lane ?? undefined,
    });
    el("status").textContent = "";
  } catch (e) {
    el("status").textContent = String(e);
    renderMarkers(el("map"), [], selectSegment);
  }
}

export function start(): void {
  renderLegend(el("legend"));
  renderDetail(el("detail"), null);
  store.subscribe(installView);

  el("load").addEventListener("click", () => void loadRoute());
  el("reset").addEventListener("click", () => explorer.reset());
  el("save").addEventListener("click", () => {
    if (!lastView) return;
    void explorer
      .save(lastView.road_class)
      .then(() => { el("status").textContent = "thresholds saved"; })
      .catch((e) => { el("status").textContent = String(e); });
  });
  el("export").addEventListener("click", () => {
    if (!state.route) return;
    void downloadPatchingCsv(api, state.route, {
      direction: state.direction ?? undefined,
      lane: state.lane ?? undefined,
    }).catch((e) => { el("status").textContent = String(e); });
  });

  for (const kind of ["histogram", "scatter", "stems"] as ChartKind[]) {
    el(`tab-${kind}`).addEventListener("click", () => {
      state.chart = kind;
      renderChart();
    });
  }
  const paramInput = el<HTMLInputElement>("parameters");
  paramInput.addEventListener("change", () => {
    state.parameters = paramInput.value
      .split(",")
      .map((p) => p.trim())
      .filter((p) => p in SEGMENT_FIELDS || p === "cd");
    renderChart();
  });
}

if (typeof document !== "undefined" && document.getElementById("map")) {
  start();
}
