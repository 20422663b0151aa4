/**
 * Map layer: one positioned marker per rated segment.
 *
 * Segments are 1.8 m long, far below tile resolution at network zoom,
 * so each is drawn as a dot at its coordinates rather than a
 * true-scale footprint. Colors come straight from the service's
 * `marker_color` field.
 */

import type { SegmentView } from "./types.js";

export interface MarkerLayer {
  markers: HTMLElement[];
  /** recolor in place after a what-if refresh, matching by dmi */
  recolor(segments: SegmentView[]): void;
}

interface Projection {
  x(lon: number): number;
  y(lat: number): number;
}

function fitProjection(segments: SegmentView[]): Projection {
  const lats = segments.map((s) => s.latitude);
  const lons = segments.map((s) => s.longitude);
  const latMin = Math.min(...lats);
  const latMax = Math.max(...lats);
  const lonMin = Math.min(...lons);
  const lonMax = Math.max(...lons);
  const latSpan = latMax - latMin || 1;
  const lonSpan = lonMax - lonMin || 1;
  // 4..96% keeps edge markers inside the pane
  return {
    x: (lon) => 4 + (92 * (lon - lonMin)) / lonSpan,
    y: (lat) => 96 - (92 * (lat - latMin)) / latSpan,
  };
}

export function renderMarkers(
  container: HTMLElement,
  segments: SegmentView[],
  onSelect: (segment: SegmentView) => void,
): MarkerLayer {
  container.textContent = "";
  if (segments.length === 0) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent = "No segments for this route.";
    container.appendChild(empty);
    return { markers: [], recolor: () => {} };
  }

  const proj = fitProjection(segments);
  const byDmi = new Map<number, HTMLElement>();
  const markers = segments.map((seg) => {
    const el = document.createElement("button");
    el.className = "marker";
    el.dataset.dmi = String(seg.dmi);
    el.dataset.decision = seg.decision;
    el.style.backgroundColor = seg.marker_color;
    el.style.left = `${proj.x(seg.longitude).toFixed(3)}%`;
    el.style.top = `${proj.y(seg.latitude).toFixed(3)}%`;
    el.title = `dmi ${seg.dmi}: ${seg.decision}`;
    el.addEventListener("click", () => onSelect(seg));
    container.appendChild(el);
    byDmi.set(seg.dmi, el);
    return el;
  });

  return {
    markers,
    recolor(updated: SegmentView[]) {
      for (const seg of updated) {
        const el = byDmi.get(seg.dmi);
        if (el) {
          el.style.backgroundColor = seg.marker_color;
          el.dataset.decision = seg.decision;
          el.title = `dmi ${seg.dmi}: ${seg.decision}`;
        }
      }
    },
  };
}
