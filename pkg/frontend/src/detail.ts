/**
 * Segment detail panel: raw values, ratings, triggers, image refs and
 * the street-view link. Image refs render as paths/links only; the UI
 * does not embed imagery.
 */

import { DECISION_LABELS } from "./colors.js";
import { RATED_SERIES, type SegmentView } from "./types.js";

function field(dl: HTMLElement, label: string, value: string): void {
  const dt = document.createElement("dt");
  dt.textContent = label;
  const dd = document.createElement("dd");
  dd.textContent = value;
  dl.append(dt, dd);
}

export function renderDetail(container: HTMLElement, seg: SegmentView | null): void {
  container.textContent = "";
  if (seg === null) {
    const hint = document.createElement("p");
    hint.className = "empty-state";
    hint.textContent = "Select a marker to inspect a segment.";
    container.appendChild(hint);
    return;
  }

  const heading = document.createElement("h3");
  heading.textContent = `${seg.route} ${seg.direction} ${seg.lane} — dmi ${seg.dmi}`;
  container.appendChild(heading);

  const decision = document.createElement("p");
  decision.className = `decision ${seg.decision}`;
  decision.textContent = DECISION_LABELS[seg.decision];
  container.appendChild(decision);

  if (seg.triggers.length > 0) {
    const triggers = document.createElement("p");
    triggers.className = "triggers";
    triggers.textContent = `triggered by: ${seg.triggers.join(", ")}`;
    container.appendChild(triggers);
  }

  const dl = document.createElement("dl");
  dl.className = "raw-values";
  field(dl, "L-IRI (m/km)", seg.l_iri.toFixed(2));
  field(dl, "R-IRI (m/km)", seg.r_iri.toFixed(2));
  field(dl, "crack density (%)", `${seg.cd_left.toFixed(1)} / ${seg.cd_right.toFixed(1)}`);
  if (seg.fwd !== null) {
    field(dl, "D0 (μm)", seg.fwd.d0.toFixed(1));
    field(dl, "SCI / BDI / BCI (μm)",
      `${seg.fwd.sci.toFixed(1)} / ${seg.fwd.bdi.toFixed(1)} / ${seg.fwd.bci.toFixed(1)}`);
    field(dl, "D60 (μm)", seg.fwd.d60.toFixed(1));
    if (seg.fwd.snr !== null) field(dl, "SNR", seg.fwd.snr.toFixed(3));
  } else {
    field(dl, "FWD", "no test point within range (surface-only rating)");
  }
  container.appendChild(dl);

  const ratings = document.createElement("ul");
  ratings.className = "ratings";
  for (const series of RATED_SERIES) {
    const li = document.createElement("li");
    li.dataset.series = series;
    li.dataset.rating = seg.ratings[series];
    li.textContent = `${series}: ${seg.ratings[series]}`;
    ratings.appendChild(li);
  }
  container.appendChild(ratings);

  const links = document.createElement("p");
  links.className = "links";
  const street = document.createElement("a");
  street.href = seg.street_view_url;
  street.target = "_blank";
  street.rel = "noreferrer";
  street.textContent = "street view";
  links.appendChild(street);
  for (const [label, ref] of [
    ["surface image", seg.surface_image],
    ["right-of-way image", seg.row_image],
  ] as const) {
    if (ref) {
      const span = document.createElement("span");
      span.className = "image-ref";
      span.textContent = ` · ${label}: ${ref}`;
      links.appendChild(span);
    }
  }
  container.appendChild(links);
}
