/** Builders for service payloads used across the UI tests. */

import type {
  Decision,
  RatingValue,
  SegmentView,
  SegmentsResponse,
  SeriesId,
  ThresholdSetView,
} from "../src/types.js";
import { MARKER_COLORS } from "../src/colors.js";

export function makeRatings(overrides: Partial<Record<SeriesId, RatingValue>> = {}):
    Record<SeriesId, RatingValue> {
  return {
    l_iri: "good", r_iri: "good", cd: "good", d0: "good",
    sci: "good", bdi: "good", d60: "good", bci: "good",
    ...overrides,
  };
}

export interface SegmentSpec {
  dmi: number;
  decision?: Decision;
  ratings?: Partial<Record<SeriesId, RatingValue>>;
  l_iri?: number;
  withFwd?: boolean;
  d0?: number;
  snr?: number | null;
  triggers?: string[];
}

export function makeSegment(spec: SegmentSpec): SegmentView {
  const decision = spec.decision ?? "no_action";
  const withFwd = spec.withFwd ?? true;
  return {
    route: "I-65",
    direction: "NB",
    lane: "DL",
    dmi: spec.dmi,
    rp_m: spec.dmi * 1.8,
    latitude: 39.5 + spec.dmi * 1.7e-5,
    longitude: -86.1,
    l_iri: spec.l_iri ?? 1.2,
    r_iri: 1.25,
    cd_left: 4.0,
    cd_right: 4.5,
    surface_image: `images/surface/${spec.dmi}.png`,
    row_image: null,
    completeness: withFwd ? "full" : "surface_only",
    fwd_distance_m: withFwd ? 0.0 : null,
    fwd: withFwd
      ? {
          latitude: 39.5, longitude: -86.1, station_m: spec.dmi * 1.8,
          load_lbf: 9000, hp_in: 12,
          d0: spec.d0 ?? 160, d12: 120, d24: 95, d36: 70, d60: 40,
          sci: 40, bdi: 25, bci: 25,
          monotone: true,
          m_r_psi: 22000, sn_required: 3.4, sn_effective: 2.8,
          snr: spec.snr === undefined ? 0.82 : spec.snr,
        }
      : null,
    ratings: makeRatings(spec.ratings),
    decision,
    patch_depth: decision.startsWith("full_depth")
      ? "full_depth"
      : decision === "no_action" ? "none" : "surface",
    patch_priority: decision.endsWith("required")
      ? "required"
      : decision === "no_action" ? "none" : "warning",
    patch_area_m2: decision === "no_action" ? 0 : 6.48,
    triggers: spec.triggers ?? (decision === "no_action" ? [] : ["d0"]),
    marker_color: MARKER_COLORS[decision],
    street_view_url:
      "https://www.google.com/maps/@?api=1&map_action=pano&viewpoint=39.500000,-86.100000",
  };
}

export function makeThresholds(provenance = "default"): ThresholdSetView {
  return {
    road_class: "interstate",
    provenance,
    bands: {
      d0: { lower: 149.1, upper: 214.9 },
      d60: { lower: 37.1, upper: 47.5 },
      sci: { lower: 43.2, upper: 49.3 },
      bci: { lower: 21.8, upper: 33.8 },
      bdi: { lower: 25.4, upper: 37.6 },
      iri: { lower: 1.73, upper: 2.07 },
      cd: { lower: 12.5, upper: 13.2 },
    },
  };
}

export function makeResponse(
  segments: SegmentView[],
  thresholds: ThresholdSetView = makeThresholds(),
): SegmentsResponse {
  const counts: Record<string, number> = {
    no_action: 0, surface_warning: 0, surface_required: 0,
    full_depth_warning: 0, full_depth_required: 0,
  };
  let surface = 0;
  let fullDepth = 0;
  for (const s of segments) {
    counts[s.decision] = (counts[s.decision] ?? 0) + 1;
    if (s.patch_depth === "surface") surface += s.patch_area_m2;
    if (s.patch_depth === "full_depth") fullDepth += s.patch_area_m2;
  }
  return {
    route: "I-65",
    direction: "NB",
    lane: "DL",
    road_class: "interstate",
    thresholds,
    summary: {
      n_segments: segments.length,
      decision_counts: counts,
      surface_area_m2: surface,
      full_depth_area_m2: fullDepth,
      total_area_m2: surface + fullDepth,
    },
    segments,
  };
}
