/**
 * Response shapes of the pavement patching service.
 *
 * The UI performs no domain computation: every rating, decision,
 * color and statistic shown on screen arrives in one of these
 * payloads.
 */

export type Decision =
  | "no_action"
  | "surface_warning"
  | "surface_required"
  | "full_depth_warning"
  | "full_depth_required";

export type RatingValue = "good" | "fair" | "poor" | "unknown";

export type SeriesId =
  | "l_iri"
  | "r_iri"
  | "cd"
  | "d0"
  | "sci"
  | "bdi"
  | "d60"
  | "bci";

export const RATED_SERIES: readonly SeriesId[] = [
  "l_iri", "r_iri", "cd", "d0", "sci", "bdi", "d60", "bci",
];

export interface BandView {
  lower: number;
  upper: number;
}

export interface ThresholdSetView {
  road_class: string;
  provenance: string;
  bands: Record<string, BandView | null>;
}

export interface FwdView {
  latitude: number;
  longitude: number;
  station_m: number | null;
  load_lbf: number;
  hp_in: number | null;
  d0: number;
  d12: number;
  d24: number;
  d36: number;
  d60: number;
  sci: number;
  bdi: number;
  bci: number;
  monotone: boolean;
  m_r_psi: number | null;
  sn_required: number | null;
  sn_effective: number | null;
  snr: number | null;
}

export interface SegmentView {
  route: string;
  direction: string;
  lane: string;
  dmi: number;
  rp_m: number;
  latitude: number;
  longitude: number;
  l_iri: number;
  r_iri: number;
  cd_left: number;
  cd_right: number;
  surface_image: string | null;
  row_image: string | null;
  completeness: "full" | "surface_only";
  fwd_distance_m: number | null;
  fwd: FwdView | null;
  ratings: Record<SeriesId, RatingValue>;
  decision: Decision;
  patch_depth: string;
  patch_priority: string;
  patch_area_m2: number;
  triggers: string[];
  marker_color: string;
  street_view_url: string;
}

export interface SummaryView {
  n_segments: number;
  decision_counts: Record<string, number>;
  surface_area_m2: number;
  full_depth_area_m2: number;
  total_area_m2: number;
}

export interface SegmentsResponse {
  route: string;
  direction: string;
  lane: string;
  road_class: string;
  thresholds: ThresholdSetView;
  summary: SummaryView;
  segments: SegmentView[];
}

export interface StatsGroup {
  key: string;
  n: number;
  min: number;
  q1: number;
  median: number;
  mean: number;
  q3: number;
  max: number;
  outliers: number[];
}

export interface StatsResponse {
  route: string;
  parameter: string;
  groupby: string;
  groups: StatsGroup[];
}

export interface HistogramResponse {
  route: string;
  parameter: string;
  n: number;
  counts: number[];
  edges: number[];
}

export interface DatasetManifest {
  dataset_id: string;
  road_class: string;
  n_fwd: number;
  n_segments: number;
  [key: string]: unknown;
}
