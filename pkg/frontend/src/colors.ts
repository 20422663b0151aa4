import type { Decision } from "./types.js";

/**
 * The five-way decision-to-color map shown in the legend. The service
 * sends each segment's `marker_color` using the same mapping; the UI
 * trusts the server value and uses this table only for the legend and
 * for sanity checks in tests.
 */
export const MARKER_COLORS: Record<Decision, string> = {
  full_depth_required: "red",
  full_depth_warning: "orange",
  surface_required: "yellow",
  surface_warning: "blue",
  no_action: "green",
};

export const DECISION_LABELS: Record<Decision, string> = {
  full_depth_required: "full-depth patch required",
  full_depth_warning: "full-depth patch warning",
  surface_required: "surface patch required",
  surface_warning: "surface patch warning",
  no_action: "no action",
};
