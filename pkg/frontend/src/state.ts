/**
 * View state for a single-user browser session.
 *
 * Slider positions live here until an explicit save; concurrent
 * refreshes resolve last-write-wins, with stale responses discarded by
 * sequence number.
 */

import type { BandView, SegmentsResponse } from "./types.js";

export type ChartKind = "histogram" | "scatter" | "stems";

export interface UiState {
  route: string | null;
  direction: string | null;
  lane: string | null;
  /** slider positions not yet saved as an override */
  overrides: Record<string, BandView>;
  selectedDmi: number | null;
  chart: ChartKind;
  /** chosen parameter(s): one for histogram/stems, two for scatter */
  parameters: string[];
}

export function initialState(): UiState {
  return {
    route: null,
    direction: null,
    lane: null,
    overrides: {},
    selectedDmi: null,
    chart: "histogram",
    parameters: ["d0"],
  };
}

/** A band is usable only when finite and strictly ordered. */
export function isValidBand(band: BandView): boolean {
  return (
    Number.isFinite(band.lower) &&
    Number.isFinite(band.upper) &&
    band.lower < band.upper
  );
}

/**
 * Serializes refreshes of the segments view. Whoever calls `refresh`
 * last wins; responses to superseded requests resolve to null and are
 * never installed.
 */
export class SegmentsViewStore {
  private seq = 0;
  private view: SegmentsResponse | null = null;
  private listeners: Array<(view: SegmentsResponse) => void> = [];

  get current(): SegmentsResponse | null {
    return this.view;
  }

  subscribe(listener: (view: SegmentsResponse) => void): void {
    this.listeners.push(listener);
  }

  async refresh(load: () => Promise<SegmentsResponse>): Promise<SegmentsResponse | null> {
    const ticket = ++this.seq;
    const response = await load();
    if (ticket !== this.seq) return null; // a newer request won
    this.view = response;
    for (const listener of this.listeners) listener(response);
    return response;
  }
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  waitMs: number,
): ((...args: A) => void) & { cancel: () => void; flush: () => void } {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: A | null = null;
  const run = () => {
    timer = null;
    if (pending !== null) {
      const args = pending;
      pending = null;
      fn(...args);
    }
  };
  const wrapped = (...args: A) => {
    pending = args;
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(run, waitMs);
  };
  wrapped.cancel = () => {
    if (timer !== null) clearTimeout(timer);
    timer = null;
    pending = null;
  };
  wrapped.flush = () => {
    if (timer !== null) clearTimeout(timer);
    run();
  };
  return wrapped;
}
