/**
 * Threshold explorer: live sliders over the rating bands.
 *
 * Dragging a slider re-queries the segments endpoint with query-level
 * overrides -- read-only what-if analysis. Nothing is persisted until
 * the explicit save action issues the PUT.
 */

import { ApiClient, thresholdQuery } from "./api.js";
import { SegmentsViewStore, debounce, isValidBand } from "./state.js";
import type { BandView, SegmentsResponse, ThresholdSetView } from "./types.js";

export interface ExplorerTarget {
  route: string;
  direction?: string;
  lane?: string;
}

export class ThresholdExplorer {
  private overrides: Record<string, BandView> = {};
  private target: ExplorerTarget | null = null;
  private readonly requery: ReturnType<typeof debounce<[]>>;

  constructor(
    private readonly api: ApiClient,
    readonly store: SegmentsViewStore,
    debounceMs = 250,
  ) {
    this.requery = debounce(() => {
      void this.query();
    }, debounceMs);
  }

  get sliderBands(): Record<string, BandView> {
    return { ...this.overrides };
  }

  async load(target: ExplorerTarget): Promise<SegmentsResponse | null> {
    this.target = target;
    this.overrides = {};
    this.requery.cancel();
    return this.query();
  }

  /**
   * One slider moved. Inverted or non-finite bands are blocked here,
   * before any request is issued.
   */
  slide(parameter: string, band: BandView): boolean {
    if (!isValidBand(band)) return false;
    this.overrides[parameter] = band;
    this.requery();
    return true;
  }

  /** Back to the stored thresholds: identical view to the initial load. */
  reset(): void {
    this.overrides = {};
    this.requery.cancel();
    void this.query();
  }

  /** Persist the slider positions as the class override, then refresh. */
  async save(roadClass: string, note?: string): Promise<ThresholdSetView> {
    const bands: Record<string, [number, number]> = {};
    for (const [pid, band] of Object.entries(this.overrides)) {
      bands[pid] = [band.lower, band.upper];
    }
    const stored = await this.api.putThresholds(roadClass, bands, note);
    this.overrides = {};
    this.requery.cancel();
    await this.query();
    return stored;
  }

  private async query(): Promise<SegmentsResponse | null> {
    if (this.target === null) return null;
    const { route, direction, lane } = this.target;
    const query = {
      direction,
      lane,
      thresholds: thresholdQuery(this.overrides),
    };
    return this.store.refresh(() => this.api.getSegments(route, query));
  }
}
