/**
 * Thin typed client for the patching service.
 *
 * Every method maps to exactly one endpoint; nothing is cached or
 * post-processed here beyond JSON decoding, so what the caller gets is
 * what the service said.
 */

import type {
  BandView,
  DatasetManifest,
  HistogramResponse,
  SegmentsResponse,
  StatsResponse,
  ThresholdSetView,
} from "./types.js";

export interface RoadQuery {
  direction?: string;
  lane?: string;
  /** one-off band overrides, e.g. "d0:150:215,iri:1.5:2.0" */
  thresholds?: string;
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

export interface CsvDownload {
  bytes: Uint8Array;
  filename: string;
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchFn: FetchLike = fetch,
  ) {}

  private url(path: string, params?: Record<string, string | number | undefined>): string {
    const u = new URL(path, this.baseUrl);
    for (const [k, v] of Object.entries(params ?? {})) {
      if (v !== undefined) u.searchParams.set(k, String(v));
    }
    return u.toString();
  }

  private async request(path: string, init?: RequestInit,
                        params?: Record<string, string | number | undefined>): Promise<Response> {
    const resp = await this.fetchFn(this.url(path, params), init);
    if (!resp.ok) {
      let detail = `${resp.status}`;
      try {
        const body = await resp.json();
        if (body && typeof body.detail === "string") detail = body.detail;
        else detail = JSON.stringify(body);
      } catch {
        /* non-JSON error body; keep the status text */
      }
      throw new ApiError(resp.status, detail);
    }
    return resp;
  }

  async listDatasets(): Promise<DatasetManifest[]> {
    const resp = await this.request("/datasets");
    return (await resp.json()).datasets;
  }

  async getThresholds(roadClass: string): Promise<ThresholdSetView> {
    const resp = await this.request(`/thresholds/${roadClass}`);
    return resp.json();
  }

  async putThresholds(
    roadClass: string,
    bands: Record<string, [number, number]>,
    note?: string,
  ): Promise<ThresholdSetView> {
    const resp = await this.request(`/thresholds/${roadClass}`, {
      method: "PUT",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ bands, note: note ?? null }),
    });
    return resp.json();
  }

  async deriveThresholds(
    datasetId: string,
    pair?: [number, number],
  ): Promise<ThresholdSetView> {
    const resp = await this.request("/thresholds/derive", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ dataset_id: datasetId, pair: pair ?? null }),
    });
    return resp.json();
  }

  async getSegments(route: string, query: RoadQuery = {}): Promise<SegmentsResponse> {
    const resp = await this.request(
      `/roads/${encodeURIComponent(route)}/segments`, undefined, { ...query });
    return resp.json();
  }

  async getStats(
    route: string,
    parameter: string,
    opts: RoadQuery & { groupby?: string; threshold?: number } = {},
  ): Promise<StatsResponse> {
    const resp = await this.request(
      `/roads/${encodeURIComponent(route)}/stats`, undefined,
      { parameter, ...opts });
    return resp.json();
  }

  async getHistogram(
    route: string,
    parameter: string,
    opts: RoadQuery & { bins?: number } = {},
  ): Promise<HistogramResponse> {
    const resp = await this.request(
      `/roads/${encodeURIComponent(route)}/histogram`, undefined,
      { parameter, ...opts });
    return resp.json();
  }

  /**
   * Download the patching table exactly as the service serialized it.
   * The bytes are returned untouched -- the UI never re-serializes.
   */
  async fetchPatchingCsv(route: string, query: RoadQuery = {}): Promise<CsvDownload> {
    const resp = await this.request(
      `/roads/${encodeURIComponent(route)}/patching.csv`, undefined, { ...query });
    const bytes = new Uint8Array(await resp.arrayBuffer());
    const disposition = resp.headers.get("content-disposition") ?? "";
    const match = /filename="([^"]+)"/.exec(disposition);
    return { bytes, filename: match ? match[1]! : "patching.csv" };
  }
}

/** Effective band overrides rendered as the service's query syntax. */
export function thresholdQuery(overrides: Record<string, BandView>): string | undefined {
  const parts = Object.entries(overrides).map(
    ([pid, band]) => `${pid}:${band.lower}:${band.upper}`,
  );
  return parts.length > 0 ? parts.join(",") : undefined;
}
